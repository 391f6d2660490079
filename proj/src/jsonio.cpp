#include "gac/jsonio.hpp"

#include "gac/errors.hpp"
#include "json.hpp"

namespace gac {

namespace {

using nlohmann::json;

json extnat_to_json(ExtNat m) {
    if (m.is_infinite()) return json("inf");
    return json(m.finite_value());
}

ExtNat extnat_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() != "inf") throw ParseError(0, "string multiplicity must be \"inf\"");
        return ExtNat::infinity();
    }
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw ParseError(0, "multiplicity must be a nonnegative integer or \"inf\"");
    return ExtNat(static_cast<std::uint64_t>(j.get<long long>()));
}

json mult_map_to_json(const std::map<std::string, ExtNat>& m) {
    json j = json::object();
    for (const auto& [k, v] : m) j[k] = extnat_to_json(v);
    return j;
}

std::map<std::string, ExtNat> mult_map_from_json(const json& j) {
    std::map<std::string, ExtNat> m;
    for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = extnat_from_json(it.value());
    return m;
}

json move_to_json(const MoveInstance& m) {
    json j;
    j["kind"] = to_string(m.kind);
    switch (m.kind) {
        case MoveKind::SourceRemoval:
        case MoveKind::Reduction:
            j["at"] = m.at;
            break;
        case MoveKind::SourceAddition:
            j["new_label"] = m.new_label;
            j["out"] = mult_map_to_json(m.out_edges);
            break;
        case MoveKind::Outsplit:
        case MoveKind::Insplit: {
            j["at"] = m.at;
            json blocks = json::array();
            for (const auto& b : m.blocks) blocks.push_back(mult_map_to_json(b));
            j["blocks"] = blocks;
            if (!m.new_names.empty()) j["new_names"] = m.new_names;
            break;
        }
        case MoveKind::Outamalgamation:
        case MoveKind::Inamalgamation:
            j["group"] = m.group;
            j["merged"] = m.merged.empty() ? m.group.front() : m.merged;
            break;
        case MoveKind::Delay:
            j["at"] = m.at;
            j["new_label"] = m.new_label;
            j["delayed"] = mult_map_to_json(m.delayed);
            break;
        case MoveKind::CuntzSplice:
            j["at"] = m.at;
            if (!m.new_names.empty()) j["new_names"] = m.new_names;
            break;
    }
    return j;
}

MoveInstance move_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ParseError(0, "move records need a kind");
    MoveInstance m;
    m.kind = move_kind_from_string(j["kind"].get<std::string>());
    if (j.contains("at")) m.at = j["at"].get<std::string>();
    if (j.contains("new_label")) m.new_label = j["new_label"].get<std::string>();
    if (j.contains("out")) m.out_edges = mult_map_from_json(j["out"]);
    if (j.contains("delayed")) m.delayed = mult_map_from_json(j["delayed"]);
    if (j.contains("group")) m.group = j["group"].get<std::vector<std::string>>();
    if (j.contains("merged")) m.merged = j["merged"].get<std::string>();
    if (j.contains("new_names")) m.new_names = j["new_names"].get<std::vector<std::string>>();
    if (j.contains("blocks"))
        for (const auto& b : j["blocks"]) m.blocks.push_back(mult_map_from_json(b));
    return m;
}

}  // namespace

std::string move_to_json_text(const MoveInstance& m, int indent) {
    return move_to_json(m).dump(indent);
}

MoveInstance move_from_json_text(const std::string& text) {
    try {
        return move_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
        throw ParseError(0, std::string("bad JSON: ") + e.what());
    }
}

std::string path_to_json_text(const MovePath& p, int indent) {
    json j;
    j["start"] = json::parse(graph_to_json_text(p.start));
    json steps = json::array();
    for (const auto& s : p.steps) steps.push_back(move_to_json(s));
    j["steps"] = steps;
    j["end"] = json::parse(graph_to_json_text(p.end));
    return j.dump(indent);
}

MovePath path_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(0, std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("start") || !j.contains("end") || !j.contains("steps"))
        throw ParseError(0, "path records need start, steps, end");
    MovePath p{graph_from_json_text(j["start"].dump()), {}, graph_from_json_text(j["end"].dump())};
    for (const auto& s : j["steps"]) p.steps.push_back(move_from_json(s));
    return p;
}

std::string verdict_to_json_text(const Verdict& v, int indent) {
    json j;
    j["result"] = to_string(v.result);
    j["theorem"] = v.theorem;
    json compared = json::array();
    for (const auto& c : v.compared) {
        json e;
        e["invariant"] = c.invariant;
        e["a"] = c.a;
        e["b"] = c.b;
        compared.push_back(e);
    }
    j["compared"] = compared;
    j["notes"] = v.notes;
    return j.dump(indent);
}

std::string bundle_to_json_text(const InvariantBundle& b, int indent) {
    json j;
    j["k0"] = b.k0.to_string();
    j["k1"] = b.k1_topological.to_string();
    if (b.det_sign)
        j["det_sign"] = to_string(*b.det_sign);
    else
        j["det_sign"] = nullptr;
    j["singular_count"] = b.singular_count;
    if (b.cone_full)
        j["cone_full"] = *b.cone_full;
    else
        j["cone_full"] = nullptr;
    j["graph_class"] = to_string(b.graph_class);
    if (b.k1_algebraic) j["k1_algebraic"] = b.k1_algebraic->to_string();
    return j.dump(indent);
}

}  // namespace gac
