// gac: invariants, classification, moves, and move-path search for graph
// C*-algebras and Leavitt path algebras.
//
// Exit codes: 0 success/Equivalent, 1 NotEquivalent/invalid,
//             2 Unknown/inconclusive, 3 usage or hypothesis error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "gac/classify.hpp"
#include "gac/errors.hpp"
#include "gac/jsonio.hpp"
#include "gac/ktheory.hpp"
#include "gac/moves.hpp"
#include "gac/search.hpp"

namespace {

using namespace gac;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Graph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

std::string bundle_line(const InvariantBundle& b) {
    std::string line = "K0 = " + b.k0.to_string() + ", K1 = " + b.k1_topological.to_string() +
                       ", det sign = " + (b.det_sign ? to_string(*b.det_sign) : "n/a") +
                       ", singular = " + std::to_string(b.singular_count);
    if (b.k1_algebraic) line += ", K1^alg = " + b.k1_algebraic->to_string();
    return line;
}

std::string bundle_second_line(const InvariantBundle& b) {
    std::string line = "class = " + to_string(b.graph_class);
    if (b.cone_full) line += std::string("; cone full = ") + (*b.cone_full ? "yes" : "no");
    return line;
}

void print_verdict(const Verdict& v) {
    std::cout << "result: " << to_string(v.result) << "\n";
    std::cout << "theorem: " << v.theorem << "\n";
    for (const auto& c : v.compared)
        std::cout << "  " << c.invariant << ": " << c.a << " vs " << c.b << "\n";
    for (const auto& n : v.notes) std::cout << "note: " << n << "\n";
}

int verdict_exit(const Verdict& v) {
    switch (v.result) {
        case Outcome::Equivalent: return 0;
        case Outcome::NotEquivalent: return 1;
        case Outcome::Unknown: return 2;
    }
    return 3;
}

// --partition "v->v=1|1;v->w=0|2": per parallel class, one count per block.
std::vector<std::map<std::string, ExtNat>> parse_partition(const std::string& text,
                                                           const std::string& site, bool out_dir) {
    std::vector<std::map<std::string, ExtNat>> blocks;
    std::istringstream classes(text);
    std::string cls;
    while (std::getline(classes, cls, ';')) {
        if (cls.rfind("e:", 0) == 0) cls = cls.substr(2);
        std::size_t eq = cls.find('=');
        std::size_t arrow = cls.find("->");
        if (eq == std::string::npos || arrow == std::string::npos || arrow > eq)
            throw std::invalid_argument("partition classes look like src->dst=c1|c2|...");
        std::string src = cls.substr(0, arrow);
        std::string dst = cls.substr(arrow + 2, eq - arrow - 2);
        std::string other = out_dir ? dst : src;
        std::string fixed = out_dir ? src : dst;
        if (fixed != site)
            throw std::invalid_argument("partition class '" + cls + "' does not touch --at " +
                                        site);
        std::vector<ExtNat> counts;
        std::istringstream parts(cls.substr(eq + 1));
        std::string part;
        while (std::getline(parts, part, '|')) counts.push_back(ExtNat::parse(part));
        if (blocks.empty()) blocks.resize(counts.size());
        if (counts.size() != blocks.size())
            throw std::invalid_argument("every partition class needs one count per block");
        for (std::size_t b = 0; b < counts.size(); ++b)
            if (!counts[b].is_zero()) blocks[b][other] = counts[b];
    }
    if (blocks.empty()) throw std::invalid_argument("empty partition");
    return blocks;
}

std::map<std::string, ExtNat> parse_mult_list(const std::string& text) {
    std::map<std::string, ExtNat> m;
    std::istringstream items(text);
    std::string item;
    while (std::getline(items, item, ',')) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected label=count items, got '" + item + "'");
        m[item.substr(0, eq)] = ExtNat::parse(item.substr(eq + 1));
    }
    return m;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream items(text);
    std::string item;
    while (std::getline(items, item, ',')) out.push_back(item);
    return out;
}

int run_demo(bool as_json);

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph algebra classifier: exact K-theory invariants, graph moves, and "
                 "Morita/flow equivalence decisions"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit machine-readable JSON");

    // invariants
    auto* inv = app.add_subcommand("invariants", "print the K-theory invariants of a graph");
    std::string inv_file, inv_algebra = "cstar", inv_field = "C";
    inv->add_option("graph", inv_file, "graph file")->required();
    inv->add_option("--algebra", inv_algebra, "cstar | leavitt (default cstar)");
    inv->add_option("--field", inv_field,
                    "coefficient field for --algebra leavitt (default C)");

    // classify
    auto* cls = app.add_subcommand("classify", "decide Morita/flow equivalence of two graphs");
    std::string cls_a, cls_b, cls_regime, cls_field = "C", cls_k6a, cls_k6b;
    bool assume_simple = false, assume_pi = false;
    cls->add_option("a", cls_a, "first graph file")->required();
    cls->add_option("b", cls_b, "second graph file")->required();
    cls->add_option("--regime", cls_regime, "flow | cstar | leavitt")->required();
    cls->add_option("--field", cls_field, "field descriptor for the leavitt regime");
    cls->add_option("--k6-a", cls_k6a, "K6^alg of the first algebra (group expression)");
    cls->add_option("--k6-b", cls_k6b, "K6^alg of the second algebra (group expression)");
    cls->add_flag("--assume-simple", assume_simple, "skip the simplicity check");
    cls->add_flag("--assume-purely-infinite", assume_pi, "skip the purely-infinite check");

    // move
    auto* mv = app.add_subcommand("move", "apply one move and print the resulting graph");
    std::string mv_file, mv_kind, mv_at, mv_partition, mv_group, mv_merged, mv_new, mv_out,
        mv_delay, mv_names;
    mv->add_option("graph", mv_file, "graph file")->required();
    mv->add_option("--move", mv_kind, "S | S- | O | O- | I | I- | R | R- | CS")->required();
    mv->add_option("--at", mv_at, "site vertex (S, O, I, R, CS) or target (R-)");
    mv->add_option("--partition", mv_partition,
                   "O/I partition, e.g. \"v->v=1|1;v->w=0|2\" (counts per block)");
    mv->add_option("--group", mv_group, "O-/I- vertices to merge, comma-separated");
    mv->add_option("--merged", mv_merged, "O-/I- label for the merged vertex");
    mv->add_option("--new-label", mv_new, "S-/R- label for the added vertex");
    mv->add_option("--out", mv_out, "S- out-multiplicities, e.g. \"v=2,w=1\"");
    mv->add_option("--delay", mv_delay, "R- delayed in-edges, e.g. \"u=2,w=inf\"");
    mv->add_option("--names", mv_names, "O/I/CS labels for the split vertices");

    // search
    auto* sr = app.add_subcommand("search", "find a move sequence between two graphs");
    std::string sr_a, sr_b;
    SearchOptions sopts;
    bool allow_cs = false;
    sr->add_option("a", sr_a, "first graph file")->required();
    sr->add_option("b", sr_b, "second graph file")->required();
    sr->add_flag("--allow-cs", allow_cs, "permit one Cuntz splice when det signs differ");
    sr->add_option("--max-depth", sopts.max_depth, "total move budget (default 6)");
    sr->add_option("--max-vertices", sopts.max_vertices, "state vertex bound (default 8)");
    sr->add_option("--max-total-mult", sopts.max_total_multiplicity,
                   "state edge-mass bound (default 40)");
    sr->add_option("--max-blocks", sopts.max_partition_blocks,
                   "partition block bound (default 3)");
    sr->add_option("--max-new-mult", sopts.max_new_mult,
                   "bound on newly chosen multiplicities (default 3)");
    sr->add_option("--threads", sopts.threads, "worker threads (1 = serial reference)");

    // check-path
    auto* cp = app.add_subcommand("check-path", "replay and validate a move-path JSON file");
    std::string cp_file;
    cp->add_option("path", cp_file, "path JSON file")->required();

    // demo
    app.add_subcommand("demo", "run the built-in corpus");

    CLI11_PARSE(app, argc, argv);

    try {
        if (inv->parsed()) {
            Graph g = load_graph(inv_file);
            InvariantBundle b;
            if (inv_algebra == "cstar")
                b = invariants_cstar(g);
            else if (inv_algebra == "leavitt")
                b = invariants_leavitt(g, parse_field(inv_field));
            else
                throw std::invalid_argument("--algebra must be cstar or leavitt");
            if (as_json)
                std::cout << bundle_to_json_text(b, 2) << "\n";
            else
                std::cout << bundle_line(b) << "\n" << bundle_second_line(b) << "\n";
            return 0;
        }

        if (cls->parsed()) {
            Graph a = load_graph(cls_a);
            Graph b = load_graph(cls_b);
            ClassifyOptions opts{assume_simple, assume_pi};
            Verdict v;
            if (cls_regime == "flow") {
                v = flow_equivalence_decide(a, b);
            } else if (cls_regime == "cstar") {
                v = cstar_morita_decide(a, b, opts);
            } else if (cls_regime == "leavitt") {
                std::optional<AbGroup> k6a, k6b;
                if (!cls_k6a.empty()) k6a = parse_abgroup(cls_k6a);
                if (!cls_k6b.empty()) k6b = parse_abgroup(cls_k6b);
                v = leavitt_morita_decide(a, b, parse_field(cls_field), k6a, k6b, opts);
            } else {
                throw std::invalid_argument("--regime must be flow, cstar, or leavitt");
            }
            if (as_json)
                std::cout << verdict_to_json_text(v, 2) << "\n";
            else
                print_verdict(v);
            return verdict_exit(v);
        }

        if (mv->parsed()) {
            Graph g = load_graph(mv_file);
            MoveInstance m;
            m.kind = move_kind_from_string(mv_kind);
            m.at = mv_at;
            if (!mv_partition.empty())
                m.blocks = parse_partition(mv_partition, mv_at, m.kind == MoveKind::Outsplit);
            if (!mv_group.empty()) m.group = split_commas(mv_group);
            m.merged = mv_merged;
            m.new_label = mv_new;
            if (!mv_out.empty()) m.out_edges = parse_mult_list(mv_out);
            if (!mv_delay.empty()) m.delayed = parse_mult_list(mv_delay);
            if (!mv_names.empty()) m.new_names = split_commas(mv_names);
            Graph out = apply_move(g, m);
            if (as_json)
                std::cout << graph_to_json_text(out, 2) << "\n";
            else
                std::cout << serialize_graph(out);
            return 0;
        }

        if (sr->parsed()) {
            Graph a = load_graph(sr_a);
            Graph b = load_graph(sr_b);
            sopts.allow_cs = allow_cs;
            SearchResult r = find_move_path(a, b, sopts);
            if (!r.path) {
                if (as_json)
                    std::cout << "{\"found\": false, \"note\": " << nlohmann::json(r.note).dump()
                              << "}\n";
                else
                    std::cout << (r.note.empty() ? "inconclusive at bounds" : r.note) << "\n";
                return 2;
            }
            if (as_json) {
                std::cout << path_to_json_text(*r.path, 2) << "\n";
            } else {
                std::cout << "path of length " << r.path->steps.size() << ":\n";
                int i = 0;
                for (const auto& s : r.path->steps)
                    std::cout << "  " << ++i << ". " << s.describe() << "\n";
                std::cout << "end graph matches the target up to isomorphism\n";
            }
            return 0;
        }

        if (cp->parsed()) {
            MovePath p = path_from_json_text(read_file(cp_file));
            bool ok = replay_and_check(p);
            if (as_json) {
                nlohmann::json j;
                j["valid"] = ok;
                j["steps"] = p.steps.size();
                std::cout << j.dump(2) << "\n";
            } else {
                if (ok)
                    std::cout << "path valid (" << p.steps.size() << " steps)\n";
                else
                    std::cout << "path invalid\n";
            }
            return ok ? 0 : 1;
        }

        return run_demo(as_json);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis error: " << e.what() << "\n";
        return 3;
    } catch (const BoundError& e) {
        std::cerr << "bound error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

namespace {

int run_demo(bool as_json) {
    auto rose = [](int n) {
        Graph g({"v"});
        g.set_multiplicity(0, 0, ExtNat(static_cast<std::uint64_t>(n)));
        return g;
    };

    if (as_json) {
        nlohmann::json j;
        for (int n = 2; n <= 8; ++n) {
            nlohmann::json entry;
            entry["n"] = n;
            entry["invariants"] =
                nlohmann::json::parse(bundle_to_json_text(invariants_cstar(rose(n))));
            j["on_family"].push_back(entry);
        }
        Graph e2 = rose(2);
        MoveInstance cs;
        cs.kind = MoveKind::CuntzSplice;
        cs.at = "v";
        Graph e2cs = apply_move(e2, cs);
        j["e2_cstar"] = nlohmann::json::parse(verdict_to_json_text(cstar_morita_decide(e2, e2cs)));
        j["e2_leavitt"] = nlohmann::json::parse(
            verdict_to_json_text(leavitt_morita_decide(e2, e2cs, FieldDescriptor::complexes())));
        Graph pre = parse_graph("vertices: u v\nedge u u 1\nedge u v 1\nedge v u 1\n");
        MoveInstance cs_v;
        cs_v.kind = MoveKind::CuntzSplice;
        cs_v.at = "v";
        Graph post = apply_move(pre, cs_v);
        j["splice_example"] = {{"vertices", post.vertex_count()},
                               {"edges", post.total_edges().to_string()}};
        Graph r_inf = parse_graph("vertices: v\nedge v v inf\n");
        Graph pair_b = parse_graph("vertices: v w\nedge v w inf\nedge w v 2\n");
        j["infinite_cstar"] =
            nlohmann::json::parse(verdict_to_json_text(cstar_morita_decide(r_inf, pair_b)));
        j["infinite_leavitt"] = nlohmann::json::parse(verdict_to_json_text(
            leavitt_morita_decide(r_inf, pair_b, FieldDescriptor::complexes())));
        Graph square =
            parse_graph("vertices: a b\nedge a a 1\nedge a b 1\nedge b a 1\nedge b b 1\n");
        SearchResult sr = find_move_path(e2, square);
        j["search_e2_square"] =
            sr.path ? nlohmann::json::parse(path_to_json_text(*sr.path)) : nlohmann::json(sr.note);
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::cout << "== one-vertex graphs with n loops (O_n family) ==\n";
    for (int n = 2; n <= 8; ++n) {
        InvariantBundle b = invariants_cstar(rose(n));
        std::cout << "n=" << n << ": " << bundle_line(b) << "\n";
    }

    std::cout << "\n== E2 and its Cuntz splice ==\n";
    Graph e2 = rose(2);
    MoveInstance cs;
    cs.kind = MoveKind::CuntzSplice;
    cs.at = "v";
    Graph e2cs = apply_move(e2, cs);
    std::cout << "E2:  " << bundle_line(invariants_cstar(e2)) << "\n";
    std::cout << "E2-: " << bundle_line(invariants_cstar(e2cs)) << "\n";
    std::cout << "cstar regime:\n";
    print_verdict(cstar_morita_decide(e2, e2cs));
    std::cout << "leavitt regime over C:\n";
    print_verdict(leavitt_morita_decide(e2, e2cs, FieldDescriptor::complexes()));

    std::cout << "\n== two-vertex, three-edge graph and its Cuntz splice ==\n";
    Graph pre = parse_graph("vertices: u v\nedge u u 1\nedge u v 1\nedge v u 1\n");
    MoveInstance cs_v;
    cs_v.kind = MoveKind::CuntzSplice;
    cs_v.at = "v";
    Graph post = apply_move(pre, cs_v);
    std::cout << "before: " << pre.vertex_count() << " vertices, "
              << pre.total_edges().to_string() << " edges, "
              << bundle_line(invariants_cstar(pre)) << "\n";
    std::cout << "after:  " << post.vertex_count() << " vertices, "
              << post.total_edges().to_string() << " edges, "
              << bundle_line(invariants_cstar(post)) << "\n";

    std::cout << "\n== infinite-edge pair ==\n";
    Graph r_inf = parse_graph("vertices: v\nedge v v inf\n");
    Graph pair_b = parse_graph("vertices: v w\nedge v w inf\nedge w v 2\n");
    std::cout << "A: " << bundle_line(invariants_leavitt(r_inf, FieldDescriptor::complexes()))
              << "\n";
    std::cout << "B: " << bundle_line(invariants_leavitt(pair_b, FieldDescriptor::complexes()))
              << "\n";
    std::cout << "cstar regime:\n";
    print_verdict(cstar_morita_decide(r_inf, pair_b));
    std::cout << "leavitt regime over C:\n";
    print_verdict(leavitt_morita_decide(r_inf, pair_b, FieldDescriptor::complexes()));

    std::cout << "\n== search: E2 to its outsplit ==\n";
    Graph square = parse_graph(
        "vertices: a b\nedge a a 1\nedge a b 1\nedge b a 1\nedge b b 1\n");
    SearchResult sr = find_move_path(e2, square);
    if (sr.path) {
        std::cout << "path of length " << sr.path->steps.size() << ":\n";
        int i = 0;
        for (const auto& s : sr.path->steps) std::cout << "  " << ++i << ". " << s.describe() << "\n";
    } else {
        std::cout << sr.note << "\n";
    }
    return 0;
}

}  // namespace
