#include "gac/moves.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gac/errors.hpp"

namespace gac {

std::string to_string(MoveKind k) {
    switch (k) {
        case MoveKind::SourceRemoval: return "S";
        case MoveKind::SourceAddition: return "S-";
        case MoveKind::Outsplit: return "O";
        case MoveKind::Outamalgamation: return "O-";
        case MoveKind::Insplit: return "I";
        case MoveKind::Inamalgamation: return "I-";
        case MoveKind::Reduction: return "R";
        case MoveKind::Delay: return "R-";
        case MoveKind::CuntzSplice: return "CS";
    }
    return "?";
}

MoveKind move_kind_from_string(const std::string& s) {
    if (s == "S") return MoveKind::SourceRemoval;
    if (s == "S-") return MoveKind::SourceAddition;
    if (s == "O") return MoveKind::Outsplit;
    if (s == "O-") return MoveKind::Outamalgamation;
    if (s == "I") return MoveKind::Insplit;
    if (s == "I-") return MoveKind::Inamalgamation;
    if (s == "R") return MoveKind::Reduction;
    if (s == "R-") return MoveKind::Delay;
    if (s == "CS") return MoveKind::CuntzSplice;
    throw std::invalid_argument("unknown move kind '" + s + "'");
}

namespace {

std::string render_map(const std::map<std::string, ExtNat>& m) {
    std::string out;
    for (const auto& [k, v] : m) {
        if (!out.empty()) out += ",";
        out += k + "=" + v.to_string();
    }
    return out;
}

std::string render_blocks(const std::vector<std::map<std::string, ExtNat>>& blocks) {
    // per parallel class: counts per block separated by '|'
    std::set<std::string> keys;
    for (const auto& b : blocks)
        for (const auto& [k, v] : b) keys.insert(k);
    std::string out;
    for (const std::string& k : keys) {
        if (!out.empty()) out += ";";
        out += k + "=";
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            auto it = blocks[i].find(k);
            out += (it == blocks[i].end() ? "0" : it->second.to_string());
            if (i + 1 < blocks.size()) out += "|";
        }
    }
    return out;
}

}  // namespace

std::string MoveInstance::describe() const {
    switch (kind) {
        case MoveKind::SourceRemoval: return "S at " + at;
        case MoveKind::SourceAddition:
            return "S- add " + new_label + " with out " + render_map(out_edges);
        case MoveKind::Outsplit: return "O at " + at + ": " + render_blocks(blocks);
        case MoveKind::Outamalgamation: {
            std::string g;
            for (const auto& x : group) g += (g.empty() ? "" : ",") + x;
            return "O- merge {" + g + "} -> " + (merged.empty() ? group.front() : merged);
        }
        case MoveKind::Insplit: return "I at " + at + ": " + render_blocks(blocks);
        case MoveKind::Inamalgamation: {
            std::string g;
            for (const auto& x : group) g += (g.empty() ? "" : ",") + x;
            return "I- merge {" + g + "} -> " + (merged.empty() ? group.front() : merged);
        }
        case MoveKind::Reduction: return "R at " + at;
        case MoveKind::Delay:
            return "R- at " + at + ": insert " + new_label + " delaying " + render_map(delayed);
        case MoveKind::CuntzSplice: return "CS at " + at;
    }
    return "?";
}

std::string MoveInstance::sort_key() const {
    std::string key = std::to_string(static_cast<int>(kind)) + "#" + describe();
    for (const auto& n : new_names) key += "#" + n;
    return key;
}

bool cuntz_splice_admissible(const Graph& g, int v) {
    auto reach = reachability(g);
    if (!reach[v][v]) return false;  // not on a cycle
    int n = g.vertex_count();
    std::vector<int> scc;
    for (int w = 0; w < n; ++w)
        if (w == v || (reach[v][w] && reach[w][v])) scc.push_back(w);
    // A strongly connected piece that is more than a single cycle gives every
    // of its vertices two distinct return paths.
    for (int w : scc) {
        ExtNat induced;
        for (int x : scc) induced += g.multiplicity(w, x);
        if (induced > ExtNat(1)) return true;
    }
    return false;
}

namespace {

MoveCheck fail(const std::string& reason) { return {false, reason}; }

bool is_regular(const Graph& g, int v) {
    ExtNat out = g.out_total(v);
    return !out.is_zero() && !out.is_infinite();
}

// Validates that `blocks` partitions the parallel classes reported by
// `class_mult` (target -> multiplicity, or source -> multiplicity for
// insplits).  An infinite class must place its infinite remainder in at least
// one block; finite classes must split exactly.
MoveCheck check_partition(const Graph& g, const std::map<std::string, ExtNat>& class_mult,
                          const std::vector<std::map<std::string, ExtNat>>& blocks,
                          const char* edge_set_name) {
    for (const auto& block : blocks) {
        for (const auto& [label, count] : block) {
            if (!g.has_vertex(label)) return fail("unknown vertex '" + label + "' in partition");
            if (count.is_zero()) return fail("zero count in partition block");
            if (class_mult.find(label) == class_mult.end())
                return fail("partition must cover " + std::string(edge_set_name) +
                            ": no parallel class at '" + label + "'");
        }
        ExtNat total;
        for (const auto& [label, count] : block) total += count;
        if (total.is_zero()) return fail("partition blocks must be nonempty");
    }
    for (const auto& [label, m] : class_mult) {
        ExtNat finite_sum;
        int infinite_entries = 0;
        for (const auto& block : blocks) {
            auto it = block.find(label);
            if (it == block.end()) continue;
            if (it->second.is_infinite())
                ++infinite_entries;
            else
                finite_sum += it->second;
        }
        if (m.is_infinite()) {
            if (infinite_entries == 0)
                return fail("infinite parallel class at '" + label +
                            "' needs an infinite part in some block");
        } else {
            if (infinite_entries > 0)
                return fail("finite parallel class at '" + label + "' cannot take an infinite part");
            if (finite_sum != m)
                return fail("partition must cover " + std::string(edge_set_name) +
                            " exactly at '" + label + "'");
        }
    }
    return {true, ""};
}

MoveCheck check_new_names(const Graph& g, const std::vector<std::string>& names,
                          std::size_t expected, const std::string& site) {
    if (names.empty()) return {true, ""};
    if (names.size() != expected) return fail("wrong number of new vertex names");
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty()) return fail("empty vertex name");
        if (!seen.insert(n).second) return fail("repeated new vertex name '" + n + "'");
        if (n != site && g.has_vertex(n)) return fail("new vertex name '" + n + "' already in use");
    }
    return {true, ""};
}

std::map<std::string, ExtNat> out_map(const Graph& g, int v) {
    std::map<std::string, ExtNat> m;
    for (int w = 0; w < g.vertex_count(); ++w)
        if (!g.multiplicity(v, w).is_zero()) m[g.vertex(w)] = g.multiplicity(v, w);
    return m;
}

std::map<std::string, ExtNat> in_map(const Graph& g, int v) {
    std::map<std::string, ExtNat> m;
    for (int u = 0; u < g.vertex_count(); ++u)
        if (!g.multiplicity(u, v).is_zero()) m[g.vertex(u)] = g.multiplicity(u, v);
    return m;
}

MoveCheck validate_amalgamation(const Graph& g, const MoveInstance& m, bool out_direction) {
    if (m.group.size() < 2) return fail("amalgamation needs at least two vertices");
    std::set<std::string> members(m.group.begin(), m.group.end());
    if (members.size() != m.group.size()) return fail("repeated vertex in group");
    for (const auto& x : m.group)
        if (!g.has_vertex(x)) return fail("unknown vertex '" + x + "' in group");
    std::string merged = m.merged.empty() ? m.group.front() : m.merged;
    if (!members.count(merged) && g.has_vertex(merged))
        return fail("merged label '" + merged + "' already in use");

    int n = g.vertex_count();
    std::vector<int> idx;
    for (const auto& x : m.group) idx.push_back(g.index_of(x));

    if (out_direction) {
        // in-edges from outside must agree, rows must be constant on group columns
        for (int u = 0; u < n; ++u) {
            if (members.count(g.vertex(u))) continue;
            for (std::size_t i = 1; i < idx.size(); ++i)
                if (g.multiplicity(u, idx[i]) != g.multiplicity(u, idx[0]))
                    return fail("in-edges from '" + g.vertex(u) + "' differ across the group");
        }
        for (int xi : idx)
            for (std::size_t j = 1; j < idx.size(); ++j)
                if (g.multiplicity(xi, idx[j]) != g.multiplicity(xi, idx[0]))
                    return fail("edges from '" + g.vertex(xi) +
                                "' into the group are not block-constant");
        int infinite_members = 0;
        for (int xi : idx) {
            ExtNat out = g.out_total(xi);
            if (out.is_zero()) return fail("group member '" + g.vertex(xi) + "' is a sink");
            if (out.is_infinite()) ++infinite_members;
        }
        if (infinite_members > 1) return fail("more than one infinite emitter in the group");
    } else {
        for (int w = 0; w < n; ++w) {
            if (members.count(g.vertex(w))) continue;
            for (std::size_t i = 1; i < idx.size(); ++i)
                if (g.multiplicity(idx[i], w) != g.multiplicity(idx[0], w))
                    return fail("out-edges to '" + g.vertex(w) + "' differ across the group");
        }
        for (int xi : idx)
            for (std::size_t j = 1; j < idx.size(); ++j)
                if (g.multiplicity(idx[j], xi) != g.multiplicity(idx[0], xi))
                    return fail("edges into '" + g.vertex(xi) +
                                "' from the group are not block-constant");
        for (int xi : idx)
            if (g.in_total(xi).is_zero())
                return fail("group member '" + g.vertex(xi) + "' is a source");
        // the merged vertex must be a regular non-source (insplit site)
        ExtNat merged_out = g.multiplicity(idx[0], idx[0]);  // placeholder, recomputed below
        merged_out = ExtNat(0);
        for (int w = 0; w < n; ++w) {
            if (members.count(g.vertex(w))) continue;
            merged_out += g.multiplicity(idx[0], w);
        }
        for (int xi : idx) merged_out += g.multiplicity(idx[0], xi);
        if (merged_out.is_zero()) return fail("merged vertex would be a sink");
        if (merged_out.is_infinite()) return fail("merged vertex would be an infinite emitter");
    }
    return {true, ""};
}

}  // namespace

MoveCheck validate_move(const Graph& g, const MoveInstance& m) {
    int n = g.vertex_count();
    switch (m.kind) {
        case MoveKind::SourceRemoval: {
            if (!g.has_vertex(m.at)) return fail("unknown vertex '" + m.at + "'");
            int v = g.index_of(m.at);
            if (n < 2) return fail("source removal needs at least two vertices");
            if (!g.in_total(v).is_zero()) return fail("'" + m.at + "' is not a source");
            if (g.out_total(v).is_zero()) return fail("'" + m.at + "' is a sink, not a removable source");
            if (g.out_total(v).is_infinite())
                return fail("'" + m.at + "' is an infinite emitter, not a removable source");
            return {true, ""};
        }
        case MoveKind::SourceAddition: {
            if (m.new_label.empty()) return fail("source addition needs a new vertex label");
            if (g.has_vertex(m.new_label))
                return fail("vertex '" + m.new_label + "' already exists");
            if (m.out_edges.empty()) return fail("added source must emit at least one edge");
            ExtNat total;
            for (const auto& [w, c] : m.out_edges) {
                if (!g.has_vertex(w)) return fail("unknown vertex '" + w + "'");
                if (c.is_zero()) return fail("zero multiplicity in source addition");
                if (c.is_infinite()) return fail("added source must be regular (finite out-degree)");
                total += c;
            }
            (void)total;
            return {true, ""};
        }
        case MoveKind::Outsplit: {
            if (!g.has_vertex(m.at)) return fail("unknown vertex '" + m.at + "'");
            int v = g.index_of(m.at);
            if (g.out_total(v).is_zero()) return fail("'" + m.at + "' is a sink");
            if (m.blocks.size() < 2) return fail("outsplit needs at least two blocks");
            MoveCheck names = check_new_names(g, m.new_names, m.blocks.size(), m.at);
            if (!names.ok) return names;
            MoveCheck part = check_partition(g, out_map(g, v), m.blocks, "s^-1(v)");
            if (!part.ok) return part;
            int infinite_blocks = 0;
            for (const auto& b : m.blocks) {
                ExtNat total;
                for (const auto& [w, c] : b) total += c;
                if (total.is_infinite()) ++infinite_blocks;
            }
            if (infinite_blocks > 1)
                return fail("at most one outsplit block may hold infinitely many edges");
            return {true, ""};
        }
        case MoveKind::Outamalgamation:
            return validate_amalgamation(g, m, true);
        case MoveKind::Insplit: {
            if (!g.has_vertex(m.at)) return fail("unknown vertex '" + m.at + "'");
            int v = g.index_of(m.at);
            if (g.in_total(v).is_zero()) return fail("'" + m.at + "' is a source");
            if (!is_regular(g, v))
                return fail("insplit site must be a regular vertex");
            if (m.blocks.size() < 2) return fail("insplit needs at least two blocks");
            MoveCheck names = check_new_names(g, m.new_names, m.blocks.size(), m.at);
            if (!names.ok) return names;
            return check_partition(g, in_map(g, v), m.blocks, "r^-1(v)");
        }
        case MoveKind::Inamalgamation:
            return validate_amalgamation(g, m, false);
        case MoveKind::Reduction: {
            if (!g.has_vertex(m.at)) return fail("unknown vertex '" + m.at + "'");
            int v = g.index_of(m.at);
            if (g.out_total(v) != ExtNat(1))
                return fail("reduction site must emit exactly one edge");
            for (int w = 0; w < n; ++w)
                if (g.multiplicity(v, w) == ExtNat(1) && w == v)
                    return fail("reduction site's edge may not be a loop");
            return {true, ""};
        }
        case MoveKind::Delay: {
            if (!g.has_vertex(m.at)) return fail("unknown vertex '" + m.at + "'");
            if (m.new_label.empty()) return fail("delay needs a new vertex label");
            if (g.has_vertex(m.new_label))
                return fail("vertex '" + m.new_label + "' already exists");
            int w = g.index_of(m.at);
            for (const auto& [u, c] : m.delayed) {
                if (!g.has_vertex(u)) return fail("unknown vertex '" + u + "'");
                if (c.is_zero()) return fail("zero count in delayed edge set");
                ExtNat avail = g.multiplicity(g.index_of(u), w);
                if (c.is_infinite()) {
                    if (!avail.is_infinite())
                        return fail("cannot delay infinitely many edges from '" + u + "'");
                } else if (!avail.is_infinite() && c > avail) {
                    return fail("delaying more edges than exist from '" + u + "'");
                }
            }
            return {true, ""};
        }
        case MoveKind::CuntzSplice: {
            if (!g.has_vertex(m.at)) return fail("unknown vertex '" + m.at + "'");
            MoveCheck names = check_new_names(g, m.new_names, 2, m.at);
            if (!names.ok) return names;
            if (!m.new_names.empty() && (m.new_names[0] == m.at || m.new_names[1] == m.at))
                return fail("splice vertices need fresh labels");
            if (!cuntz_splice_admissible(g, g.index_of(m.at)))
                return fail("'" + m.at + "' is not the base of two distinct cycles");
            return {true, ""};
        }
    }
    return fail("unknown move kind");
}

namespace {

std::string fresh_label(const std::set<std::string>& taken, std::string base) {
    while (taken.count(base)) base += "'";
    return base;
}

std::vector<std::string> resolve_new_names(const Graph& g, const MoveInstance& m,
                                           std::size_t count) {
    std::set<std::string> taken(g.vertices().begin(), g.vertices().end());
    taken.erase(m.at);  // the split vertex disappears; its label may be reused
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i) {
        std::string base = m.new_names.empty()
                               ? m.at + "_" + std::to_string(i + 1)
                               : m.new_names[i];
        std::string label = fresh_label(taken, base);
        taken.insert(label);
        names.push_back(label);
    }
    return names;
}

ExtNat map_get(const std::map<std::string, ExtNat>& m, const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? ExtNat(0) : it->second;
}

}  // namespace

Graph apply_move(const Graph& g, const MoveInstance& m) {
    MoveCheck check = validate_move(g, m);
    if (!check.ok) throw std::invalid_argument("invalid move: " + check.reason);
    int n = g.vertex_count();

    switch (m.kind) {
        case MoveKind::SourceRemoval: {
            int v = g.index_of(m.at);
            std::vector<std::string> verts;
            for (int i = 0; i < n; ++i)
                if (i != v) verts.push_back(g.vertex(i));
            Graph out(verts);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != v && j != v)
                        out.set_multiplicity(out.index_of(g.vertex(i)), out.index_of(g.vertex(j)),
                                             g.multiplicity(i, j));
            return out;
        }
        case MoveKind::SourceAddition: {
            std::vector<std::string> verts = g.vertices();
            verts.push_back(m.new_label);
            Graph out(verts);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) out.set_multiplicity(i, j, g.multiplicity(i, j));
            int nv = out.index_of(m.new_label);
            for (const auto& [w, c] : m.out_edges) out.set_multiplicity(nv, out.index_of(w), c);
            return out;
        }
        case MoveKind::Outsplit: {
            int v = g.index_of(m.at);
            std::size_t nb = m.blocks.size();
            std::vector<std::string> names = resolve_new_names(g, m, nb);
            std::vector<std::string> verts;
            for (int i = 0; i < n; ++i) {
                if (i == v)
                    verts.insert(verts.end(), names.begin(), names.end());
                else
                    verts.push_back(g.vertex(i));
            }
            Graph out(verts);
            for (int i = 0; i < n; ++i) {
                if (i == v) continue;
                int oi = out.index_of(g.vertex(i));
                for (int j = 0; j < n; ++j)
                    if (j != v)
                        out.set_multiplicity(oi, out.index_of(g.vertex(j)), g.multiplicity(i, j));
                // edges into v fan out: one copy into each split vertex
                for (const auto& name : names)
                    out.set_multiplicity(oi, out.index_of(name), g.multiplicity(i, v));
            }
            for (std::size_t b = 0; b < nb; ++b) {
                int ob = out.index_of(names[b]);
                ExtNat loop_part = map_get(m.blocks[b], m.at);
                for (const auto& [w, c] : m.blocks[b])
                    if (w != m.at) out.set_multiplicity(ob, out.index_of(w), c);
                // a loop class lands in its block as out-edges whose ranges
                // fan out across all split vertices
                for (const auto& name : names)
                    out.set_multiplicity(ob, out.index_of(name), loop_part);
            }
            return out;
        }
        case MoveKind::Outamalgamation: {
            std::set<std::string> members(m.group.begin(), m.group.end());
            std::string merged = m.merged.empty() ? m.group.front() : m.merged;
            int first = n;
            for (const auto& x : m.group) first = std::min(first, g.index_of(x));
            std::vector<std::string> verts;
            for (int i = 0; i < n; ++i) {
                if (i == first)
                    verts.push_back(merged);
                else if (!members.count(g.vertex(i)))
                    verts.push_back(g.vertex(i));
            }
            Graph out(verts);
            int om = out.index_of(merged);
            int rep = g.index_of(m.group.front());
            for (int i = 0; i < n; ++i) {
                if (members.count(g.vertex(i))) continue;
                int oi = out.index_of(g.vertex(i));
                for (int j = 0; j < n; ++j)
                    if (!members.count(g.vertex(j)))
                        out.set_multiplicity(oi, out.index_of(g.vertex(j)), g.multiplicity(i, j));
                out.set_multiplicity(oi, om, g.multiplicity(i, rep));  // common in-count
            }
            for (int w = 0; w < n; ++w) {
                if (members.count(g.vertex(w))) continue;
                ExtNat total;
                for (const auto& x : m.group) total += g.multiplicity(g.index_of(x), w);
                out.set_multiplicity(om, out.index_of(g.vertex(w)), total);
            }
            ExtNat loops;
            for (const auto& x : m.group) loops += g.multiplicity(g.index_of(x), rep);
            out.set_multiplicity(om, om, loops);
            return out;
        }
        case MoveKind::Insplit: {
            int v = g.index_of(m.at);
            std::size_t nb = m.blocks.size();
            std::vector<std::string> names = resolve_new_names(g, m, nb);
            std::vector<std::string> verts;
            for (int i = 0; i < n; ++i) {
                if (i == v)
                    verts.insert(verts.end(), names.begin(), names.end());
                else
                    verts.push_back(g.vertex(i));
            }
            Graph out(verts);
            for (int i = 0; i < n; ++i) {
                if (i == v) continue;
                int oi = out.index_of(g.vertex(i));
                for (int j = 0; j < n; ++j)
                    if (j != v)
                        out.set_multiplicity(oi, out.index_of(g.vertex(j)), g.multiplicity(i, j));
            }
            for (std::size_t b = 0; b < nb; ++b) {
                int ob = out.index_of(names[b]);
                // out-edges of v are copied onto every split vertex
                for (int w = 0; w < n; ++w)
                    if (w != v)
                        out.set_multiplicity(ob, out.index_of(g.vertex(w)), g.multiplicity(v, w));
                // in-edges land per block
                for (const auto& [u, c] : m.blocks[b])
                    if (u != m.at) out.set_multiplicity(out.index_of(u), ob, c);
            }
            // loop classes: block b's share terminates at names[b], emitted
            // from every split vertex
            for (std::size_t b = 0; b < nb; ++b) {
                ExtNat share = map_get(m.blocks[b], m.at);
                for (const auto& src : names)
                    out.set_multiplicity(out.index_of(src), out.index_of(names[b]), share);
            }
            return out;
        }
        case MoveKind::Inamalgamation: {
            std::set<std::string> members(m.group.begin(), m.group.end());
            std::string merged = m.merged.empty() ? m.group.front() : m.merged;
            int first = n;
            for (const auto& x : m.group) first = std::min(first, g.index_of(x));
            std::vector<std::string> verts;
            for (int i = 0; i < n; ++i) {
                if (i == first)
                    verts.push_back(merged);
                else if (!members.count(g.vertex(i)))
                    verts.push_back(g.vertex(i));
            }
            Graph out(verts);
            int om = out.index_of(merged);
            int rep = g.index_of(m.group.front());
            for (int i = 0; i < n; ++i) {
                if (members.count(g.vertex(i))) continue;
                int oi = out.index_of(g.vertex(i));
                for (int j = 0; j < n; ++j)
                    if (!members.count(g.vertex(j)))
                        out.set_multiplicity(oi, out.index_of(g.vertex(j)), g.multiplicity(i, j));
                ExtNat total;
                for (const auto& x : m.group) total += g.multiplicity(i, g.index_of(x));
                out.set_multiplicity(oi, om, total);
            }
            for (int w = 0; w < n; ++w) {
                if (members.count(g.vertex(w))) continue;
                out.set_multiplicity(om, out.index_of(g.vertex(w)), g.multiplicity(rep, w));
            }
            ExtNat loops;
            for (const auto& x : m.group) loops += g.multiplicity(rep, g.index_of(x));
            out.set_multiplicity(om, om, loops);
            return out;
        }
        case MoveKind::Reduction: {
            int v = g.index_of(m.at);
            int target = -1;
            for (int w = 0; w < n; ++w)
                if (!g.multiplicity(v, w).is_zero()) target = w;
            std::vector<std::string> verts;
            for (int i = 0; i < n; ++i)
                if (i != v) verts.push_back(g.vertex(i));
            Graph out(verts);
            int ot = out.index_of(g.vertex(target));
            for (int i = 0; i < n; ++i) {
                if (i == v) continue;
                int oi = out.index_of(g.vertex(i));
                for (int j = 0; j < n; ++j)
                    if (j != v)
                        out.set_multiplicity(oi, out.index_of(g.vertex(j)), g.multiplicity(i, j));
                // edges into v are redirected into v's target
                ExtNat redirected = g.multiplicity(i, v);
                if (!redirected.is_zero())
                    out.set_multiplicity(oi, ot, out.multiplicity(oi, ot) + redirected);
            }
            return out;
        }
        case MoveKind::Delay: {
            int w = g.index_of(m.at);
            std::vector<std::string> verts = g.vertices();
            verts.push_back(m.new_label);
            Graph out(verts);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) out.set_multiplicity(i, j, g.multiplicity(i, j));
            int nv = out.index_of(m.new_label);
            for (const auto& [u, c] : m.delayed) {
                int ui = g.index_of(u);
                ExtNat avail = g.multiplicity(ui, w);
                ExtNat remaining;
                if (c.is_infinite())
                    remaining = ExtNat(0);  // the whole infinite class moves
                else if (avail.is_infinite())
                    remaining = ExtNat::infinity();
                else
                    remaining = ExtNat(avail.finite_value() - c.finite_value());
                out.set_multiplicity(ui, w, remaining);
                out.set_multiplicity(ui, nv, c);
            }
            out.set_multiplicity(nv, w, ExtNat(1));
            return out;
        }
        case MoveKind::CuntzSplice: {
            int v = g.index_of(m.at);
            std::set<std::string> taken(g.vertices().begin(), g.vertices().end());
            std::vector<std::string> names;
            for (int i = 0; i < 2; ++i) {
                std::string base = m.new_names.empty() ? m.at + "_" + std::to_string(i + 1)
                                                       : m.new_names[i];
                std::string label = fresh_label(taken, base);
                taken.insert(label);
                names.push_back(label);
            }
            std::vector<std::string> verts = g.vertices();
            verts.push_back(names[0]);
            verts.push_back(names[1]);
            Graph out(verts);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) out.set_multiplicity(i, j, g.multiplicity(i, j));
            int v1 = out.index_of(names[0]);
            int v2 = out.index_of(names[1]);
            out.set_multiplicity(v, v1, ExtNat(1));
            out.set_multiplicity(v1, v, ExtNat(1));
            out.set_multiplicity(v1, v1, ExtNat(1));
            out.set_multiplicity(v1, v2, ExtNat(1));
            out.set_multiplicity(v2, v1, ExtNat(1));
            out.set_multiplicity(v2, v2, ExtNat(1));
            return out;
        }
    }
    throw std::logic_error("unreachable move kind");
}

MoveInstance inverse_instance(const Graph& before, const MoveInstance& m) {
    MoveCheck check = validate_move(before, m);
    if (!check.ok) throw std::invalid_argument("invalid move: " + check.reason);
    MoveInstance inv;
    switch (m.kind) {
        case MoveKind::SourceRemoval: {
            inv.kind = MoveKind::SourceAddition;
            inv.new_label = m.at;
            inv.out_edges = out_map(before, before.index_of(m.at));
            return inv;
        }
        case MoveKind::SourceAddition: {
            inv.kind = MoveKind::SourceRemoval;
            inv.at = m.new_label;
            return inv;
        }
        case MoveKind::Outsplit: {
            inv.kind = MoveKind::Outamalgamation;
            inv.group = resolve_new_names(before, m, m.blocks.size());
            inv.merged = m.at;
            return inv;
        }
        case MoveKind::Outamalgamation: {
            inv.kind = MoveKind::Outsplit;
            inv.at = m.merged.empty() ? m.group.front() : m.merged;
            inv.new_names = m.group;
            int rep = before.index_of(m.group.front());
            for (const auto& x : m.group) {
                int xi = before.index_of(x);
                std::map<std::string, ExtNat> block;
                for (int w = 0; w < before.vertex_count(); ++w) {
                    ExtNat c = before.multiplicity(xi, w);
                    if (c.is_zero()) continue;
                    const std::string& label = before.vertex(w);
                    bool in_group =
                        std::find(m.group.begin(), m.group.end(), label) != m.group.end();
                    if (in_group) continue;
                    block[label] = c;
                }
                ExtNat loop = before.multiplicity(xi, rep);  // block-constant across the group
                if (!loop.is_zero()) block[inv.at] = loop;
                inv.blocks.push_back(std::move(block));
            }
            return inv;
        }
        case MoveKind::Insplit: {
            inv.kind = MoveKind::Inamalgamation;
            inv.group = resolve_new_names(before, m, m.blocks.size());
            inv.merged = m.at;
            return inv;
        }
        case MoveKind::Inamalgamation: {
            inv.kind = MoveKind::Insplit;
            inv.at = m.merged.empty() ? m.group.front() : m.merged;
            inv.new_names = m.group;
            int rep = before.index_of(m.group.front());
            for (const auto& x : m.group) {
                int xi = before.index_of(x);
                std::map<std::string, ExtNat> block;
                for (int u = 0; u < before.vertex_count(); ++u) {
                    ExtNat c = before.multiplicity(u, xi);
                    if (c.is_zero()) continue;
                    const std::string& label = before.vertex(u);
                    bool in_group =
                        std::find(m.group.begin(), m.group.end(), label) != m.group.end();
                    if (in_group) continue;
                    block[label] = c;
                }
                ExtNat loop = before.multiplicity(rep, xi);
                if (!loop.is_zero()) block[inv.at] = loop;
                inv.blocks.push_back(std::move(block));
            }
            return inv;
        }
        case MoveKind::Reduction: {
            int v = before.index_of(m.at);
            inv.kind = MoveKind::Delay;
            for (int w = 0; w < before.vertex_count(); ++w)
                if (!before.multiplicity(v, w).is_zero()) inv.at = before.vertex(w);
            inv.new_label = m.at;
            inv.delayed = in_map(before, v);
            return inv;
        }
        case MoveKind::Delay: {
            inv.kind = MoveKind::Reduction;
            inv.at = m.new_label;
            return inv;
        }
        case MoveKind::CuntzSplice:
            throw std::invalid_argument("the Cuntz splice has no inverse move");
    }
    throw std::logic_error("unreachable move kind");
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

using Options = std::vector<ExtNat>;

// Builds every block assignment for a list of parallel classes.  classes[i]
// carries the per-block count options for class i; the recursion assembles one
// choice per class into block maps.
void assign_classes(const std::vector<std::string>& labels,
                    const std::vector<std::vector<Options>>& per_class_choices, std::size_t ci,
                    std::vector<std::map<std::string, ExtNat>>& blocks,
                    const std::function<void()>& emit) {
    if (ci == labels.size()) {
        emit();
        return;
    }
    for (const Options& choice : per_class_choices[ci]) {
        for (std::size_t b = 0; b < blocks.size(); ++b)
            if (!choice[b].is_zero()) blocks[b][labels[ci]] = choice[b];
        assign_classes(labels, per_class_choices, ci + 1, blocks, emit);
        for (std::size_t b = 0; b < blocks.size(); ++b) blocks[b].erase(labels[ci]);
    }
}

// Ordered ways to write a finite m as a sum of nb nonnegative parts.
std::vector<Options> finite_compositions(std::uint64_t m, int nb) {
    std::vector<Options> out;
    Options cur(nb, ExtNat(0));
    std::function<void(int, std::uint64_t)> rec = [&](int idx, std::uint64_t left) {
        if (idx + 1 == nb) {
            cur[idx] = ExtNat(left);
            out.push_back(cur);
            return;
        }
        for (std::uint64_t take = 0; take <= left; ++take) {
            cur[idx] = ExtNat(take);
            rec(idx + 1, left - take);
        }
    };
    if (nb > 0) rec(0, m);
    return out;
}

// Ways to split an infinite class: at least one block takes the infinite
// remainder, the rest take finite chunks up to `chunk_cap`.  When
// `single_infinite` is set only one block may take infinity (outsplits).
std::vector<Options> infinite_splits(int nb, std::uint64_t chunk_cap, bool single_infinite) {
    std::vector<Options> out;
    Options cur(nb, ExtNat(0));
    std::function<void(int, int)> rec = [&](int idx, int inf_used) {
        if (idx == nb) {
            if (inf_used > 0) out.push_back(cur);
            return;
        }
        cur[idx] = ExtNat::infinity();
        if (!single_infinite || inf_used == 0) rec(idx + 1, inf_used + 1);
        for (std::uint64_t take = 0; take <= chunk_cap; ++take) {
            cur[idx] = ExtNat(take);
            rec(idx + 1, inf_used);
        }
    };
    if (nb > 0) rec(0, 0);
    return out;
}

void enumerate_splits(const Graph& g, int v, const EnumBounds& bounds, bool out_direction,
                      std::vector<MoveInstance>& out_instances) {
    const auto classes = out_direction ? [&] {
        std::map<std::string, ExtNat> m;
        for (int w = 0; w < g.vertex_count(); ++w)
            if (!g.multiplicity(v, w).is_zero()) m[g.vertex(w)] = g.multiplicity(v, w);
        return m;
    }() : [&] {
        std::map<std::string, ExtNat> m;
        for (int u = 0; u < g.vertex_count(); ++u)
            if (!g.multiplicity(u, v).is_zero()) m[g.vertex(u)] = g.multiplicity(u, v);
        return m;
    }();
    if (classes.empty()) return;

    std::vector<std::string> labels;
    std::vector<ExtNat> mults;
    for (const auto& [label, mult] : classes) {
        labels.push_back(label);
        mults.push_back(mult);
    }

    for (int nb = 2; nb <= bounds.max_partition_blocks; ++nb) {
        std::vector<std::vector<Options>> per_class;
        bool feasible = true;
        for (const ExtNat& m : mults) {
            std::vector<Options> choices =
                m.is_infinite() ? infinite_splits(nb, bounds.max_new_mult, out_direction)
                                : finite_compositions(m.finite_value(), nb);
            if (choices.empty()) feasible = false;
            per_class.push_back(std::move(choices));
        }
        if (!feasible) continue;

        std::vector<std::map<std::string, ExtNat>> blocks(nb);
        assign_classes(labels, per_class, 0, blocks, [&] {
            for (const auto& b : blocks)
                if (b.empty()) return;
            // emit each unordered partition once: blocks must be sorted
            if (!std::is_sorted(blocks.begin(), blocks.end())) return;
            MoveInstance inst;
            inst.kind = out_direction ? MoveKind::Outsplit : MoveKind::Insplit;
            inst.at = g.vertex(v);
            inst.blocks = blocks;
            if (validate_move(g, inst).ok) out_instances.push_back(std::move(inst));
        });
    }
}

void enumerate_subsets(int n, int max_size, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) >= 2) f(cur);
        if (static_cast<int>(cur.size()) == max_size) return;
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

std::vector<MoveInstance> enumerate_moves(const Graph& g, const EnumBounds& bounds) {
    if (g.vertex_count() > global_vertex_bound())
        throw BoundError("move enumeration limited to " + std::to_string(global_vertex_bound()) +
                         " vertices (GAC_MAX_VERTICES)");
    std::vector<MoveInstance> out;
    int n = g.vertex_count();

    // (S): one instance per regular source
    if (n >= 2)
        for (int v = 0; v < n; ++v) {
            MoveInstance inst;
            inst.kind = MoveKind::SourceRemoval;
            inst.at = g.vertex(v);
            if (validate_move(g, inst).ok) out.push_back(inst);
        }

    // (S-): every out-multiplicity map with total in [1, max_new_mult]
    {
        std::set<std::string> taken(g.vertices().begin(), g.vertices().end());
        std::string label = fresh_label(taken, "s");
        std::map<std::string, ExtNat> cur;
        std::function<void(int, std::uint64_t)> rec = [&](int idx, std::uint64_t left) {
            if (idx == n) {
                if (cur.empty()) return;
                MoveInstance inst;
                inst.kind = MoveKind::SourceAddition;
                inst.new_label = label;
                inst.out_edges = cur;
                out.push_back(std::move(inst));
                return;
            }
            rec(idx + 1, left);
            for (std::uint64_t c = 1; c <= left; ++c) {
                cur[g.vertex(idx)] = ExtNat(c);
                rec(idx + 1, left - c);
            }
            cur.erase(g.vertex(idx));
        };
        rec(0, bounds.max_new_mult);
    }

    // (O) and (I)
    for (int v = 0; v < n; ++v) {
        enumerate_splits(g, v, bounds, true, out);
        if (is_regular(g, v)) enumerate_splits(g, v, bounds, false, out);
    }

    // (O-) and (I-): mergeable groups found structurally
    enumerate_subsets(n, bounds.max_partition_blocks, [&](const std::vector<int>& subset) {
        MoveInstance inst;
        inst.kind = MoveKind::Outamalgamation;
        for (int i : subset) inst.group.push_back(g.vertex(i));
        inst.merged = inst.group.front();
        if (validate_move(g, inst).ok) out.push_back(inst);
        inst.kind = MoveKind::Inamalgamation;
        if (validate_move(g, inst).ok) out.push_back(inst);
    });

    // (R)
    for (int v = 0; v < n; ++v) {
        MoveInstance inst;
        inst.kind = MoveKind::Reduction;
        inst.at = g.vertex(v);
        if (validate_move(g, inst).ok) out.push_back(inst);
    }

    // (R-): per target, options per in-class: keep, move a bounded chunk,
    // move the whole class
    for (int w = 0; w < n; ++w) {
        std::set<std::string> taken(g.vertices().begin(), g.vertices().end());
        std::string label = fresh_label(taken, "d");
        std::vector<int> sources;
        for (int u = 0; u < n; ++u)
            if (!g.multiplicity(u, w).is_zero()) sources.push_back(u);
        std::map<std::string, ExtNat> cur;
        std::function<void(std::size_t)> rec = [&](std::size_t si) {
            if (si == sources.size()) {
                MoveInstance inst;
                inst.kind = MoveKind::Delay;
                inst.at = g.vertex(w);
                inst.new_label = label;
                inst.delayed = cur;
                if (validate_move(g, inst).ok) out.push_back(std::move(inst));
                return;
            }
            int u = sources[si];
            ExtNat avail = g.multiplicity(u, w);
            rec(si + 1);  // take nothing
            std::uint64_t cap = avail.is_infinite()
                                    ? bounds.max_new_mult
                                    : std::min(avail.finite_value(), bounds.max_new_mult);
            for (std::uint64_t c = 1; c <= cap; ++c) {
                cur[g.vertex(u)] = ExtNat(c);
                rec(si + 1);
            }
            if (avail.is_infinite()) {
                cur[g.vertex(u)] = ExtNat::infinity();  // the whole class
                rec(si + 1);
            } else if (avail.finite_value() > bounds.max_new_mult) {
                cur[g.vertex(u)] = avail;  // the whole class
                rec(si + 1);
            }
            cur.erase(g.vertex(u));
        };
        rec(0);
    }

    // (CS)
    for (int v = 0; v < n; ++v)
        if (cuntz_splice_admissible(g, v)) {
            MoveInstance inst;
            inst.kind = MoveKind::CuntzSplice;
            inst.at = g.vertex(v);
            out.push_back(inst);
        }

    std::sort(out.begin(), out.end(), [](const MoveInstance& a, const MoveInstance& b) {
        return a.sort_key() < b.sort_key();
    });
    return out;
}

}  // namespace gac
