#include "gac/search.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gac/errors.hpp"
#include "gac/exactalg.hpp"
#include "gac/ktheory.hpp"

namespace gac {

// ---------------------------------------------------------------------------
// canonical form

namespace {

struct ClassKey {
    ExtNat out, in, loop;
    auto operator<=>(const ClassKey&) const = default;
};

void encode_matrix(const Graph& g, const std::vector<int>& order, std::vector<std::uint64_t>& out) {
    int n = g.vertex_count();
    out.clear();
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ExtNat m = g.multiplicity(order[i], order[j]);
            out.push_back(m.is_infinite() ? ~std::uint64_t{0} : m.finite_value());
        }
}

// Overwrites `best` when the encoding of `order` is lexicographically
// smaller; bails out of losing candidates at the first greater entry.
void keep_if_smaller(const Graph& g, const std::vector<int>& order,
                     std::vector<std::uint64_t>& best) {
    int n = g.vertex_count();
    std::size_t pos = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j, ++pos) {
            ExtNat m = g.multiplicity(order[i], order[j]);
            std::uint64_t v = m.is_infinite() ? ~std::uint64_t{0} : m.finite_value();
            if (v > best[pos]) return;
            if (v < best[pos]) {
                // strictly smaller: finish the encoding from here
                best[pos] = v;
                for (std::size_t k = pos + 1; k < best.size(); ++k) {
                    int bi = static_cast<int>(k) / n;
                    int bj = static_cast<int>(k) % n;
                    ExtNat r = g.multiplicity(order[bi], order[bj]);
                    best[k] = r.is_infinite() ? ~std::uint64_t{0} : r.finite_value();
                }
                return;
            }
        }
}

}  // namespace

std::string canonical_form(const Graph& g) {
    int n = g.vertex_count();

    // Partition vertices by (out total, in total, loop count); orderings only
    // permute within a class, with classes sorted by key.
    std::map<ClassKey, std::vector<int>> classes;
    for (int v = 0; v < n; ++v)
        classes[{g.out_total(v), g.in_total(v), g.multiplicity(v, v)}].push_back(v);

    std::vector<std::vector<int>> blocks;
    for (auto& [key, members] : classes) blocks.push_back(members);

    std::vector<int> order;
    for (const auto& b : blocks) order.insert(order.end(), b.begin(), b.end());

    std::vector<std::uint64_t> best;
    encode_matrix(g, order, best);

    // Walk the candidate orderings (product of per-class permutations).
    std::vector<std::size_t> offsets;
    offsets.reserve(blocks.size());
    std::size_t off = 0;
    for (const auto& b : blocks) {
        offsets.push_back(off);
        off += b.size();
    }
    std::function<void(std::size_t)> walk = [&](std::size_t bi) {
        if (bi == blocks.size()) {
            keep_if_smaller(g, order, best);
            return;
        }
        std::vector<int>& b = blocks[bi];
        std::sort(b.begin(), b.end());
        do {
            std::copy(b.begin(), b.end(), order.begin() + offsets[bi]);
            walk(bi + 1);
        } while (std::next_permutation(b.begin(), b.end()));
    };
    walk(0);

    std::string key;
    key.reserve(best.size() * 8 + 8);
    key += std::to_string(n);
    key += ':';
    key.append(reinterpret_cast<const char*>(best.data()), best.size() * sizeof(std::uint64_t));
    return key;
}

// ---------------------------------------------------------------------------
// frontier expansion

namespace {

bool within_state_bounds(const Graph& g, const SearchOptions& opts) {
    return g.vertex_count() <= opts.max_vertices &&
           g.bounded_edge_mass() <= opts.max_total_multiplicity;
}

std::vector<Successor> expand_one(const Graph& g, const SearchOptions& opts) {
    std::vector<Successor> out;
    EnumBounds bounds{opts.max_partition_blocks, opts.max_new_mult};
    for (const MoveInstance& inst : enumerate_moves(g, bounds)) {
        if (inst.kind == MoveKind::CuntzSplice) continue;  // injected at the roots only
        Graph next = apply_move(g, inst);
        if (!within_state_bounds(next, opts)) continue;
        std::string canon = canonical_form(next);
        out.push_back({inst, std::move(next), std::move(canon)});
    }
    return out;
}

}  // namespace

std::vector<std::vector<Successor>> expand_frontier_serial(const std::vector<Graph>& frontier,
                                                           const SearchOptions& opts) {
    std::vector<std::vector<Successor>> out(frontier.size());
    for (std::size_t i = 0; i < frontier.size(); ++i) out[i] = expand_one(frontier[i], opts);
    return out;
}

std::vector<std::vector<Successor>> expand_frontier_parallel(const std::vector<Graph>& frontier,
                                                             const SearchOptions& opts) {
    std::vector<std::vector<Successor>> out(frontier.size());
#ifdef _OPENMP
    const int nthreads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
    const std::int64_t count = static_cast<std::int64_t>(frontier.size());
    // exceptions may not unwind out of the parallel region; collect and
    // rethrow the first one in frontier order
    std::vector<std::exception_ptr> errors(frontier.size());
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            out[i] = expand_one(frontier[i], opts);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
#else
    out = expand_frontier_serial(frontier, opts);
#endif
    return out;
}

// ---------------------------------------------------------------------------
// invariants carried alongside the search as an online self-test

namespace {

struct StateInvariant {
    AbGroup k0;
    int k1_rank = 0;
    std::uint64_t singular = 0;
    bool finite = true;
    Sign sign = Sign::Zero;

    bool operator==(const StateInvariant&) const = default;
};

StateInvariant state_invariant(const Graph& g) {
    StateInvariant s;
    IntMatrix m = presentation_matrix(g);
    s.k0 = cokernel(m);
    s.k1_rank = kernel_rank(m);
    VertexClasses c = classify_vertices(g);
    s.singular = c.sinks.size() + c.infinite_emitters.size();
    s.finite = g.is_finite();
    if (s.finite) {
        InvariantBundle b = invariants_cstar(g);
        s.sign = *b.det_sign;
    }
    return s;
}

struct Node {
    Graph graph;
    int parent = -1;
    MoveInstance via;  // move leading here from parent (roots: the optional CS prefix)
    int depth = 0;
    bool has_prefix = false;
};

struct Side {
    std::vector<Node> nodes;
    std::unordered_map<std::string, int> visited;  // canonical form -> node index
    std::vector<int> frontier;
    StateInvariant expected;
};

std::vector<MoveInstance> chain_to_root(const Side& side, int idx) {
    std::vector<MoveInstance> steps;
    for (int cur = idx; cur >= 0; cur = side.nodes[cur].parent) {
        if (side.nodes[cur].parent >= 0 || side.nodes[cur].has_prefix)
            steps.push_back(side.nodes[cur].via);
        if (side.nodes[cur].parent < 0) break;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
}

// Rewrites an instance through the label translation `t`, extending `t` with
// fresh names for the labels the instance creates.  `current` is the graph
// the translated instance will be applied to.
MoveInstance translate_instance(const MoveInstance& m, std::map<std::string, std::string>& t,
                                const Graph& current) {
    auto ref = [&](const std::string& label) {
        auto it = t.find(label);
        if (it == t.end())
            throw std::logic_error("search reconstruction lost track of label '" + label + "'");
        return it->second;
    };
    std::set<std::string> taken(current.vertices().begin(), current.vertices().end());
    auto fresh = [&](const std::string& label) {
        auto it = t.find(label);
        if (it != t.end()) return it->second;
        std::string candidate = label;
        while (taken.count(candidate)) candidate += "'";
        taken.insert(candidate);
        t[label] = candidate;
        return candidate;
    };

    MoveInstance out;
    out.kind = m.kind;
    switch (m.kind) {
        case MoveKind::SourceRemoval:
        case MoveKind::Reduction:
            out.at = ref(m.at);
            break;
        case MoveKind::SourceAddition:
            out.new_label = fresh(m.new_label);
            for (const auto& [k, v] : m.out_edges) out.out_edges[ref(k)] = v;
            break;
        case MoveKind::Outsplit:
        case MoveKind::Insplit:
            out.at = ref(m.at);
            for (const auto& block : m.blocks) {
                std::map<std::string, ExtNat> nb;
                for (const auto& [k, v] : block) nb[ref(k)] = v;
                out.blocks.push_back(std::move(nb));
            }
            // names may reuse the split site's label, which stays a reference
            for (const auto& n : m.new_names) {
                if (n == m.at) {
                    out.new_names.push_back(out.at);
                    t[n] = out.at;
                } else {
                    out.new_names.push_back(fresh(n));
                }
            }
            break;
        case MoveKind::Outamalgamation:
        case MoveKind::Inamalgamation: {
            for (const auto& x : m.group) out.group.push_back(ref(x));
            std::string merged = m.merged.empty() ? m.group.front() : m.merged;
            bool reused =
                std::find(m.group.begin(), m.group.end(), merged) != m.group.end();
            out.merged = reused ? ref(merged) : fresh(merged);
            break;
        }
        case MoveKind::Delay:
            out.at = ref(m.at);
            out.new_label = fresh(m.new_label);
            for (const auto& [k, v] : m.delayed) out.delayed[ref(k)] = v;
            break;
        case MoveKind::CuntzSplice:
            throw std::logic_error("a Cuntz splice cannot appear on the backward side");
    }
    return out;
}

MovePath reconstruct(const Graph& g, const Graph& h, const Side& fwd, const Side& bwd,
                     int fwd_idx, int bwd_idx) {
    std::vector<MoveInstance> steps = chain_to_root(fwd, fwd_idx);
    Graph meet_fwd = fwd.nodes[fwd_idx].graph;

    // Backward chain h = x_0 -> ... -> x_k, then exact inverse instances.
    std::vector<int> chain;
    for (int cur = bwd_idx; cur >= 0; cur = bwd.nodes[cur].parent) chain.push_back(cur);
    std::reverse(chain.begin(), chain.end());  // root (h) first

    const Graph& meet_bwd = bwd.nodes[bwd_idx].graph;
    auto iso = find_isomorphism(meet_bwd, meet_fwd, std::max(meet_bwd.vertex_count(),
                                                             global_vertex_bound()));
    if (!iso) throw std::logic_error("meet states not isomorphic; canonical form is unsound");
    std::map<std::string, std::string> t;
    for (int i = 0; i < meet_bwd.vertex_count(); ++i)
        t[meet_bwd.vertex(i)] = meet_fwd.vertex((*iso)[i]);

    Graph current = meet_fwd;
    for (std::size_t i = chain.size() - 1; i >= 1; --i) {
        const Node& to = bwd.nodes[chain[i]];
        const Node& from = bwd.nodes[chain[i - 1]];
        MoveInstance inverse = inverse_instance(from.graph, to.via);
        MoveInstance translated = translate_instance(inverse, t, current);
        current = apply_move(current, translated);
        steps.push_back(std::move(translated));
        // carry forward exactly the labels of the graph just reached
        std::map<std::string, std::string> next_t;
        for (int v = 0; v < from.graph.vertex_count(); ++v) {
            auto it = t.find(from.graph.vertex(v));
            if (it != t.end()) next_t.insert(*it);
        }
        t = std::move(next_t);
    }

    if (!graphs_isomorphic(current, h,
                           std::max(current.vertex_count(), global_vertex_bound())))
        throw std::logic_error("reconstructed path does not reach the target graph");
    return {g, std::move(steps), h};
}

std::string invariant_mismatch_note(const StateInvariant& a, const StateInvariant& b,
                                    bool allow_cs) {
    if (a.finite != b.finite)
        return "no path: one graph is finite, the other has infinite multiplicities, and every "
               "move preserves the class";
    if (!(a.k0 == b.k0))
        return "no path: K0 differs (" + a.k0.to_string() + " vs " + b.k0.to_string() +
               ") and every move preserves K0";
    if (a.k1_rank != b.k1_rank)
        return "no path: K1 differs and every move preserves K1";
    if (a.singular != b.singular)
        return "no path: singular vertex counts differ (" + std::to_string(a.singular) + " vs " +
               std::to_string(b.singular) + ") and every move preserves them";
    if (a.finite && a.sign != b.sign && !allow_cs)
        return "no path without a Cuntz splice: determinant signs differ (" + to_string(a.sign) +
               " vs " + to_string(b.sign) + "); enable --allow-cs";
    return "";
}

}  // namespace

SearchResult find_move_path(const Graph& g, const Graph& h, const SearchOptions& opts) {
    SearchResult res;
    for (const auto* p : {&g, &h})
        if (!within_state_bounds(*p, opts))
            throw BoundError("input graph exceeds the search bounds (max_vertices=" +
                             std::to_string(opts.max_vertices) + ", max_total_multiplicity=" +
                             std::to_string(opts.max_total_multiplicity) + ")");

    StateInvariant inv_g = state_invariant(g);
    StateInvariant inv_h = state_invariant(h);

    std::string gate = invariant_mismatch_note(inv_g, inv_h, opts.allow_cs);
    if (!gate.empty()) {
        res.note = gate;
        return res;
    }

    bool use_cs = opts.allow_cs && inv_g.finite && inv_g.sign != inv_h.sign;

    Side fwd, bwd;
    bwd.expected = inv_h;
    bwd.nodes.push_back({h, -1, {}, 0, false});
    bwd.visited.emplace(canonical_form(h), 0);
    bwd.frontier.push_back(0);

    if (use_cs) {
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (!cuntz_splice_admissible(g, v)) continue;
            MoveInstance cs;
            cs.kind = MoveKind::CuntzSplice;
            cs.at = g.vertex(v);
            Graph spliced = apply_move(g, cs);
            if (!within_state_bounds(spliced, opts)) continue;
            std::string canon = canonical_form(spliced);
            if (bwd.visited.count(canon) && opts.max_depth >= 1) {
                // the splice alone already reaches h
                MovePath path{g, {cs}, h};
                if (!replay_and_check(path))
                    throw std::logic_error("single-splice path failed replay");
                res.path = std::move(path);
                res.states_explored = 1;
                return res;
            }
            if (fwd.visited.count(canon)) continue;
            fwd.nodes.push_back({std::move(spliced), -1, cs, 1, true});
            fwd.visited.emplace(std::move(canon), static_cast<int>(fwd.nodes.size()) - 1);
            fwd.frontier.push_back(static_cast<int>(fwd.nodes.size()) - 1);
        }
        if (fwd.nodes.empty()) {
            res.note = "no Cuntz splice site is admissible, and determinant signs differ";
            return res;
        }
        fwd.expected = state_invariant(fwd.nodes.front().graph);
    } else {
        std::string canon_g = canonical_form(g);
        if (canon_g == canonical_form(h)) {
            res.path = MovePath{g, {}, h};
            return res;
        }
        fwd.expected = inv_g;
        fwd.nodes.push_back({g, -1, {}, 0, false});
        fwd.visited.emplace(std::move(canon_g), 0);
        fwd.frontier.push_back(0);
    }

    int fwd_depth = fwd.nodes.front().depth;
    int bwd_depth = 0;

    while (fwd_depth + bwd_depth < opts.max_depth &&
           (!fwd.frontier.empty() || !bwd.frontier.empty())) {
        bool expand_fwd;
        if (fwd.frontier.empty())
            expand_fwd = false;
        else if (bwd.frontier.empty())
            expand_fwd = true;
        else
            expand_fwd = fwd.frontier.size() <= bwd.frontier.size();

        Side& side = expand_fwd ? fwd : bwd;
        Side& other = expand_fwd ? bwd : fwd;

        std::vector<Graph> frontier_graphs;
        frontier_graphs.reserve(side.frontier.size());
        for (int idx : side.frontier) frontier_graphs.push_back(side.nodes[idx].graph);

        auto batches = (opts.threads == 1) ? expand_frontier_serial(frontier_graphs, opts)
                                           : expand_frontier_parallel(frontier_graphs, opts);

        std::vector<int> next_frontier;
        for (std::size_t fi = 0; fi < batches.size(); ++fi) {
            int parent = side.frontier[fi];
            for (Successor& s : batches[fi]) {
                if (side.visited.count(s.canon)) continue;
                StateInvariant si = state_invariant(s.graph);
                if (!(si == side.expected))
                    throw std::logic_error(
                        "move engine self-test failed: invariants changed along " +
                        s.via.describe());
                int id = static_cast<int>(side.nodes.size());
                side.nodes.push_back(
                    {std::move(s.graph), parent, std::move(s.via),
                     side.nodes[parent].depth + 1, false});
                side.visited.emplace(s.canon, id);
                res.states_explored += 1;
                auto meet = other.visited.find(s.canon);
                if (meet != other.visited.end()) {
                    int fwd_idx = expand_fwd ? id : meet->second;
                    int bwd_idx = expand_fwd ? meet->second : id;
                    res.path = reconstruct(g, h, fwd, bwd, fwd_idx, bwd_idx);
                    return res;
                }
                next_frontier.push_back(id);
            }
        }
        side.frontier = std::move(next_frontier);
        (expand_fwd ? fwd_depth : bwd_depth) += 1;
    }

    res.note = "inconclusive at bounds (max_depth=" + std::to_string(opts.max_depth) +
               ", max_vertices=" + std::to_string(opts.max_vertices) + "); not a proof of " +
               "inequivalence";
    return res;
}

bool replay_and_check(const MovePath& p) {
    Graph current = p.start;
    for (const MoveInstance& step : p.steps) {
        if (!validate_move(current, step).ok) return false;
        try {
            current = apply_move(current, step);
        } catch (const std::invalid_argument&) {
            return false;
        }
    }
    int bound = std::max({current.vertex_count(), p.end.vertex_count(), global_vertex_bound()});
    return graphs_isomorphic(current, p.end, bound);
}

}  // namespace gac
