#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gac/graph.hpp"
#include "gac/moves.hpp"

namespace gac {

// Bounds for the bounded bidirectional move search.  Bounds are mandatory:
// source addition and delay grow graphs without limit, so the move relation
// is infinite.  allow_cs injects a single Cuntz splice when determinant signs
// differ (one splice is always enough; two are never chained).
struct SearchOptions {
    int max_depth = 6;
    int max_vertices = 8;
    std::uint64_t max_total_multiplicity = 40;  // finite edge mass; each infinite class counts 1
    int max_partition_blocks = 3;
    std::uint64_t max_new_mult = 3;
    bool allow_cs = false;
    int threads = 0;  // 0 = library default, 1 = serial reference path
};

struct MovePath {
    Graph start;
    std::vector<MoveInstance> steps;
    Graph end;
};

struct SearchResult {
    std::optional<MovePath> path;
    std::string note;  // reason when no path was produced; never a proof of inequivalence
    std::size_t states_explored = 0;
};

// Label-independent state key: the lexicographically minimal serialized
// multiplicity matrix over the vertex orderings compatible with a cheap
// degree-based vertex partition.
std::string canonical_form(const Graph& g);

// Bidirectional breadth-first search for a move sequence turning g into h.
// Not-found is inconclusive: the bounds may simply be too small.
SearchResult find_move_path(const Graph& g, const Graph& h, const SearchOptions& opts = {});

// Replays a path: every step must validate, and the final graph must be
// isomorphic to path.end.
bool replay_and_check(const MovePath& p);

// One successor produced during frontier expansion.
struct Successor {
    MoveInstance via;
    Graph graph;
    std::string canon;
};

// Expands every frontier graph: enumerate in-bounds moves (Cuntz splices
// excluded), apply, filter by state bounds, canonicalize.  The parallel
// variant distributes frontier entries across OpenMP threads; outputs are
// indexed by frontier position, so results are identical to the serial
// reference for any thread count.
std::vector<std::vector<Successor>> expand_frontier_serial(const std::vector<Graph>& frontier,
                                                           const SearchOptions& opts);
std::vector<std::vector<Successor>> expand_frontier_parallel(const std::vector<Graph>& frontier,
                                                             const SearchOptions& opts);

}  // namespace gac
