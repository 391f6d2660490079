#pragma once

#include <map>
#include <string>
#include <vector>

#include "gac/extnat.hpp"
#include "gac/graph.hpp"

namespace gac {

enum class MoveKind {
    SourceRemoval,    // S
    SourceAddition,   // S-
    Outsplit,         // O
    Outamalgamation,  // O-
    Insplit,          // I
    Inamalgamation,   // I-
    Reduction,        // R
    Delay,            // R-
    CuntzSplice,      // CS
};

std::string to_string(MoveKind k);
MoveKind move_kind_from_string(const std::string& s);

// A fully parameterized move application.  Field use by kind:
//   S   at = the source vertex
//   S-  new_label = added source, out_edges = its out-multiplicities
//   O   at = split vertex, blocks[i] = target -> count (out-edge partition),
//       new_names optional explicit labels for the split copies
//   O-  group = vertices to merge, merged = label of the result
//       (defaults to group.front())
//   I   at = split vertex, blocks[i] = source -> count (in-edge partition)
//   I-  group / merged as for O-
//   R   at = the reduced vertex (single out-edge)
//   R-  at = target vertex w, new_label = inserted vertex,
//       delayed = source -> count of in-edges of w to reroute
//   CS  at = splice vertex, new_names optional labels for the two new vertices
struct MoveInstance {
    MoveKind kind = MoveKind::SourceRemoval;
    std::string at;
    std::vector<std::string> group;
    std::string merged;
    std::vector<std::map<std::string, ExtNat>> blocks;
    std::map<std::string, ExtNat> out_edges;
    std::map<std::string, ExtNat> delayed;
    std::string new_label;
    std::vector<std::string> new_names;

    // Stable total order (kind, then serialized parameters); used to make
    // enumeration and search tie-breaking deterministic.
    std::string sort_key() const;
    std::string describe() const;

    bool operator==(const MoveInstance&) const = default;
};

struct MoveCheck {
    bool ok;
    std::string reason;  // set when !ok
};

MoveCheck validate_move(const Graph& g, const MoveInstance& m);

// Applies a validated move; throws std::invalid_argument with the validation
// reason otherwise.
Graph apply_move(const Graph& g, const MoveInstance& m);

struct EnumBounds {
    int max_partition_blocks = 3;
    std::uint64_t max_new_mult = 3;  // cap on any newly chosen finite multiplicity
};

// Every valid move instance within the bounds, in canonical order.  Inverse
// moves are discovered structurally (mergeable groups, delayable targets).
// Throws BoundError when the graph exceeds the global vertex bound.
std::vector<MoveInstance> enumerate_moves(const Graph& g, const EnumBounds& bounds);

// The exact inverse of `m` as applied to `before`, i.e. an instance taking
// apply_move(before, m) back to `before` verbatim.  Cuntz splices have no
// inverse move and are rejected.
MoveInstance inverse_instance(const Graph& before, const MoveInstance& m);

// True when v sits on a cycle and supports two distinct return paths; the
// Cuntz splice precondition.
bool cuntz_splice_admissible(const Graph& g, int v);

}  // namespace gac
