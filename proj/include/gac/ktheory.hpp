#pragma once

#include <optional>
#include <string>

#include "gac/exactalg.hpp"
#include "gac/graph.hpp"

namespace gac {

// A coefficient field presented by the structure of its unit group K^x plus
// the flags the classification theorems key on.  `units` may be absent for
// named number fields whose unit group is not needed.
struct FieldDescriptor {
    std::string name;
    std::optional<AbGroup> units;  // K_1^alg(K) = K^x as an abelian group
    bool no_free_quotients = false;
    bool is_number_field = false;

    static FieldDescriptor complexes();
    static FieldDescriptor reals();
    static FieldDescriptor rationals();
    static FieldDescriptor finite_field(std::uint64_t q);
    static FieldDescriptor number_field(const std::string& name);
};

// CLI syntax: C | R | Q | F_2 | F_q:<q> | numberfield:<name>
//           | custom:units=<group expr>,nfq=<bool>,numfield=<bool>
FieldDescriptor parse_field(const std::string& spec);

enum class GraphClass { Finite, FiniteVerticesInfiniteEdges };

std::string to_string(GraphClass c);

struct InvariantBundle {
    AbGroup k0;
    AbGroup k1_topological;           // free, of the kernel rank
    std::optional<Sign> det_sign;     // present iff the graph is finite
    std::uint64_t singular_count = 0; // |sinks| + |infinite emitters|
    std::optional<bool> cone_full;    // present only when the graph is simple
    GraphClass graph_class = GraphClass::Finite;
    std::optional<AbGroup> k1_algebraic;  // set by the Leavitt variant
};

// The K-theory presentation matrix: |E^0| rows (declared order), one column
// per regular vertex v holding delta - (edge count from v into the row
// vertex).  With no singular vertices it equals I - A^t.
IntMatrix presentation_matrix(const Graph& g);

InvariantBundle invariants_cstar(const Graph& g);

InvariantBundle invariants_leavitt(const Graph& g, const FieldDescriptor& k);

// coker(I - A^t) over the full square vertex matrix; finite graphs only.
AbGroup bowen_franks(const Graph& g);

// Endpoint terms of the long exact sequence for K_n^alg(L_K(E)): the group is
// an extension of `upper` (kernel side, coefficients K_{n-1}^alg(K)) by
// `lower` (cokernel side, coefficients K_n^alg(K)); the extension itself is
// not resolved here.
struct KnBounds {
    AbGroup lower;
    AbGroup upper;
};

KnBounds kn_alg_bounds(const Graph& g, const AbGroup& kn_field, const AbGroup& kn_minus1_field);

}  // namespace gac
