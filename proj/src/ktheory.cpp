#include "gac/ktheory.hpp"

#include <stdexcept>

#include "gac/errors.hpp"

namespace gac {

// R^x = Z/2 + (a Q-vector space);  C^x = Q/Z + (a Q-vector space), with both
// divisible parts collapsed to symbolic D summands.  Q/Z is itself divisible,
// so it is folded into the divisible count: quotients by any d vanish either
// way.  The cost of the collapse is that D summands report no d-torsion.
FieldDescriptor FieldDescriptor::complexes() {
    return {"C", AbGroup::divisible(2), true, false};
}

FieldDescriptor FieldDescriptor::reals() {
    return {"R", AbGroup::cyclic(2).direct_sum(AbGroup::divisible(1)), true, false};
}

FieldDescriptor FieldDescriptor::rationals() {
    return {"Q", AbGroup::cyclic(2).direct_sum(AbGroup::free(Card::inf())), false, true};
}

FieldDescriptor FieldDescriptor::finite_field(std::uint64_t q) {
    if (q < 2) throw std::invalid_argument("finite field order must be >= 2");
    // q must be a prime power
    std::uint64_t n = q;
    std::uint64_t p = 0;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            p = d;
            break;
        }
    if (p == 0) p = n;
    while (n % p == 0) n /= p;
    if (n != 1) throw std::invalid_argument("finite field order must be a prime power");
    return {"F_" + std::to_string(q), AbGroup::cyclic(BigInt(q - 1)), true, false};
}

FieldDescriptor FieldDescriptor::number_field(const std::string& name) {
    return {name, std::nullopt, false, true};
}

namespace {

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("bad boolean '" + s + "'");
}

}  // namespace

FieldDescriptor parse_field(const std::string& spec) {
    if (spec == "C") return FieldDescriptor::complexes();
    if (spec == "R") return FieldDescriptor::reals();
    if (spec == "Q") return FieldDescriptor::rationals();
    if (spec == "F_2") return FieldDescriptor::finite_field(2);
    if (spec.rfind("F_q:", 0) == 0) {
        std::uint64_t q = std::stoull(spec.substr(4));
        return FieldDescriptor::finite_field(q);
    }
    if (spec.rfind("F_", 0) == 0) {
        std::uint64_t q = std::stoull(spec.substr(2));
        return FieldDescriptor::finite_field(q);
    }
    if (spec.rfind("numberfield:", 0) == 0) return FieldDescriptor::number_field(spec.substr(12));
    if (spec.rfind("custom:", 0) == 0) {
        FieldDescriptor f;
        f.name = "custom";
        std::string rest = spec.substr(7);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t eq = rest.find('=', pos);
            if (eq == std::string::npos)
                throw std::invalid_argument("custom field: expected key=value pairs");
            std::string key = rest.substr(pos, eq - pos);
            // group expressions contain '+', so only split on commas that
            // start a known key
            std::size_t end = rest.size();
            for (std::size_t c = eq + 1; c < rest.size(); ++c) {
                if (rest[c] != ',') continue;
                if (rest.compare(c + 1, 4, "nfq=") == 0 ||
                    rest.compare(c + 1, 9, "numfield=") == 0 ||
                    rest.compare(c + 1, 6, "units=") == 0) {
                    end = c;
                    break;
                }
            }
            std::string val = rest.substr(eq + 1, end - eq - 1);
            if (key == "units")
                f.units = parse_abgroup(val);
            else if (key == "nfq")
                f.no_free_quotients = parse_bool(val);
            else if (key == "numfield")
                f.is_number_field = parse_bool(val);
            else
                throw std::invalid_argument("custom field: unknown key '" + key + "'");
            pos = end + (end < rest.size() ? 1 : 0);
        }
        return f;
    }
    throw std::invalid_argument("unrecognized field descriptor '" + spec + "'");
}

std::string to_string(GraphClass c) {
    return c == GraphClass::Finite ? "finite" : "finite-vertices-infinite-edges";
}

IntMatrix presentation_matrix(const Graph& g) {
    int n = g.vertex_count();
    std::vector<int> regular;
    for (int v = 0; v < n; ++v) {
        ExtNat out = g.out_total(v);
        if (!out.is_zero() && !out.is_infinite()) regular.push_back(v);
    }
    IntMatrix m(n, static_cast<int>(regular.size()));
    for (int c = 0; c < m.cols(); ++c) {
        int v = regular[c];
        for (int w = 0; w < n; ++w) {
            BigInt entry = (v == w) ? 1 : 0;
            entry -= BigInt(g.multiplicity(v, w).finite_value());
            m.at(w, c) = entry;
        }
    }
    return m;
}

namespace {

IntMatrix i_minus_a_transpose(const Graph& g) {
    if (!g.is_finite())
        throw std::invalid_argument("I - A^t requires a finite graph (no infinite multiplicity)");
    int n = g.vertex_count();
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            BigInt entry = (i == j) ? 1 : 0;
            entry -= BigInt(g.multiplicity(j, i).finite_value());
            m.at(i, j) = entry;
        }
    return m;
}

}  // namespace

InvariantBundle invariants_cstar(const Graph& g) {
    InvariantBundle b;
    IntMatrix m = presentation_matrix(g);
    b.k0 = cokernel(m);
    b.k1_topological = AbGroup::free(Card::of(kernel_rank(m)));
    bool finite = g.is_finite();
    b.graph_class = finite ? GraphClass::Finite : GraphClass::FiniteVerticesInfiniteEdges;
    if (finite) b.det_sign = determinant(i_minus_a_transpose(g)).sign;
    VertexClasses c = classify_vertices(g);
    b.singular_count = c.sinks.size() + c.infinite_emitters.size();
    try {
        StructuralReport rep = structural_report(g);
        if (rep.simple) b.cone_full = rep.has_cycle;
    } catch (const BoundError&) {
        // simplicity is undecidable at this size; cone_full stays absent
    }
    return b;
}

InvariantBundle invariants_leavitt(const Graph& g, const FieldDescriptor& k) {
    if (!k.units)
        throw std::invalid_argument("field descriptor '" + k.name +
                                    "' carries no unit group; K_1^alg is unavailable");
    InvariantBundle b = invariants_cstar(g);
    IntMatrix m = presentation_matrix(g);
    b.k1_algebraic = AbGroup::free(Card::of(kernel_rank(m)))
                         .direct_sum(coker_with_coefficients(m, *k.units));
    return b;
}

AbGroup bowen_franks(const Graph& g) {
    return cokernel(i_minus_a_transpose(g));
}

KnBounds kn_alg_bounds(const Graph& g, const AbGroup& kn_field, const AbGroup& kn_minus1_field) {
    IntMatrix m = presentation_matrix(g);
    KnBounds b;
    b.lower = coker_with_coefficients(m, kn_field);
    b.upper = kernel_with_coefficients(m, kn_minus1_field);
    return b;
}

}  // namespace gac
