#include "gac/classify.hpp"

#include <stdexcept>

#include "gac/errors.hpp"

namespace gac {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Equivalent: return "Equivalent";
        case Outcome::NotEquivalent: return "NotEquivalent";
        case Outcome::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

std::string sign_str(const std::optional<Sign>& s) { return s ? to_string(*s) : "n/a"; }

void require_simple(const StructuralReport& rep, const ClassifyOptions& opts,
                    const char* which) {
    if (opts.assume_simple) return;
    if (!rep.simple)
        throw HypothesisError(std::string("graph ") + which +
                              " is not simple (Condition (L) or ideal triviality fails); "
                              "pass --assume-simple to override");
}

void require_purely_infinite(const StructuralReport& rep, const ClassifyOptions& opts,
                             const char* which) {
    if (opts.assume_purely_infinite) return;
    if (!rep.has_cycle)
        throw HypothesisError(std::string("graph ") + which +
                              " has no cycle, so its algebra is not purely infinite; "
                              "pass --assume-purely-infinite to override");
}

Comparison cmp(const std::string& name, const std::string& a, const std::string& b) {
    return {name, a, b};
}

}  // namespace

Verdict flow_equivalence_decide(const Graph& g, const Graph& h) {
    for (const auto* p : {&g, &h}) {
        const char* which = (p == &g) ? "A" : "B";
        if (!p->is_finite())
            throw HypothesisError(std::string("graph ") + which +
                                  " has an infinite multiplicity; flow equivalence needs finite "
                                  "graphs");
        StructuralReport rep = structural_report(*p);
        if (!rep.strongly_connected)
            throw HypothesisError(std::string("graph ") + which + " is not strongly connected");
        VertexClasses c = classify_vertices(*p);
        if (!c.sinks.empty())
            throw HypothesisError(std::string("graph ") + which + " has a sink");
        for (int v = 0; v < p->vertex_count(); ++v)
            if (p->in_total(v).is_zero())
                throw HypothesisError(std::string("graph ") + which + " has a source");
    }

    AbGroup bf_g = bowen_franks(g);
    AbGroup bf_h = bowen_franks(h);
    InvariantBundle ig = invariants_cstar(g);
    InvariantBundle ih = invariants_cstar(h);

    Verdict v;
    v.theorem = "franks-ps";
    v.compared.push_back(cmp("bowen-franks", bf_g.to_string(), bf_h.to_string()));
    v.compared.push_back(cmp("det sign", sign_str(ig.det_sign), sign_str(ih.det_sign)));
    v.result = (bf_g == bf_h && ig.det_sign == ih.det_sign) ? Outcome::Equivalent
                                                            : Outcome::NotEquivalent;
    return v;
}

Verdict cstar_morita_decide(const Graph& g, const Graph& h, const ClassifyOptions& opts) {
    StructuralReport rg = structural_report(g);
    StructuralReport rh = structural_report(h);
    require_simple(rg, opts, "A");
    require_simple(rh, opts, "B");

    InvariantBundle ig = invariants_cstar(g);
    InvariantBundle ih = invariants_cstar(h);
    bool g_finite = ig.graph_class == GraphClass::Finite;
    bool h_finite = ih.graph_class == GraphClass::Finite;
    bool pi_g = opts.assume_purely_infinite || rg.has_cycle;
    bool pi_h = opts.assume_purely_infinite || rh.has_cycle;

    Verdict v;

    if (g_finite && h_finite && pi_g && pi_h) {
        // simple purely infinite, finite graphs: K_0 is complete
        bool k0 = groups_isomorphic(ig.k0, ih.k0);
        bool signs = ig.det_sign == ih.det_sign;
        v.compared.push_back(cmp("K0", ig.k0.to_string(), ih.k0.to_string()));
        v.compared.push_back(cmp("det sign", sign_str(ig.det_sign), sign_str(ih.det_sign)));
        if (k0 && signs) {
            v.theorem = "cuntz-krieger";
            v.result = Outcome::Equivalent;
            v.notes.push_back("no Cuntz splice required");
        } else if (k0) {
            v.theorem = "rordam";
            v.result = Outcome::Equivalent;
            v.notes.push_back("one application of Move (CS)");
        } else {
            v.theorem = "rordam";
            v.result = Outcome::NotEquivalent;
        }
        return v;
    }

    if (!g_finite && !h_finite) {
        // finite vertex sets, infinitely many edges: (K_0, K_1) is complete
        bool k0 = groups_isomorphic(ig.k0, ih.k0);
        bool k1 = groups_isomorphic(ig.k1_topological, ih.k1_topological);
        v.theorem = "sorensen";
        v.compared.push_back(cmp("K0", ig.k0.to_string(), ih.k0.to_string()));
        v.compared.push_back(
            cmp("K1", ig.k1_topological.to_string(), ih.k1_topological.to_string()));
        v.result = (k0 && k1) ? Outcome::Equivalent : Outcome::NotEquivalent;
        return v;
    }

    if (g_finite && h_finite && !pi_g && !pi_h) {
        // finite-dimensional case: Morita class is the number of sinks
        VertexClasses cg = classify_vertices(g);
        VertexClasses ch = classify_vertices(h);
        v.theorem = "finite-dimensional";
        v.compared.push_back(cmp("sinks", std::to_string(cg.sinks.size()),
                                 std::to_string(ch.sinks.size())));
        v.result =
            cg.sinks.size() == ch.sinks.size() ? Outcome::Equivalent : Outcome::NotEquivalent;
        return v;
    }

    // mixed classes: the AF / purely infinite dichotomy may still separate
    bool cf_g = pi_g;
    bool cf_h = pi_h;
    if (cf_g != cf_h) {
        v.theorem = "dichotomy";
        v.compared.push_back(cmp("cone full", cf_g ? "true" : "false", cf_h ? "true" : "false"));
        v.result = Outcome::NotEquivalent;
        v.notes.push_back("one algebra is AF, the other purely infinite");
        return v;
    }
    v.result = Outcome::Unknown;
    v.theorem = g_finite != h_finite ? "sorensen" : "rordam";
    v.notes.push_back("no theorem in scope covers this mix of graph classes");
    return v;
}

Verdict leavitt_morita_decide(const Graph& g, const Graph& h, const FieldDescriptor& k,
                              const std::optional<AbGroup>& k6_a,
                              const std::optional<AbGroup>& k6_b, const ClassifyOptions& opts) {
    StructuralReport rg = structural_report(g);
    StructuralReport rh = structural_report(h);
    require_simple(rg, opts, "A");
    require_simple(rh, opts, "B");

    InvariantBundle ig = invariants_cstar(g);
    InvariantBundle ih = invariants_cstar(h);
    bool g_finite = ig.graph_class == GraphClass::Finite;
    bool h_finite = ih.graph_class == GraphClass::Finite;

    Verdict v;

    if (g_finite && h_finite) {
        require_purely_infinite(rg, opts, "A");
        require_purely_infinite(rh, opts, "B");
        bool k0 = groups_isomorphic(ig.k0, ih.k0);
        bool signs = ig.det_sign == ih.det_sign;
        v.theorem = "alps";
        v.compared.push_back(cmp("K0", ig.k0.to_string(), ih.k0.to_string()));
        v.compared.push_back(cmp("det sign", sign_str(ig.det_sign), sign_str(ih.det_sign)));
        if (!k0) {
            v.result = Outcome::NotEquivalent;
        } else if (signs) {
            v.result = Outcome::Equivalent;
        } else {
            v.result = Outcome::Unknown;
            v.notes.push_back(
                "Open Question 1: whether the Cuntz splice preserves Morita equivalence of "
                "Leavitt path algebras is open; the sufficient criterion does not apply");
        }
        return v;
    }

    if (!g_finite && !h_finite) {
        // any field: (K_0, number of singular vertices) is complete
        bool k0 = groups_isomorphic(ig.k0, ih.k0);
        bool sing = ig.singular_count == ih.singular_count;
        v.theorem = "ruiz-tomforde";
        v.compared.push_back(cmp("K0", ig.k0.to_string(), ih.k0.to_string()));
        v.compared.push_back(cmp("singular count", std::to_string(ig.singular_count),
                                 std::to_string(ih.singular_count)));
        v.result = (k0 && sing) ? Outcome::Equivalent : Outcome::NotEquivalent;

        if (k.no_free_quotients && k.units) {
            InvariantBundle lg = invariants_leavitt(g, k);
            InvariantBundle lh = invariants_leavitt(h, k);
            bool nfq_match = k0 && groups_isomorphic(*lg.k1_algebraic, *lh.k1_algebraic);
            v.compared.push_back(cmp("K1^alg (" + k.name + ")", lg.k1_algebraic->to_string(),
                                     lh.k1_algebraic->to_string()));
            if (nfq_match != (v.result == Outcome::Equivalent))
                throw std::runtime_error(
                    "theorem cross-check contradiction: the (K0, K1^alg) invariant over " +
                    k.name + " disagrees with the (K0, singular count) invariant");
            v.notes.push_back("no-free-quotients cross-check (K0, K1^alg over " + k.name +
                              "): consistent");
        }
        if (k.is_number_field && k6_a && k6_b) {
            bool k6 = groups_isomorphic(*k6_a, *k6_b);
            v.compared.push_back(cmp("K6^alg", k6_a->to_string(), k6_b->to_string()));
            bool nf_match = k0 && k6;
            if (nf_match != (v.result == Outcome::Equivalent))
                throw std::runtime_error(
                    "theorem cross-check contradiction: the supplied (K0, K6^alg) invariant "
                    "disagrees with the (K0, singular count) invariant");
            v.notes.push_back("number-field cross-check (K0, K6^alg): consistent");
        }
        return v;
    }

    // mixed classes
    bool cf_g = opts.assume_purely_infinite ? true : rg.has_cycle;
    bool cf_h = opts.assume_purely_infinite ? true : rh.has_cycle;
    if (cf_g != cf_h) {
        v.theorem = "dichotomy";
        v.compared.push_back(cmp("cone full", cf_g ? "true" : "false", cf_h ? "true" : "false"));
        v.result = Outcome::NotEquivalent;
        v.notes.push_back("one algebra is ultramatricial, the other purely infinite");
        return v;
    }
    v.result = Outcome::Unknown;
    v.theorem = "ruiz-tomforde";
    v.notes.push_back("no theorem in scope covers this mix of graph classes");
    return v;
}

}  // namespace gac
