#include <random>

#include "doctest.h"
#include "gac/errors.hpp"
#include "gac/ktheory.hpp"
#include "gen.hpp"

using namespace gac;

namespace {

Graph rose(std::uint64_t loops) {
    Graph g({"v"});
    g.set_multiplicity(0, 0, loops == 0 ? ExtNat(0) : ExtNat(loops));
    return g;
}

Graph rose_inf() {
    Graph g({"v"});
    g.set_multiplicity(0, 0, ExtNat::infinity());
    return g;
}

// v --inf--> w, w --2--> v
Graph inf_pair() { return parse_graph("vertices: v w\nedge v w inf\nedge w v 2\n"); }

}  // namespace

TEST_CASE("presentation matrix shapes and entries") {
    IntMatrix m = presentation_matrix(rose(2));
    CHECK(m.rows() == 1);
    CHECK(m.cols() == 1);
    CHECK(m.at(0, 0) == -1);

    // only w is regular; column ordered (v, w) is (-2, 1)^t
    IntMatrix p = presentation_matrix(inf_pair());
    CHECK(p.rows() == 2);
    CHECK(p.cols() == 1);
    CHECK(p.at(0, 0) == -2);
    CHECK(p.at(1, 0) == 1);

    // no regular vertices: a 1x0 matrix
    IntMatrix q = presentation_matrix(rose_inf());
    CHECK(q.rows() == 1);
    CHECK(q.cols() == 0);
}

TEST_CASE("presentation matrix equals I - A^t without singular vertices") {
    std::mt19937 rng(43);
    gactest::GraphGenOptions opts;
    opts.edge_prob = 0.6;
    for (int trial = 0; trial < 300; ++trial) {
        Graph g = gactest::random_graph(rng, opts);
        if (!classify_vertices(g).sinks.empty()) continue;
        IntMatrix m = presentation_matrix(g);
        REQUIRE(m.rows() == m.cols());
        int n = g.vertex_count();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                BigInt expected = (i == j ? 1 : 0);
                expected -= BigInt(g.multiplicity(j, i).finite_value());
                CHECK(m.at(i, j) == expected);
            }
    }
}

TEST_CASE("C*-invariants on pinned graphs") {
    InvariantBundle four = invariants_cstar(rose(4));
    CHECK(four.k0 == AbGroup::cyclic(3));
    CHECK(four.k1_topological.is_trivial());
    CHECK(four.det_sign == Sign::Negative);
    CHECK(four.graph_class == GraphClass::Finite);
    CHECK(four.cone_full == true);

    InvariantBundle ip = invariants_cstar(inf_pair());
    CHECK(ip.k0 == AbGroup::free(Card::of(1)));
    CHECK(ip.k1_topological.is_trivial());
    CHECK_FALSE(ip.det_sign.has_value());
    CHECK(ip.singular_count == 1);
    CHECK(ip.graph_class == GraphClass::FiniteVerticesInfiniteEdges);

    // pre-splice example: A = [[1,1],[1,0]], K0 = 0, det sign -
    Graph pre = parse_graph("vertices: u v\nedge u u 1\nedge u v 1\nedge v u 1\n");
    InvariantBundle ipre = invariants_cstar(pre);
    CHECK(ipre.k0.is_trivial());
    CHECK(ipre.det_sign == Sign::Negative);
}

TEST_CASE("Leavitt invariants carry the coefficient units") {
    InvariantBundle overQ = invariants_leavitt(rose(2), FieldDescriptor::rationals());
    REQUIRE(overQ.k1_algebraic.has_value());
    CHECK(overQ.k1_algebraic->is_trivial());
    CHECK(overQ.k0 == invariants_cstar(rose(2)).k0);

    InvariantBundle overC = invariants_leavitt(inf_pair(), FieldDescriptor::complexes());
    REQUIRE(overC.k1_algebraic.has_value());
    CHECK(*overC.k1_algebraic == *FieldDescriptor::complexes().units);

    InvariantBundle anyK = invariants_leavitt(rose_inf(), FieldDescriptor::reals());
    CHECK(anyK.k0 == AbGroup::free(Card::of(1)));
    CHECK(*anyK.k1_algebraic == *FieldDescriptor::reals().units);

    CHECK_THROWS_AS(invariants_leavitt(rose(2), FieldDescriptor::number_field("K")),
                    std::invalid_argument);
}

TEST_CASE("K0 agrees between the C* and Leavitt routes") {
    std::mt19937 rng(47);
    gactest::GraphGenOptions opts;
    opts.inf_prob = 0.2;
    for (int trial = 0; trial < 200; ++trial) {
        Graph g = gactest::random_graph(rng, opts);
        CHECK(invariants_leavitt(g, FieldDescriptor::complexes()).k0 == invariants_cstar(g).k0);
    }
}

TEST_CASE("k1 reductions against unit structure") {
    std::mt19937 rng(53);
    FieldDescriptor trivial_units{"triv", AbGroup::trivial(), true, false};
    FieldDescriptor z_units{"zunits", AbGroup::free(Card::of(1)), false, false};
    for (int trial = 0; trial < 150; ++trial) {
        Graph g = gactest::random_graph(rng, {});
        InvariantBundle base = invariants_cstar(g);
        // trivial units: K1^alg collapses to the topological K1
        CHECK(*invariants_leavitt(g, trivial_units).k1_algebraic == base.k1_topological);
        // units = Z: kernel plus integer cokernel
        IntMatrix m = presentation_matrix(g);
        AbGroup expect = AbGroup::free(Card::of(kernel_rank(m))).direct_sum(cokernel(m));
        CHECK(*invariants_leavitt(g, z_units).k1_algebraic == expect);
    }
}

TEST_CASE("k1 of nonsingular finite graphs is trivial") {
    std::mt19937 rng(59);
    gactest::GraphGenOptions opts;
    opts.edge_prob = 0.7;
    for (int trial = 0; trial < 200; ++trial) {
        Graph g = gactest::random_graph(rng, opts);
        if (!g.is_finite()) continue;
        InvariantBundle b = invariants_cstar(g);
        if (b.det_sign != Sign::Zero) CHECK(b.k1_topological.is_trivial());
    }
}

TEST_CASE("Bowen-Franks groups") {
    CHECK(bowen_franks(rose(3)) == AbGroup::cyclic(2));
    CHECK(bowen_franks(rose(1)) == AbGroup::free(Card::of(1)));
    Graph two = parse_graph("vertices: u v\nedge u u 1\nedge u v 2\nedge v u 1\nedge v v 1\n");
    CHECK(bowen_franks(two) == AbGroup::cyclic(2));
    CHECK_THROWS_AS(bowen_franks(rose_inf()), std::invalid_argument);

    // coincides with K0 on finite graphs without sinks
    std::mt19937 rng(61);
    gactest::GraphGenOptions opts;
    opts.edge_prob = 0.7;
    for (int trial = 0; trial < 200; ++trial) {
        Graph g = gactest::random_graph(rng, opts);
        if (!classify_vertices(g).sinks.empty()) continue;
        CHECK(bowen_franks(g) == invariants_cstar(g).k0);
    }
}

TEST_CASE("O_n family has pairwise distinct K0") {
    std::vector<AbGroup> groups;
    for (int n = 2; n <= 8; ++n) groups.push_back(invariants_cstar(rose(n)).k0);
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t j = i + 1; j < groups.size(); ++j)
            CHECK_FALSE(groups_isomorphic(groups[i], groups[j]));
}

TEST_CASE("long exact sequence endpoint terms") {
    // n=1 data on the two-loop rose: both terms vanish
    AbGroup units = *FieldDescriptor::complexes().units;
    KnBounds b = kn_alg_bounds(rose(2), units, AbGroup::free(Card::of(1)));
    CHECK(b.lower.is_trivial());
    CHECK(b.upper.is_trivial());

    // no regular vertices: lower term is a full copy per vertex, upper empty
    KnBounds inf = kn_alg_bounds(rose_inf(), units, AbGroup::free(Card::of(1)));
    CHECK(inf.lower == units);
    CHECK(inf.upper.is_trivial());

    // 2-torsion kernel of multiplication by 2 in Z/4 shows up upstairs
    Graph g({"v", "w"});
    g.set_multiplicity(0, 0, ExtNat(3));  // presentation column (-2, 0)
    KnBounds tor = kn_alg_bounds(g, AbGroup::trivial(), AbGroup::cyclic(4));
    CHECK(tor.upper == AbGroup::cyclic(2));
}

TEST_CASE("field descriptor parsing") {
    FieldDescriptor c = parse_field("C");
    CHECK(c.no_free_quotients);
    CHECK_FALSE(c.is_number_field);
    CHECK(*c.units == AbGroup::divisible(2));

    FieldDescriptor r = parse_field("R");
    CHECK(*r.units == AbGroup::cyclic(2).direct_sum(AbGroup::divisible(1)));

    FieldDescriptor q = parse_field("Q");
    CHECK_FALSE(q.no_free_quotients);
    CHECK(q.is_number_field);
    CHECK(*q.units == AbGroup::cyclic(2).direct_sum(AbGroup::free(Card::inf())));

    CHECK(*parse_field("F_2").units == AbGroup::trivial());
    CHECK(*parse_field("F_q:9").units == AbGroup::cyclic(8));
    CHECK_THROWS_AS(parse_field("F_q:6"), std::invalid_argument);  // 6 is not a prime power

    FieldDescriptor nf = parse_field("numberfield:Q(sqrt2)");
    CHECK(nf.is_number_field);
    CHECK_FALSE(nf.units.has_value());

    FieldDescriptor custom = parse_field("custom:units=Z/2+Z^w,nfq=false,numfield=true");
    CHECK(*custom.units == AbGroup::cyclic(2).direct_sum(AbGroup::free(Card::inf())));
    CHECK_FALSE(custom.no_free_quotients);
    CHECK(custom.is_number_field);

    CHECK_THROWS_AS(parse_field("bogus"), std::invalid_argument);
}
