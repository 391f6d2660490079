#include <random>

#include "doctest.h"
#include "gac/ktheory.hpp"
#include "gac/moves.hpp"
#include "gen.hpp"

using namespace gac;

namespace {

Graph rose(std::uint64_t loops) {
    Graph g({"v"});
    g.set_multiplicity(0, 0, ExtNat(loops));
    return g;
}

MoveInstance cs_at(const std::string& v) {
    MoveInstance m;
    m.kind = MoveKind::CuntzSplice;
    m.at = v;
    return m;
}

Graph pre_splice() {
    return parse_graph("vertices: u v\nedge u u 1\nedge u v 1\nedge v u 1\n");
}

struct BfData {
    AbGroup coker;
    Sign sign;
    BigInt det;
};

BfData bf_data(const Graph& g) {
    InvariantBundle b = invariants_cstar(g);
    Determinant d{0, Sign::Zero};
    IntMatrix m(g.vertex_count(), g.vertex_count());
    for (int i = 0; i < g.vertex_count(); ++i)
        for (int j = 0; j < g.vertex_count(); ++j) {
            BigInt e = (i == j) ? 1 : 0;
            e -= BigInt(g.multiplicity(j, i).finite_value());
            m.at(i, j) = e;
        }
    d = determinant(m);
    return {bowen_franks(g), d.sign, d.value};
}

}  // namespace

TEST_CASE("move validation on pinned cases") {
    // CS is admissible at the loop vertex of the two-vertex example (and at v)
    Graph pre = pre_splice();
    CHECK(validate_move(pre, cs_at("u")).ok);
    CHECK(validate_move(pre, cs_at("v")).ok);
    CHECK_FALSE(validate_move(rose(1), cs_at("v")).ok);  // single cycle

    // S needs a source
    Graph looped = parse_graph("vertices: u v\nedge u v 1\nedge v v 2\nedge v u 1\n");
    MoveInstance s;
    s.kind = MoveKind::SourceRemoval;
    s.at = "u";
    MoveCheck chk = validate_move(looped, s);
    CHECK_FALSE(chk.ok);
    CHECK(chk.reason.find("not a source") != std::string::npos);

    // O with a partition that misses an out-edge
    MoveInstance o;
    o.kind = MoveKind::Outsplit;
    o.at = "v";
    o.blocks = {{{"v", ExtNat(1)}}, {{"v", ExtNat(0)}}};
    MoveCheck oc = validate_move(rose(2), o);
    CHECK_FALSE(oc.ok);  // zero count entry
    o.blocks = {{{"v", ExtNat(1)}}, {{"v", ExtNat(2)}}};
    oc = validate_move(rose(3), o);
    CHECK(oc.ok);
    o.blocks = {{{"v", ExtNat(1)}}, {{"v", ExtNat(1)}}};
    oc = validate_move(rose(3), o);
    CHECK_FALSE(oc.ok);
    CHECK(oc.reason.find("cover") != std::string::npos);
}

TEST_CASE("Cuntz splice on the two-vertex example: 2+3 vertices/edges become 4+9") {
    Graph pre = pre_splice();
    CHECK(pre.vertex_count() == 2);
    CHECK(pre.total_edges() == ExtNat(3));
    Graph post = apply_move(pre, cs_at("v"));
    CHECK(post.vertex_count() == 4);
    CHECK(post.total_edges() == ExtNat(9));

    // sign flips from - to +
    CHECK(bf_data(pre).sign == Sign::Negative);
    CHECK(bf_data(post).sign == Sign::Positive);
    CHECK(bf_data(pre).coker == bf_data(post).coker);
}

TEST_CASE("outsplit of the two-loop rose gives the full 2x2 square") {
    MoveInstance o;
    o.kind = MoveKind::Outsplit;
    o.at = "v";
    o.blocks = {{{"v", ExtNat(1)}}, {{"v", ExtNat(1)}}};
    Graph split = apply_move(rose(2), o);
    REQUIRE(split.vertex_count() == 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(split.multiplicity(i, j) == ExtNat(1));
    // K0 and det sign survive
    CHECK(bf_data(split).coker == bf_data(rose(2)).coker);
    CHECK(bf_data(split).sign == bf_data(rose(2)).sign);
}

TEST_CASE("source removal peels an added source") {
    MoveInstance add;
    add.kind = MoveKind::SourceAddition;
    add.new_label = "u";
    add.out_edges = {{"v", ExtNat(3)}};
    Graph with_source = apply_move(rose(2), add);
    CHECK(with_source.vertex_count() == 2);
    CHECK(with_source.multiplicity("u", "v") == ExtNat(3));
    CHECK(with_source.in_total(with_source.index_of("u")).is_zero());

    MoveInstance rem;
    rem.kind = MoveKind::SourceRemoval;
    rem.at = "u";
    Graph back = apply_move(with_source, rem);
    CHECK(back == rose(2));
}

TEST_CASE("reduction collapses a single-edge vertex") {
    // u -> v -> w, extra w -> u to keep things connected
    Graph g = parse_graph("vertices: u v w\nedge u v 2\nedge v w 1\nedge w u 1\n");
    MoveInstance r;
    r.kind = MoveKind::Reduction;
    r.at = "v";
    Graph red = apply_move(g, r);
    CHECK(red.vertex_count() == 2);
    CHECK(red.multiplicity("u", "w") == ExtNat(2));
    CHECK(red.multiplicity("w", "u") == ExtNat(1));

    // loops forbid reduction
    CHECK_FALSE(validate_move(rose(1), [] {
                    MoveInstance m;
                    m.kind = MoveKind::Reduction;
                    m.at = "v";
                    return m;
                }()).ok);
}

TEST_CASE("enumerate_moves finds the expected instances") {
    auto moves = enumerate_moves(rose(2), {2, 2});
    bool has_outsplit = false;
    for (const auto& m : moves)
        if (m.kind == MoveKind::Outsplit && m.blocks.size() == 2) has_outsplit = true;
    CHECK(has_outsplit);

    // one S instance per regular source
    Graph g = parse_graph("vertices: s v\nedge s v 2\nedge v v 2\n");
    int s_count = 0;
    for (const auto& m : enumerate_moves(g, {2, 2}))
        if (m.kind == MoveKind::SourceRemoval) ++s_count;
    CHECK(s_count == 1);

    // CS appears only at two-cycle bases
    for (const auto& m : enumerate_moves(rose(1), {3, 3}))
        CHECK(m.kind != MoveKind::CuntzSplice);
    bool has_cs = false;
    for (const auto& m : enumerate_moves(rose(2), {3, 3}))
        if (m.kind == MoveKind::CuntzSplice) has_cs = true;
    CHECK(has_cs);

    // deterministic order
    auto again = enumerate_moves(g, {2, 2});
    auto again2 = enumerate_moves(g, {2, 2});
    REQUIRE(again.size() == again2.size());
    for (std::size_t i = 0; i < again.size(); ++i) CHECK(again[i] == again2[i]);
}

TEST_CASE("every enumerated instance validates and applies") {
    std::mt19937 rng(67);
    gactest::GraphGenOptions opts;
    opts.max_vertices = 4;
    opts.max_mult = 2;
    opts.inf_prob = 0.15;
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = gactest::random_graph(rng, opts);
        for (const auto& m : enumerate_moves(g, {2, 2})) {
            REQUIRE(validate_move(g, m).ok);
            Graph out = apply_move(g, m);
            CHECK(out.vertex_count() >= 1);
        }
    }
}

namespace {

// Picks random valid instances (optionally restricted by kind) through the
// enumerator, so samples always respect the same bounds the search uses.
std::vector<MoveInstance> sample_instances(std::mt19937& rng, const Graph& g, int want,
                                           const EnumBounds& bounds) {
    auto all = enumerate_moves(g, bounds);
    std::vector<MoveInstance> picked;
    if (all.empty()) return picked;
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int i = 0; i < want; ++i) picked.push_back(all[pick(rng)]);
    return picked;
}

}  // namespace

TEST_CASE("moves preserve Bowen-Franks data; S preserves the determinant exactly") {
    std::mt19937 rng(71);
    gactest::GraphGenOptions opts;
    opts.max_vertices = 4;
    opts.max_mult = 3;
    int checked = 0;
    while (checked < 120) {
        Graph g = gactest::random_graph(rng, opts);
        for (const MoveInstance& m : sample_instances(rng, g, 3, {3, 3})) {
            if (m.kind == MoveKind::CuntzSplice) continue;
            Graph out = apply_move(g, m);
            BfData before = bf_data(g);
            BfData after = bf_data(out);
            CHECK(before.coker == after.coker);
            CHECK(before.sign == after.sign);
            if (m.kind == MoveKind::SourceRemoval || m.kind == MoveKind::SourceAddition)
                CHECK(before.det == after.det);
            ++checked;
        }
    }
}

TEST_CASE("round trips through inverse instances") {
    std::mt19937 rng(73);
    gactest::GraphGenOptions opts;
    opts.max_vertices = 4;
    opts.max_mult = 2;
    opts.inf_prob = 0.1;
    int checked = 0;
    while (checked < 150) {
        Graph g = gactest::random_graph(rng, opts);
        for (const MoveInstance& m : sample_instances(rng, g, 4, {2, 2})) {
            if (m.kind == MoveKind::CuntzSplice) continue;
            Graph forward = apply_move(g, m);
            MoveInstance inv = inverse_instance(g, m);
            REQUIRE(validate_move(forward, inv).ok);
            Graph back = apply_move(forward, inv);
            CHECK(graphs_isomorphic(back, g));
            ++checked;
        }
    }
}

TEST_CASE("infinite-edge moves preserve K-theory descriptors") {
    std::mt19937 rng(79);
    gactest::GraphGenOptions opts;
    opts.max_vertices = 4;
    opts.max_mult = 2;
    opts.inf_prob = 0.5;
    int checked = 0;
    while (checked < 80) {
        Graph g = gactest::random_graph(rng, opts);
        if (g.is_finite()) continue;
        InvariantBundle before = invariants_cstar(g);
        for (const MoveInstance& m : sample_instances(rng, g, 3, {2, 2})) {
            if (m.kind == MoveKind::CuntzSplice) continue;
            Graph out = apply_move(g, m);
            InvariantBundle after = invariants_cstar(out);
            CHECK(before.k0 == after.k0);
            CHECK(before.k1_topological == after.k1_topological);
            CHECK(before.singular_count == after.singular_count);
            ++checked;
        }
    }
}

TEST_CASE("CS on infinite-edge graphs preserves K0 and K1") {
    std::mt19937 rng(83);
    gactest::GraphGenOptions opts;
    opts.max_vertices = 3;
    opts.max_mult = 2;
    opts.inf_prob = 0.5;
    int checked = 0;
    while (checked < 40) {
        Graph g = gactest::random_graph(rng, opts);
        if (g.is_finite()) continue;
        int site = -1;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (cuntz_splice_admissible(g, v)) site = v;
        if (site < 0) continue;
        Graph out = apply_move(g, cs_at(g.vertex(site)));
        InvariantBundle before = invariants_cstar(g);
        InvariantBundle after = invariants_cstar(out);
        CHECK(before.k0 == after.k0);
        CHECK(before.k1_topological == after.k1_topological);
        ++checked;
    }
}

TEST_CASE("insplitting an infinite in-class across two blocks") {
    // u --inf--> v, v --2--> u; both blocks take infinitely many of the class
    Graph g = parse_graph("vertices: u v\nedge u v inf\nedge v u 2\n");
    MoveInstance i;
    i.kind = MoveKind::Insplit;
    i.at = "v";
    i.blocks = {{{"u", ExtNat::infinity()}}, {{"u", ExtNat::infinity()}}};
    REQUIRE(validate_move(g, i).ok);
    Graph out = apply_move(g, i);
    REQUIRE(out.vertex_count() == 3);
    CHECK(out.multiplicity("u", "v_1").is_infinite());
    CHECK(out.multiplicity("u", "v_2").is_infinite());
    CHECK(out.multiplicity("v_1", "u") == ExtNat(2));
    CHECK(out.multiplicity("v_2", "u") == ExtNat(2));

    InvariantBundle before = invariants_cstar(g);
    InvariantBundle after = invariants_cstar(out);
    CHECK(before.k0 == after.k0);
    CHECK(after.k0 == AbGroup::free(Card::of(1)));
    CHECK(before.k1_topological == after.k1_topological);
    CHECK(before.singular_count == after.singular_count);
}

TEST_CASE("outsplitting peels a finite chunk off an infinite class") {
    // infinitely many loops split as inf | 2: only one block may stay infinite
    Graph g = parse_graph("vertices: v\nedge v v inf\n");
    MoveInstance o;
    o.kind = MoveKind::Outsplit;
    o.at = "v";
    o.blocks = {{{"v", ExtNat::infinity()}}, {{"v", ExtNat(2)}}};
    REQUIRE(validate_move(g, o).ok);
    Graph out = apply_move(g, o);
    REQUIRE(out.vertex_count() == 2);
    CHECK(out.multiplicity("v_1", "v_1").is_infinite());
    CHECK(out.multiplicity("v_1", "v_2").is_infinite());
    CHECK(out.multiplicity("v_2", "v_1") == ExtNat(2));
    CHECK(out.multiplicity("v_2", "v_2") == ExtNat(2));

    InvariantBundle before = invariants_cstar(g);
    InvariantBundle after = invariants_cstar(out);
    CHECK(before.k0 == after.k0);
    CHECK(before.k1_topological == after.k1_topological);
    CHECK(before.singular_count == after.singular_count);

    // splitting the infinite class into two infinite blocks is rejected
    MoveInstance bad = o;
    bad.blocks = {{{"v", ExtNat::infinity()}}, {{"v", ExtNat::infinity()}}};
    MoveCheck chk = validate_move(g, bad);
    CHECK_FALSE(chk.ok);
    CHECK(chk.reason.find("at most one") != std::string::npos);
}

TEST_CASE("outamalgamation onto a fresh label") {
    Graph square = parse_graph("vertices: a b\nedge a a 1\nedge a b 1\nedge b a 1\nedge b b 1\n");
    MoveInstance merge;
    merge.kind = MoveKind::Outamalgamation;
    merge.group = {"a", "b"};
    merge.merged = "m";
    REQUIRE(validate_move(square, merge).ok);
    Graph out = apply_move(square, merge);
    REQUIRE(out.vertex_count() == 1);
    CHECK(out.vertex(0) == "m");
    CHECK(out.multiplicity(0, 0) == ExtNat(2));

    // a label already in use elsewhere is rejected
    Graph three = parse_graph(
        "vertices: a b c\nedge a a 1\nedge a b 1\nedge b a 1\nedge b b 1\nedge c a 1\n");
    MoveInstance clash;
    clash.kind = MoveKind::Outamalgamation;
    clash.group = {"a", "b"};
    clash.merged = "c";
    CHECK_FALSE(validate_move(three, clash).ok);
}

TEST_CASE("singular counts survive O, I, R at regular vertices") {
    std::mt19937 rng(89);
    gactest::GraphGenOptions opts;
    opts.max_vertices = 4;
    opts.inf_prob = 0.25;
    int checked = 0;
    while (checked < 100) {
        Graph g = gactest::random_graph(rng, opts);
        std::uint64_t sing_before = invariants_cstar(g).singular_count;
        for (const MoveInstance& m : sample_instances(rng, g, 3, {2, 2})) {
            bool relevant = m.kind == MoveKind::Outsplit || m.kind == MoveKind::Insplit ||
                            m.kind == MoveKind::Reduction;
            if (!relevant) continue;
            if (m.kind == MoveKind::Outsplit &&
                g.out_total(g.index_of(m.at)).is_infinite())
                continue;  // infinite emitters stay singular but are not "regular" sites
            Graph out = apply_move(g, m);
            CHECK(invariants_cstar(out).singular_count == sing_before);
            ++checked;
        }
    }
}
