#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "quadcalc/lattices.hpp"
#include "quadcalc/quadgraph.hpp"

using namespace quadcalc;

namespace {

constexpr double kPi = std::numbers::pi;

QuadGraph unit_square() {
    std::vector<VertexInput> v = {
        {{0, 0}, Color::Black, true},
        {{1, 0}, Color::White, true},
        {{1, 1}, Color::Black, true},
        {{0, 1}, Color::White, true},
    };
    return build_quadgraph(v, {{0, 1, 2, 3}});
}

LatticeSpec skew_spec(int m, int n, Complex e1 = {1, 0}, Complex e2 = {0, 1}) {
    LatticeSpec s;
    s.family = LatticeFamily::Skew;
    s.e1 = e1;
    s.e2 = e2;
    s.m = m;
    s.n = n;
    return s;
}

} // namespace

TEST_CASE("unit square quad geometry") {
    QuadGraph g = unit_square();
    REQUIRE(g.quad_count() == 1);
    const QuadGeometry& ge = g.geom(0);
    CHECK(std::abs(ge.rho - Complex(1, 0)) < 1e-14);
    CHECK(std::abs(ge.phi - kPi / 2) < 1e-14);
    CHECK(std::abs(ge.ar_FQ - 1.0) < 1e-14);
    CHECK(std::abs(ge.lambda + std::conj(ge.lambda) - 1.0) < 1e-15);
    CHECK(std::abs(ge.center - Complex(0.5, 0.5)) < 1e-15);
}

TEST_CASE("clockwise input is normalized to counterclockwise") {
    std::vector<VertexInput> v = {
        {{0, 0}, Color::Black, true},
        {{0, 1}, Color::White, true},
        {{1, 1}, Color::Black, true},
        {{1, 0}, Color::White, true},
    };
    QuadGraph g = build_quadgraph(v, {{0, 1, 2, 3}});
    CHECK(g.geom(0).ar_FQ > 0);
    // w- and w+ swapped
    CHECK(g.quad(0).v[0] == 0);
    CHECK(g.quad(0).v[1] == 3);
    CHECK(g.quad(0).v[3] == 1);
}

TEST_CASE("color pattern violations are rejected") {
    std::vector<VertexInput> v = {
        {{0, 0}, Color::Black, true},
        {{1, 0}, Color::Black, true},  // should be white
        {{1, 1}, Color::Black, true},
        {{0, 1}, Color::White, true},
    };
    CHECK_THROWS_WITH_AS(build_quadgraph(v, {{0, 1, 2, 3}}), doctest::Contains("NonBipartite"),
                         Error);
}

TEST_CASE("degenerate quad is rejected") {
    std::vector<VertexInput> v = {
        {{0, 0}, Color::Black, true},
        {{1, 0}, Color::White, true},
        {{2, 0}, Color::Black, true},
        {{3, 0}, Color::White, true},
    };
    CHECK_THROWS_AS(build_quadgraph(v, {{0, 1, 2, 3}}), Error);
}

TEST_CASE("two faces sharing a diagonal violate strong regularity") {
    std::vector<VertexInput> v = {
        {{0, 0}, Color::Black, true},  {{1, 0}, Color::White, true},
        {{1, 1}, Color::Black, true},  {{0, 1}, Color::White, true},
        {{1, -1}, Color::White, true}, {{0, -1}, Color::White, true},
    };
    // second quad shares the black diagonal {0, 2} but no edge
    CHECK_THROWS_WITH_AS(build_quadgraph(v, {{0, 1, 2, 3}, {0, 4, 2, 5}}),
                         doctest::Contains("StrongRegularity"), Error);
}

TEST_CASE("disconnected color classes are rejected") {
    std::vector<VertexInput> v = {
        {{0, 0}, Color::Black, true},  {{1, 0}, Color::White, true},
        {{1, 1}, Color::Black, true},  {{0, 1}, Color::White, true},
        {{5, 0}, Color::Black, true},  {{6, 0}, Color::White, true},
        {{6, 1}, Color::Black, true},  {{5, 1}, Color::White, true},
    };
    CHECK_THROWS_WITH_AS(build_quadgraph(v, {{0, 1, 2, 3}, {4, 5, 6, 7}}),
                         doctest::Contains("DisconnectedColorClass"), Error);
}

TEST_CASE("fig3 fixture builds with interior center") {
    LatticeSpec s;
    s.family = LatticeFamily::Fixture;
    s.fixture = "fig3";
    QuadGraph g = generate(s);
    CHECK(g.vertex_count() == 9);
    CHECK(g.quad_count() == 4);
    CHECK(g.is_interior(0));
    for (int v = 1; v < 9; ++v) CHECK(g.is_boundary(v));
    CHECK(g.ar_Fv(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(g.is_parallelogram_graph());
}

TEST_CASE("face weights against an independent shoelace oracle") {
    QuadGraph g = generate(skew_spec(4, 4));
    // oracle: twice the shoelace area of the midpoint polygon around a vertex
    auto oracle = [&](int v) {
        std::vector<Complex> poly;
        for (const auto& se : g.star(v)) {
            const Quad& q = g.quad(se.quad);
            // midpoint of the edge (v, next corner), walking ccw
            poly.push_back(0.5 * (g.pos(v) + g.pos(q.v[(se.corner + 1) % 4])));
        }
        return 2.0 * signed_shoelace_area(poly);
    };
    int checked = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.is_boundary(v)) continue;
        CHECK(g.face_weight_vertex(v) == doctest::Approx(oracle(v)).epsilon(1e-12));
        CHECK(g.face_weight_vertex(v) == doctest::Approx(1.0).epsilon(1e-12));
        ++checked;
    }
    CHECK(checked == 9);
    CHECK(g.face_weight_quad(0) == doctest::Approx(1.0).epsilon(1e-13));
    QuadGraph sq = unit_square();
    CHECK_THROWS_WITH_AS(sq.face_weight_vertex(0), doctest::Contains("BoundaryVertexFace"), Error);
}

TEST_CASE("strips of a skew lattice") {
    QuadGraph g = generate(skew_spec(5, 3));
    const auto& strips = g.strips();
    CHECK(static_cast<int>(strips.size()) == 8);  // m + n
    // every interior edge lies in exactly one strip
    std::vector<int> edgeCount(g.lambda_edge_count(), 0);
    for (const auto& st : strips) {
        CHECK(st.common_parallel != Complex(0, 0));
        for (int e : st.crossed_edges) edgeCount[e]++;
        for (int e : st.crossed_edges) {
            auto [a, b] = g.lambda_edge(e);
            Complex d = g.pos(b) - g.pos(a);
            CHECK(std::min(std::abs(d - st.common_parallel), std::abs(d + st.common_parallel)) <
                  1e-12);
        }
    }
    for (int e = 0; e < g.lambda_edge_count(); ++e) CHECK(edgeCount[e] == 1);

    QuadGraph sq = unit_square();
    CHECK(sq.strips().size() == 2);
    CHECK(sq.strips()[0].quads.size() == 1);
}

TEST_CASE("de Bruijn strips cross pairwise at most once") {
    LatticeSpec s;
    s.family = LatticeFamily::DeBruijnMultigrid;
    s.directions = {{1.0, 0.0}, {0.5, 0.9}, {-0.6, 0.8}};
    s.radius = 6.0;
    s.seed = 7;
    QuadGraph g = generate(s);
    CHECK(g.is_parallelogram_graph());
    const auto& strips = g.strips();
    // each quad is the crossing of exactly two strips
    std::vector<int> quadCount(g.quad_count(), 0);
    for (const auto& st : strips)
        for (int q : st.quads) quadCount[q]++;
    for (int q = 0; q < g.quad_count(); ++q) CHECK(quadCount[q] == 2);
    // oracle: pairwise shared-quad count never exceeds one
    std::vector<std::vector<int>> stripOf(g.quad_count());
    for (size_t i = 0; i < strips.size(); ++i)
        for (int q : strips[i].quads) stripOf[q].push_back(static_cast<int>(i));
    std::map<std::pair<int, int>, int> pairCount;
    for (int q = 0; q < g.quad_count(); ++q) {
        REQUIRE(stripOf[q].size() == 2);
        pairCount[{stripOf[q][0], stripOf[q][1]}]++;
    }
    for (const auto& [p, c] : pairCount) CHECK(c == 1);
}

TEST_CASE("cone paths") {
    LatticeSpec s = skew_spec(6, 6);
    QuadGraph g = generate(s);
    int v0 = skew_vertex_id(s, 2, 2);

    SUBCASE("empty path to itself") {
        auto cp = g.cone_path(v0, v0);
        CHECK(cp.vertices.size() == 1);
        CHECK(cp.edges.empty());
    }
    SUBCASE("monotone lattice path") {
        int v = skew_vertex_id(s, 4, 3);
        auto cp = g.cone_path(v0, v);
        REQUIRE(cp.edges.size() == 3);
        int ones = 0, is = 0;
        for (Complex e : cp.edges) {
            if (std::abs(e - Complex(1, 0)) < 1e-12) ++ones;
            if (std::abs(e - Complex(0, 1)) < 1e-12) ++is;
            double a = std::arg(e);
            CHECK(a >= -1e-12);
            CHECK(a <= kPi / 2 + 1e-12);
        }
        CHECK(ones == 2);
        CHECK(is == 1);
    }
    SUBCASE("coverage of a de Bruijn patch") {
        LatticeSpec db;
        db.family = LatticeFamily::DeBruijnMultigrid;
        db.directions = {{1.0, 0.0}, {0.45, 0.85}, {-0.55, 0.75}};
        db.radius = 5.5;
        db.seed = 11;
        QuadGraph dg = generate(db);
        REQUIRE(dg.quad_count() <= 500);
        QuadGraph::ConePathIndex idx(dg, 0, 0.0);
        for (int v = 0; v < dg.vertex_count(); ++v) {
            REQUIRE(idx.reachable(v));
            auto cp = idx.path_to(v);
            CHECK(cp.max_relative_angle < kPi);
        }
    }
}

TEST_CASE("boundary contour of the whole graph is a single loop") {
    QuadGraph g = generate(skew_spec(4, 3));
    std::vector<int> all(g.quad_count());
    for (int q = 0; q < g.quad_count(); ++q) all[q] = q;
    MedialPath p = g.boundary_contour(all);
    // closed chain
    for (size_t i = 0; i < p.size(); ++i)
        CHECK(g.medial_head(p[i]) == g.medial_tail(p[(i + 1) % p.size()]));
    // displacement sum vanishes
    Complex s{0, 0};
    for (const auto& e : p) s += g.medial_displacement(e);
    CHECK(std::abs(s) < 1e-13);
}
