#include <doctest.h>

#include <cmath>
#include <random>

#include "quadcalc/forms.hpp"
#include "quadcalc/lattices.hpp"
#include "quadcalc/operators.hpp"

using namespace quadcalc;

namespace {

const Complex I{0, 1};

QuadGraph unit_square() {
    std::vector<VertexInput> v = {
        {{0, 0}, Color::Black, true},
        {{1, 0}, Color::White, true},
        {{1, 1}, Color::Black, true},
        {{0, 1}, Color::White, true},
    };
    return build_quadgraph(v, {{0, 1, 2, 3}});
}

QuadGraph skew(int m, int n) {
    LatticeSpec s;
    s.m = m;
    s.n = n;
    return generate(s);
}

} // namespace

TEST_CASE("dz integrates to the displacement and closes on elementary cycles") {
    QuadGraph g = skew(4, 4);
    OneForm dz = form_dz(g);
    for (int q = 0; q < g.quad_count(); ++q)
        CHECK(std::abs(integrate_one(g, dz, g.cycle_PQ(q))) < 1e-14);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) CHECK(std::abs(integrate_one(g, dz, g.cycle_Pv(v))) < 1e-14);

    QuadGraph sq = unit_square();
    OneForm dzs = form_dz(sq);
    // edge [Q, v0] oriented from the midpoint of (v0, w-) to the midpoint of
    // (v0, w+): displacement (i - 1)/2
    CHECK(std::abs(dzs.at(MedialEdge(0, true)) - Complex(-0.5, 0.5)) < 1e-15);
}

TEST_CASE("df of simple fields") {
    QuadGraph g = skew(5, 4);
    SUBCASE("biconstant gives the zero form") {
        VertexField f(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v)
            f[v] = g.color(v) == Color::Black ? Complex(2, 1) : Complex(-1, 3);
        OneForm df = exterior_d(g, f);
        for (int e = 0; e < g.medial_edge_count(); ++e) CHECK(std::abs(df.val[e]) < 1e-15);
    }
    SUBCASE("identity field gives dz edge by edge") {
        VertexField f = sample_vertex(g, [](Complex z) { return z; });
        OneForm df = exterior_d(g, f);
        OneForm dz = form_dz(g);
        for (int e = 0; e < g.medial_edge_count(); ++e)
            CHECK(std::abs(df.val[e] - dz.val[e]) < 1e-14);
    }
    SUBCASE("df of v^2 is closed on a parallelogram-graph") {
        VertexField f = sample_vertex(g, [](Complex z) { return z * z; });
        OneForm df = exterior_d(g, f);
        for (int q = 0; q < g.quad_count(); ++q)
            CHECK(std::abs(integrate_one(g, df, g.cycle_PQ(q))) < 1e-13);
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v))
                CHECK(std::abs(integrate_one(g, df, g.cycle_Pv(v))) < 1e-13);
    }
}

TEST_CASE("d of zbar dz on the unit square quad") {
    QuadGraph g = unit_square();
    // omega = zbar dz with zbar sampled at the lambda vertex of each edge
    VertexField f = sample_vertex(g, [](Complex z) { return std::conj(z); });
    OneForm w = product(g, f, form_dz(g));
    // oracle: direct boundary sum from raw positions, no forms machinery
    Complex oracle{0, 0};
    for (int c = 0; c < 4; ++c) {
        Complex prev = g.quad_vertex_pos(0, c + 3), next = g.quad_vertex_pos(0, c + 1);
        oracle += std::conj(g.quad_vertex_pos(0, c)) * 0.5 * (next - prev);
    }
    TwoForm dw = exterior_d(g, w);
    CHECK(std::abs(dw.onQuad[0] - oracle) < 1e-14);
    // equals 2i ar(F_Q) dbar_lambda(zbar) = 2i ar(F_Q)
    CHECK(std::abs(dw.onQuad[0] - Complex(0, 2) * g.geom(0).ar_FQ) < 1e-13);
}

TEST_CASE("decompose_diamond recovers p and q") {
    QuadGraph g = skew(4, 3);
    SUBCASE("dz and dzbar") {
        auto [p1, q1] = decompose_diamond(g, form_dz(g), 2);
        CHECK(std::abs(p1 - 1.0) < 1e-14);
        CHECK(std::abs(q1) < 1e-14);
        auto [p2, q2] = decompose_diamond(g, form_dzbar(g), 2);
        CHECK(std::abs(p2) < 1e-14);
        CHECK(std::abs(q2 - 1.0) < 1e-14);
    }
    SUBCASE("df of v^2 has p = 2 center") {
        VertexField f = sample_vertex(g, [](Complex z) { return z * z; });
        OneForm df = exterior_d(g, f);
        for (int q = 0; q < g.quad_count(); ++q) {
            auto [p, qq] = decompose_diamond(g, df, q);
            CHECK(std::abs(p - 2.0 * g.geom(q).center) < 1e-13);
            CHECK(std::abs(qq) < 1e-13);
        }
    }
    SUBCASE("reconstruction matches on all four edges") {
        std::mt19937_64 rng(5);
        OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
        std::vector<Complex> ps(g.quad_count()), qs(g.quad_count());
        for (int q = 0; q < g.quad_count(); ++q) {
            ps[q] = Complex(double(rng() % 100) / 50 - 1, double(rng() % 100) / 50 - 1);
            qs[q] = Complex(double(rng() % 100) / 50 - 1, double(rng() % 100) / 50 - 1);
            for (int c = 0; c < 4; ++c) {
                Complex e = g.medial_displacement(MedialEdge(4 * q + c, false));
                w.val[4 * q + c] = ps[q] * e + qs[q] * std::conj(e);
            }
        }
        for (int q = 0; q < g.quad_count(); ++q) {
            auto [p, qq] = decompose_diamond(g, w, q);
            for (int c = 0; c < 4; ++c) {
                Complex e = g.medial_displacement(MedialEdge(4 * q + c, false));
                CHECK(std::abs(p * e + qq * std::conj(e) - w.val[4 * q + c]) < 1e-12);
            }
        }
    }
    SUBCASE("non-diamond input is rejected") {
        OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
        for (int e = 0; e < g.medial_edge_count(); ++e) w.val[e] = double(e % 7);
        CHECK_THROWS_WITH_AS(decompose_diamond(g, w, 1), doctest::Contains("NotTypeDiamond"),
                             Error);
    }
}

TEST_CASE("wedge product") {
    QuadGraph g = skew(4, 4);
    OneForm dz = form_dz(g);
    OneForm dzb = form_dzbar(g);
    SUBCASE("dz wedge dzbar is Omega_Diamond") {
        TwoForm w = wedge(g, dz, dzb);
        TwoForm om = omega_diamond(g);
        for (int q = 0; q < g.quad_count(); ++q)
            CHECK(std::abs(w.onQuad[q] - om.onQuad[q]) < 1e-13);
    }
    SUBCASE("wedge of a form with itself vanishes") {
        VertexField f = sample_vertex(g, [](Complex z) { return z * z + 2.0 * z; });
        OneForm df = exterior_d(g, f);
        TwoForm w = wedge(g, df, df);
        for (int q = 0; q < g.quad_count(); ++q) CHECK(std::abs(w.onQuad[q]) < 1e-13);
    }
    SUBCASE("df wedge dg for f=v, g=vbar") {
        VertexField f = sample_vertex(g, [](Complex z) { return z; });
        VertexField h = sample_vertex(g, [](Complex z) { return std::conj(z); });
        TwoForm w = wedge(g, exterior_d(g, f), exterior_d(g, h));
        TwoForm om = omega_diamond(g);
        for (int q = 0; q < g.quad_count(); ++q)
            CHECK(std::abs(w.onQuad[q] - om.onQuad[q]) < 1e-13);
    }
    SUBCASE("e/e* evaluation formula") {
        VertexField f = sample_vertex(g, [](Complex z) { return z * z; });
        VertexField h = sample_vertex(g, [](Complex z) { return std::conj(z) + z * z; });
        OneForm a = exterior_d(g, f), b = exterior_d(g, h);
        TwoForm w = wedge(g, a, b);
        for (int q = 0; q < g.quad_count(); ++q) {
            MedialEdge e(4 * q + 1, false), es(4 * q + 2, false);
            Complex rhs = 2.0 * a.at(e) * b.at(es) - 2.0 * a.at(es) * b.at(e);
            CHECK(std::abs(w.onQuad[q] - rhs) < 1e-13);
        }
    }
}

TEST_CASE("hodge star basics") {
    QuadGraph g = skew(3, 5);
    OneForm dz = form_dz(g);
    OneForm sdz = hodge(g, dz);
    for (int e = 0; e < g.medial_edge_count(); ++e)
        CHECK(std::abs(sdz.val[e] - (-I) * dz.val[e]) < 1e-14);

    // orthogonal diagonals: int_e star w = -(|e|/|e*|) int_{e*} w
    VertexField f = sample_vertex(g, [](Complex z) { return z * z - 3.0 * std::conj(z); });
    OneForm w = exterior_d(g, f);
    OneForm sw = hodge(g, w);
    for (int q = 0; q < g.quad_count(); ++q) {
        MedialEdge e(4 * q + 1, false), es(4 * q + 2, false);
        double le = std::abs(g.medial_displacement(e));
        double les = std::abs(g.medial_displacement(es));
        CHECK(std::abs(sw.at(e) + le / les * w.at(es)) < 1e-13);
    }
}

TEST_CASE("scalar products") {
    QuadGraph g = skew(4, 4);
    SUBCASE("constant field against the vertex areas") {
        VertexField one(g.vertex_count(), Complex(1, 0));
        double sum = 0;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) sum += g.ar_Fv(v);
        CHECK(scalar_product(g, one, one).real() == doctest::Approx(sum).epsilon(1e-14));
    }
    SUBCASE("<dz, dz> on the unit square quad is 2") {
        QuadGraph sq = unit_square();
        Complex ip = scalar_product(sq, form_dz(sq), form_dz(sq));
        CHECK(std::abs(ip - Complex(2, 0)) < 1e-14);
    }
    SUBCASE("Hermitian symmetry") {
        std::mt19937_64 rng(3);
        auto rnd = [&] { return Complex(double(rng() % 1000) / 500 - 1, double(rng() % 1000) / 500 - 1); };
        VertexField a(g.vertex_count()), b(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v) {
            a[v] = rnd();
            b[v] = rnd();
        }
        Complex ab = scalar_product(g, a, b);
        Complex ba = scalar_product(g, b, a);
        CHECK(std::abs(ab - std::conj(ba)) < 1e-13);
        CHECK(scalar_product(g, a, a).real() > 0);
        CHECK(std::abs(scalar_product(g, a, a).imag()) < 1e-13);
    }
}

TEST_CASE("codifferential adjointness oracle") {
    QuadGraph g = skew(5, 5);
    // <df, dz> - <f, delta dz> = 0 for compactly supported f, by a direct
    // double-sum oracle: delta dz vanishes identically
    OneForm dz = form_dz(g);
    VertexField ddz = codifferential(g, dz);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) CHECK(std::abs(ddz[v]) < 1e-14);

    std::mt19937_64 rng(17);
    VertexField f(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        bool nearB = g.is_boundary(v);
        for (auto [w, e] : g.vertex_edges(v)) nearB = nearB || g.is_boundary(w);
        f[v] = nearB ? Complex(0, 0)
                     : Complex(double(rng() % 1000) / 500 - 1, double(rng() % 1000) / 500 - 1);
    }
    OneForm df = exterior_d(g, f);
    Complex lhs = scalar_product(g, df, dz);
    Complex rhs = scalar_product(g, f, ddz);
    CHECK(std::abs(lhs - rhs) < 1e-11);

    // delta of the zero form is zero
    OneForm zero(g.medial_edge_count(), OneFormType::TypeDiamond);
    VertexField dz0 = codifferential(g, zero);
    for (int v = 0; v < g.vertex_count(); ++v) CHECK(std::abs(dz0[v]) < 1e-15);

    // <dw, Omega> = <w, delta Omega> for compact type-diamond w
    TwoForm om(g, TwoFormType::TypeLambda);
    std::vector<int> depth;
    {
        // zero the two outermost rings so the pairing has no boundary terms
        depth.assign(g.vertex_count(), 0);
        for (int v = 0; v < g.vertex_count(); ++v) depth[v] = g.is_boundary(v) ? 0 : 2;
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (!g.is_interior(v)) continue;
        bool deep = true;
        for (auto [w, e] : g.vertex_edges(v))
            if (g.is_boundary(w)) deep = false;
        om.onVertex[v] = deep ? Complex(double(rng() % 100) / 50 - 1, 0.3) : Complex(0, 0);
    }
    OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
    for (int q = 0; q < g.quad_count(); ++q) {
        Complex pc(double(rng() % 100) / 50 - 1, 0.1), qc(0.2, double(rng() % 100) / 50 - 1);
        bool nearB = false;
        for (int c = 0; c < 4; ++c)
            if (g.is_boundary(g.quad(q).v[c])) nearB = true;
        if (nearB) pc = qc = 0;
        for (int c = 0; c < 4; ++c) {
            Complex e = g.medial_displacement(MedialEdge(4 * q + c, false));
            w.val[4 * q + c] = pc * e + qc * std::conj(e);
        }
    }
    TwoForm dw = exterior_d(g, w);
    dw.type = TwoFormType::TypeLambda;  // type-diamond w: dw vanishes on F_Q
    Complex l2 = scalar_product(g, dw, om);
    OneForm dom = codifferential(g, om);
    Complex r2 = scalar_product(g, w, dom);
    CHECK(std::abs(l2 - r2) < 1e-11);
}

TEST_CASE("csv export is deterministic") {
    QuadGraph g = unit_square();
    OneForm dz = form_dz(g);
    std::string a = one_form_to_csv(dz);
    std::string b = one_form_to_csv(dz);
    CHECK(a == b);
    CHECK(a.substr(0, 14) == "edge_id,re,im\n");
}
