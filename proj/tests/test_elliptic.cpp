#include <doctest.h>

#include <cmath>
#include <random>

#include "quadcalc/elliptic.hpp"
#include "quadcalc/lattices.hpp"
#include "quadcalc/operators.hpp"

using namespace quadcalc;

namespace {

QuadGraph skew(int m, int n, Complex e1 = {1, 0}, Complex e2 = {0.3, 1.0}) {
    LatticeSpec s;
    s.m = m;
    s.n = n;
    s.e1 = e1;
    s.e2 = e2;
    return generate(s);
}

DirichletProblem boundary_from(const QuadGraph& g, const std::function<Complex(Complex)>& fn) {
    DirichletProblem p;
    p.boundary.assign(g.vertex_count(), Complex(0, 0));
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_boundary(v)) p.boundary[v] = fn(g.pos(v));
    return p;
}

} // namespace

TEST_CASE("dirichlet solver reproduces harmonic data") {
    QuadGraph g = skew(8, 8);
    SUBCASE("constants") {
        DirichletProblem p = boundary_from(g, [](Complex) { return Complex(7, 0); });
        VertexField f = solve_dirichlet(g, p);
        for (int v = 0; v < g.vertex_count(); ++v) CHECK(std::abs(f[v] - 7.0) < 1e-11);
    }
    SUBCASE("affine functions") {
        auto affine = [](Complex z) { return Complex(2.0 * z.real() - 0.7 * z.imag() + 0.3, 0); };
        DirichletProblem p = boundary_from(g, affine);
        VertexField f = solve_dirichlet(g, p);
        for (int v = 0; v < g.vertex_count(); ++v)
            CHECK(std::abs(f[v] - affine(g.pos(v))) < 1e-10);
    }
    SUBCASE("Re z^2 on a parallelogram-graph") {
        auto fn = [](Complex z) { return Complex((z * z).real(), 0); };
        DirichletProblem p = boundary_from(g, fn);
        VertexField f = solve_dirichlet(g, p);
        for (int v = 0; v < g.vertex_count(); ++v)
            CHECK(std::abs(f[v] - fn(g.pos(v))) < 1e-9);
    }
    SUBCASE("interior laplacian vanishes and boundary matches exactly") {
        std::mt19937_64 rng(4);
        DirichletProblem p;
        p.boundary.assign(g.vertex_count(), Complex(0, 0));
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_boundary(v))
                p.boundary[v] = Complex(double(rng() % 1000) / 500 - 1, double(rng() % 1000) / 500 - 1);
        SolveDiagnostics diag;
        VertexField f = solve_dirichlet(g, p, &diag);
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_boundary(v)) CHECK(f[v] == p.boundary[v]);
        VertexField lap = laplacian(g, f);
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) CHECK(std::abs(lap[v]) < 1e-9);
        CHECK(diag.method == "ldlt");
    }
    SUBCASE("direct and iterative solves agree") {
        auto fn = [](Complex z) { return Complex((z * z).real() + z.imag(), 0); };
        DirichletProblem p = boundary_from(g, fn);
        VertexField a = solve_dirichlet(g, p);
        SolveOptions opt;
        opt.force_iterative = true;
        std::mt19937_64 rng(99);
        std::vector<double> guess;
        for (int i = 0; i < g.vertex_count(); ++i) guess.push_back(double(rng() % 100) / 50 - 1);
        opt.initial_guess = guess;
        SolveDiagnostics diag;
        VertexField b = solve_dirichlet(g, p, &diag, opt);
        CHECK(diag.method == "cg");
        for (int v = 0; v < g.vertex_count(); ++v) CHECK(std::abs(a[v] - b[v]) < 1e-10);
    }
}

TEST_CASE("energy minimizer properties") {
    QuadGraph g = skew(6, 6);
    auto fn = [](Complex z) { return Complex((z * z).real() - z.imag() * 0.4, 0); };
    DirichletProblem p = boundary_from(g, fn);
    VertexField f = solve_dirichlet(g, p);
    double e0 = dirichlet_energy(g, f);
    std::mt19937_64 rng(8);
    SUBCASE("perturbations only increase the energy") {
        for (int k = 0; k < 100; ++k) {
            VertexField pert = f;
            for (int v = 0; v < g.vertex_count(); ++v)
                if (g.is_interior(v))
                    pert.v[v] += (k % 2 ? 1e-3 : -1e-3) * (double(rng() % 1000) / 500 - 1);
            CHECK(dirichlet_energy(g, pert) >= e0 - 1e-12 * std::max(1.0, e0));
        }
    }
    SUBCASE("finite-difference energy gradient matches the laplacian") {
        std::mt19937_64 r2(12);
        VertexField h(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v)
            h[v] = Complex(double(r2() % 1000) / 500 - 1, 0);
        VertexField lap = laplacian(g, h);
        int tested = 0;
        for (int v = 0; v < g.vertex_count() && tested < 12; ++v) {
            if (!g.is_interior(v)) continue;
            double step = 1e-5;
            VertexField hp = h, hm = h;
            hp.v[v] += step;
            hm.v[v] -= step;
            double grad = (dirichlet_energy_explicit(g, hp) - dirichlet_energy_explicit(g, hm)) /
                          (2.0 * step);
            double expect = -2.0 * g.ar_Fv(v) * lap[v].real();
            CHECK(grad == doctest::Approx(expect).epsilon(1e-6));
            ++tested;
        }
        CHECK(tested == 12);
    }
}

TEST_CASE("in-domain Green's function") {
    QuadGraph g = skew(3, 3, {1, 0}, {0.25, 1.05});
    // center vertex of the 3x3 patch
    int v0 = -1;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) {
            bool allInterior = true;
            for (auto [w, e] : g.vertex_edges(v)) allInterior &= true;
            v0 = v;
        }
    // pick the unique fully-central vertex: the one with 4 interior neighbors
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (!g.is_interior(v)) continue;
        int interiorNbrs = 0;
        for (auto [w, e] : g.vertex_edges(v)) interiorNbrs += g.is_interior(w);
        if (interiorNbrs == 0) v0 = v;  // 3x3: all neighbors are boundary
    }
    REQUIRE(v0 >= 0);
    VertexField G = green_in_domain(g, v0);
    SUBCASE("boundary values vanish and the defining equation holds") {
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_boundary(v)) CHECK(std::abs(G[v]) < 1e-14);
        VertexField lap = laplacian(g, G);
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (!g.is_interior(v)) continue;
            double expect = v == v0 ? 1.0 / (4.0 * g.ar_Fv(v0)) : 0.0;
            CHECK(std::abs(lap[v] - expect) < 1e-10);
        }
    }
    SUBCASE("dense oracle on the tiny system") {
        // brute force: solve the stencil equations by Gaussian elimination
        std::vector<int> interior;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) interior.push_back(v);
        int n = static_cast<int>(interior.size());
        REQUIRE(n <= 9);
        // build rows: laplacian of the unknown vector must equal the delta RHS
        std::vector<std::vector<double>> A(n, std::vector<double>(n + 1, 0.0));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                VertexField e(g.vertex_count());
                e[interior[j]] = 1.0;
                A[i][j] = laplacian_at(g, e, interior[i]).real();
            }
            A[i][n] = interior[i] == v0 ? 1.0 / (4.0 * g.ar_Fv(v0)) : 0.0;
        }
        for (int c = 0; c < n; ++c) {
            int piv = c;
            for (int r = c; r < n; ++r)
                if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
            std::swap(A[c], A[piv]);
            for (int r = 0; r < n; ++r) {
                if (r == c) continue;
                double m = A[r][c] / A[c][c];
                for (int k = c; k <= n; ++k) A[r][k] -= m * A[c][k];
            }
        }
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(G[interior[i]].real() - A[i][n] / A[i][i]) < 1e-11);
    }
    SUBCASE("boundary basepoint is rejected") {
        CHECK_THROWS_WITH_AS(green_in_domain(g, 0), doctest::Contains("BoundaryVertexRequested"),
                             Error);
    }
}

TEST_CASE("in-domain Green via free Green minus harmonic correction") {
    QuadGraph g = skew(6, 6, {1, 0}, {0.0, 1.0});
    int v0 = -1;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (!g.is_interior(v)) continue;
        if (std::abs(g.pos(v) - Complex(3, 3)) < 0.1) v0 = v;
    }
    REQUIRE(v0 >= 0);
    VertexField direct = green_in_domain(g, v0);
    // route 2: any particular solution of the delta problem, corrected by the
    // harmonic extension of its boundary values
    VertexField rhs(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) rhs[v] = v == v0 ? 1.0 / (4.0 * g.ar_Fv(v0)) : 0.0;
    VertexField part = solve_preimage_laplace(g, rhs);
    DirichletProblem p;
    p.boundary.assign(g.vertex_count(), Complex(0, 0));
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_boundary(v)) p.boundary[v] = part[v];
    VertexField corr = solve_dirichlet(g, p);
    for (int v = 0; v < g.vertex_count(); ++v)
        CHECK(std::abs(direct[v] - (part[v] - corr[v])) < 1e-9);
}

TEST_CASE("preimage solvers") {
    QuadGraph g = skew(6, 5);
    SUBCASE("d_lambda preimage of the constant 1") {
        FaceField h(g.quad_count(), Complex(1, 0));
        VertexField f = solve_preimage_dlambda(g, h);
        FaceField df, dfb;
        d_lambda(g, f, df, dfb);
        for (int q = 0; q < g.quad_count(); ++q) CHECK(std::abs(df[q] - 1.0) < 1e-9);
    }
    SUBCASE("dbar_lambda preimage of Qbar") {
        FaceField h = sample_face(g, [](Complex z) { return std::conj(z); });
        VertexField f = solve_preimage_dlambda(g, h, true);
        FaceField df, dfb;
        d_lambda(g, f, df, dfb);
        for (int q = 0; q < g.quad_count(); ++q) CHECK(std::abs(dfb[q] - h[q]) < 1e-9);
    }
    SUBCASE("d_diamond and dbar_diamond preimages") {
        std::mt19937_64 rng(77);
        VertexField t(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v))
                t[v] = Complex(double(rng() % 1000) / 500 - 1, double(rng() % 1000) / 500 - 1);
        FaceField h1 = solve_preimage_ddiamond(g, t, false);
        VertexField dh, dhb;
        d_diamond(g, h1, dh, dhb);
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) CHECK(std::abs(dh[v] - t[v]) < 1e-9);
        FaceField h2 = solve_preimage_ddiamond(g, t, true);
        d_diamond(g, h2, dh, dhb);
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) CHECK(std::abs(dhb[v] - t[v]) < 1e-9);
    }
    SUBCASE("laplace preimage with a real target stays real") {
        VertexField t(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) t[v] = std::cos(g.pos(v).real());
        VertexField f = solve_preimage_laplace(g, t);
        VertexField lap = laplacian(g, f);
        for (int v = 0; v < g.vertex_count(); ++v) {
            CHECK(std::abs(f[v].imag()) < 1e-13);
            if (g.is_interior(v)) CHECK(std::abs(lap[v] - t[v]) < 1e-9);
        }
    }
    SUBCASE("spike target reproduces the in-domain Green after boundary correction") {
        int v0 = g.vertex_count() / 2;
        while (!g.is_interior(v0)) ++v0;
        VertexField t(g.vertex_count());
        t[v0] = 1.0 / (4.0 * g.ar_Fv(v0));
        VertexField part = solve_preimage_laplace(g, t);
        DirichletProblem p;
        p.boundary.assign(g.vertex_count(), Complex(0, 0));
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_boundary(v)) p.boundary[v] = part[v];
        VertexField corr = solve_dirichlet(g, p);
        VertexField direct = green_in_domain(g, v0);
        for (int v = 0; v < g.vertex_count(); ++v)
            CHECK(std::abs(direct[v] - (part[v] - corr[v])) < 1e-9);
    }
}
