#include "quadcalc/elliptic.hpp"

#include <Eigen/Sparse>
#include <cmath>

#include "quadcalc/operators.hpp"

namespace quadcalc {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Energy quadratic form E(f) = f^T M f over all vertices, assembled per quad
/// so symmetry is structural. The stencil then satisfies
/// laplacian f(v) = -(M f)_v / ar(F_v) at interior vertices.
struct EnergyForm {
    std::vector<int> interiorIndex;  // vertex -> unknown slot, -1 for boundary
    std::vector<int> interiorVerts;
    SpMat Mii, Mib;                  // interior-interior / interior-boundary blocks
    std::vector<int> boundaryIndex;
    std::vector<int> boundaryVerts;

    explicit EnergyForm(const QuadGraph& g) {
        const int nv = g.vertex_count();
        interiorIndex.assign(nv, -1);
        boundaryIndex.assign(nv, -1);
        for (int v = 0; v < nv; ++v) {
            if (g.is_interior(v)) {
                interiorIndex[v] = static_cast<int>(interiorVerts.size());
                interiorVerts.push_back(v);
            } else {
                boundaryIndex[v] = static_cast<int>(boundaryVerts.size());
                boundaryVerts.push_back(v);
            }
        }
        if (interiorVerts.empty()) raise(ErrorCode::EmptyInterior, "no interior vertices");
        std::vector<Triplet> tii, tib;
        auto add = [&](int a, int b, double w) {
            int ia = interiorIndex[a];
            if (ia < 0) return;  // rows for boundary vertices are not needed
            if (interiorIndex[b] >= 0)
                tii.emplace_back(ia, interiorIndex[b], w);
            else
                tib.emplace_back(ia, boundaryIndex[b], w);
        };
        for (int q = 0; q < g.quad_count(); ++q) {
            const Quad& quad = g.quad(q);
            Complex rho = g.geom(q).rho;
            double A = std::norm(rho) / (2.0 * rho.real());
            double B = 1.0 / (2.0 * rho.real());
            double C = rho.imag() / rho.real();
            int bm = quad.v[0], wm = quad.v[1], bp = quad.v[2], wp = quad.v[3];
            // A (f_bp - f_bm)^2
            add(bp, bp, A); add(bm, bm, A); add(bp, bm, -A); add(bm, bp, -A);
            // B (f_wp - f_wm)^2
            add(wp, wp, B); add(wm, wm, B); add(wp, wm, -B); add(wm, wp, -B);
            // C (f_bp - f_bm)(f_wp - f_wm)
            double h = 0.5 * C;
            add(bp, wp, h); add(wp, bp, h); add(bm, wm, h); add(wm, bm, h);
            add(bp, wm, -h); add(wm, bp, -h); add(bm, wp, -h); add(wp, bm, -h);
        }
        int ni = static_cast<int>(interiorVerts.size());
        int nb = static_cast<int>(boundaryVerts.size());
        Mii.resize(ni, ni);
        Mii.setFromTriplets(tii.begin(), tii.end());
        Mib.resize(ni, nb);
        Mib.setFromTriplets(tib.begin(), tib.end());
    }
};

Eigen::VectorXd solve_spd(const EnergyForm& ef, const Eigen::VectorXd& rhs, double tol,
                          SolveDiagnostics* diag, const SolveOptions& opt) {
    const int n = static_cast<int>(rhs.size());
    Eigen::VectorXd x;
    if (!opt.force_iterative && n <= opt.direct_limit) {
        Eigen::SimplicialLDLT<SpMat> solver(ef.Mii);
        if (solver.info() != Eigen::Success)
            raise(ErrorCode::SolverDivergence, "factorization failed");
        x = solver.solve(rhs);
        if (diag) {
            diag->method = "ldlt";
            diag->iterations = 0;
        }
    } else {
        Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg(ef.Mii);
        cg.setTolerance(1e-12);
        cg.setMaxIterations(std::max(4000, 40 * n));
        if (opt.initial_guess) {
            Eigen::VectorXd guess = Eigen::VectorXd::Zero(n);
            for (int i = 0; i < n && i < static_cast<int>(opt.initial_guess->size()); ++i)
                guess[i] = (*opt.initial_guess)[i];
            x = cg.solveWithGuess(rhs, guess);
        } else {
            x = cg.solve(rhs);
        }
        if (diag) {
            diag->method = "cg";
            diag->iterations = static_cast<int>(cg.iterations());
        }
        if (cg.info() != Eigen::Success)
            raise(ErrorCode::SolverDivergence,
                  "conjugate gradients did not reach the residual target");
    }
    double res = (ef.Mii * x - rhs).lpNorm<Eigen::Infinity>();
    if (diag) {
        diag->residual = std::max(diag->residual, res);
        diag->unknowns = n;
    }
    double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
    if (res > std::max(tol, 1e-11) * scale)
        raise(ErrorCode::SolverDivergence, "linear residual " + std::to_string(res));
    return x;
}

} // namespace

VertexField solve_dirichlet(const QuadGraph& g, const DirichletProblem& p, SolveDiagnostics* diag,
                            const SolveOptions& opt) {
    if (static_cast<int>(p.boundary.size()) != g.vertex_count())
        raise(ErrorCode::MissingValues, "boundary data must be indexed by vertex id");
    EnergyForm ef(g);
    const int nb = static_cast<int>(ef.boundaryVerts.size());
    VertexField out(g.vertex_count());
    for (int part = 0; part < 2; ++part) {
        Eigen::VectorXd fb(nb);
        for (int i = 0; i < nb; ++i) {
            Complex z = p.boundary[ef.boundaryVerts[i]];
            fb[i] = part == 0 ? z.real() : z.imag();
        }
        if (part == 1 && fb.lpNorm<Eigen::Infinity>() == 0.0) break;
        Eigen::VectorXd rhs = -(ef.Mib * fb);
        Eigen::VectorXd x = solve_spd(ef, rhs, p.tolerance, diag, opt);
        for (size_t i = 0; i < ef.interiorVerts.size(); ++i) {
            Complex& o = out.v[ef.interiorVerts[i]];
            o = part == 0 ? Complex(x[i], 0) : Complex(o.real(), x[i]);
        }
        for (int i = 0; i < nb; ++i) {
            Complex& o = out.v[ef.boundaryVerts[i]];
            o = part == 0 ? Complex(fb[i], 0) : Complex(o.real(), fb[i]);
        }
    }
    return out;
}

VertexField green_in_domain(const QuadGraph& g, int v0, double tol, SolveDiagnostics* diag) {
    if (g.is_boundary(v0))
        raise(ErrorCode::BoundaryVertexRequested, "Green basepoint must be interior");
    EnergyForm ef(g);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ef.interiorVerts.size());
    rhs[ef.interiorIndex[v0]] = -0.25;
    Eigen::VectorXd x = solve_spd(ef, rhs, tol, diag, {});
    VertexField out(g.vertex_count());
    for (size_t i = 0; i < ef.interiorVerts.size(); ++i)
        out.v[ef.interiorVerts[i]] = Complex(x[i], 0);
    return out;
}

VertexField solve_preimage_laplace(const QuadGraph& g, const VertexField& target, double tol) {
    if (!is_disk_like(g)) raise(ErrorCode::NotDiskLike, "domain must be a combinatorial disk");
    EnergyForm ef(g);
    const int ni = static_cast<int>(ef.interiorVerts.size());
    VertexField out(g.vertex_count());
    for (int part = 0; part < 2; ++part) {
        Eigen::VectorXd rhs(ni);
        bool nonzero = false;
        for (int i = 0; i < ni; ++i) {
            int v = ef.interiorVerts[i];
            double t = part == 0 ? target[v].real() : target[v].imag();
            rhs[i] = -g.ar_Fv(v) * t;
            nonzero = nonzero || t != 0.0;
        }
        if (part == 1 && !nonzero) break;
        Eigen::VectorXd x = solve_spd(ef, rhs, tol, nullptr, {});
        for (int i = 0; i < ni; ++i) {
            Complex& o = out.v[ef.interiorVerts[i]];
            o = part == 0 ? Complex(x[i], 0) : Complex(o.real(), x[i]);
        }
    }
    return out;
}

VertexField solve_preimage_dlambda(const QuadGraph& g, const FaceField& target, bool conjugated,
                                   double tol) {
    if (!is_disk_like(g)) raise(ErrorCode::NotDiskLike, "domain must be a combinatorial disk");
    FaceField h = target;
    if (conjugated)
        for (auto& x : h.v) x = std::conj(x);
    // laplace g1 = 4 dbar_diamond h, then h - d_lambda g1 is holomorphic and
    // integrates to a primitive
    VertexField dh, dhb;
    d_diamond(g, h, dh, dhb);
    VertexField rhs(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) rhs[v] = 4.0 * dhb[v];
    VertexField g1 = solve_preimage_laplace(g, rhs, tol);
    FaceField h1, h1b;
    d_lambda(g, g1, h1, h1b);
    FaceField hol(g.quad_count());
    for (int q = 0; q < g.quad_count(); ++q) hol[q] = h[q] - h1[q];
    int blackBase = -1, whiteBase = -1;
    for (int v = 0; v < g.vertex_count() && (blackBase < 0 || whiteBase < 0); ++v) {
        if (g.color(v) == Color::Black && blackBase < 0) blackBase = v;
        if (g.color(v) == Color::White && whiteBase < 0) whiteBase = v;
    }
    VertexField p = primitive(g, hol, blackBase, whiteBase, {0, 0}, {0, 0}, 1e-6);
    VertexField out(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) out[v] = g1[v] + p[v];
    if (conjugated)
        for (auto& x : out.v) x = std::conj(x);
    FaceField check, checkb;
    d_lambda(g, out, check, checkb);
    const FaceField& got = conjugated ? checkb : check;
    double worst = 0.0, scl = 1.0;
    for (int q = 0; q < g.quad_count(); ++q) {
        worst = std::max(worst, std::abs(got[q] - target[q]));
        scl = std::max(scl, std::abs(target[q]));
    }
    if (worst > std::max(tol, 1e-9) * scl)
        raise(ErrorCode::InconsistentTarget, "preimage residual " + std::to_string(worst));
    return out;
}

FaceField solve_preimage_ddiamond(const QuadGraph& g, const VertexField& target, bool conjugated,
                                  double tol) {
    if (!is_disk_like(g)) raise(ErrorCode::NotDiskLike, "domain must be a combinatorial disk");
    VertexField rhs(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) rhs[v] = 4.0 * target[v];
    VertexField g1 = solve_preimage_laplace(g, rhs, tol);
    FaceField dg, dgb;
    d_lambda(g, g1, dg, dgb);
    // laplacian = 4 d_diamond dbar_lambda = 4 dbar_diamond d_lambda, so the
    // two factorizations serve d_diamond and dbar_diamond respectively
    FaceField out = conjugated ? dg : dgb;
    VertexField ch, chb;
    d_diamond(g, out, ch, chb);
    const VertexField& got = conjugated ? chb : ch;
    double worst = 0.0, scl = 1.0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (!g.is_interior(v)) continue;
        worst = std::max(worst, std::abs(got[v] - target[v]));
        scl = std::max(scl, std::abs(target[v]));
    }
    if (worst > std::max(tol, 1e-9) * scl)
        raise(ErrorCode::InconsistentTarget, "preimage residual " + std::to_string(worst));
    return out;
}

} // namespace quadcalc
