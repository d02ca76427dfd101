#include "quadcalc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <numbers>

#include "quadcalc/operators.hpp"

namespace quadcalc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = 0.577215664901532860606512090082;
const Complex I{0.0, 1.0};

Complex ipow(Complex z, int n) {
    Complex out{1, 0};
    while (n > 0) {
        if (n & 1) out *= z;
        z *= z;
        n >>= 1;
    }
    return out;
}

// ---- Gauss-Legendre nodes on [-1, 1] ----

struct GLRule {
    std::vector<double> x, w;
};

const GLRule& gl_rule(int n) {
    static std::map<int, GLRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

template <class F>
Complex gl_integrate(const F& f, double a, double b, int order) {
    const GLRule& r = gl_rule(order);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Complex s{0, 0};
    for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return half * s;
}

/// Composite adaptive quadrature: initial panels of bounded width, each panel
/// accepted when GL16 and GL32 agree.
template <class F>
Complex integrate_adaptive(const F& f, double a, double b, double absTol, double maxPanel = 0.5) {
    struct Panel {
        double a, b, tol;
        int depth;
    };
    int npanels = std::max(1, static_cast<int>(std::ceil((b - a) / maxPanel)));
    std::vector<Panel> stack;
    double w = (b - a) / npanels;
    for (int i = npanels - 1; i >= 0; --i)
        stack.push_back({a + i * w, a + (i + 1) * w, absTol / npanels, 0});
    Complex total{0, 0};
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        Complex c16 = gl_integrate(f, p.a, p.b, 16);
        Complex c32 = gl_integrate(f, p.a, p.b, 32);
        // roundoff floor: once the two rules agree to relative machine
        // precision, refining further only accumulates noise
        double accept = std::max(p.tol, 1e-15 * (1.0 + std::abs(c32)));
        if (std::abs(c32 - c16) <= accept || p.depth >= 16) {
            total += c32;
        } else {
            double mid = 0.5 * (p.a + p.b);
            stack.push_back({p.a, mid, p.tol / 2, p.depth + 1});
            stack.push_back({mid, p.b, p.tol / 2, p.depth + 1});
        }
    }
    return total;
}

// ---- the rational exponential and its pole data ----

struct PoleData {
    std::vector<Complex> sym;  // distinct path edge values: factors ((l+p)/(l-p))^mult
    std::vector<int> mult;
    std::vector<Complex> extra;  // denominator-only simple poles (face kernels)
    double theta = 0.0;          // arg(target - base)
    double dist = 0.0;           // |target - base|
    int k = 0;                   // total path edge count

    Complex eval(Complex lam) const {
        Complex out{1, 0};
        for (size_t i = 0; i < sym.size(); ++i)
            out *= ipow((lam + sym[i]) / (lam - sym[i]), mult[i]);
        for (Complex d : extra) out /= (lam - d);
        return out;
    }
    double min_abs() const {
        double m = 1e300;
        for (Complex p : sym) m = std::min(m, std::abs(p));
        for (Complex p : extra) m = std::min(m, std::abs(p));
        return m;
    }
    double max_abs() const {
        double m = 0.0;
        for (Complex p : sym) m = std::max(m, std::abs(p));
        for (Complex p : extra) m = std::max(m, std::abs(p));
        return m;
    }
    /// Angular distance between the poles and the branch cut ray at theta+pi.
    double branch_margin() const {
        double m = kPi;
        auto visit = [&](Complex p) {
            double d = std::remainder(std::arg(p) - theta, 2.0 * kPi);
            m = std::min(m, kPi - std::abs(d));
        };
        for (Complex p : sym) visit(p);
        for (Complex p : extra) visit(p);
        return m;
    }
};

void group_poles(const std::vector<Complex>& edges, PoleData& P) {
    std::vector<Complex> sorted = edges;
    std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (Complex e : sorted) {
        if (!P.sym.empty() && std::abs(e - P.sym.back()) <= 1e-12 * std::abs(e)) {
            P.mult.back()++;
        } else {
            P.sym.push_back(e);
            P.mult.push_back(1);
        }
        P.k++;
    }
}

Complex log_branch(Complex p, double theta) {
    double d = std::remainder(std::arg(p) - theta, 2.0 * kPi);
    return Complex(std::log(std::abs(p)), theta + d);
}

/// H(v) = (1/2 pi i) contour integral of log(l) e(l) / (2l) around the poles,
/// branch cut along theta + pi. Exact residues when the poles are simple and
/// well separated, otherwise a keyhole deformation: two circles plus the jump
/// term down the cut ray, all with smooth integrands.
Complex green_contour_value(const PoleData& P, bool* usedResidues) {
    if (P.branch_margin() < 1e-7)
        raise(ErrorCode::BranchConflict, "pole too close to the branch cut");
    bool simple = P.extra.empty();
    for (int m : P.mult)
        if (m > 1) simple = false;
    if (simple) {
        double minsep = 1e300;
        for (size_t i = 0; i + 1 < P.sym.size(); ++i)
            for (size_t j = i + 1; j < P.sym.size(); ++j)
                minsep = std::min(minsep, std::abs(P.sym[i] - P.sym[j]) /
                                              std::max(std::abs(P.sym[i]), std::abs(P.sym[j])));
        if (P.sym.size() == 1 || minsep > 1e-6) {
            Complex H{0, 0};
            for (size_t i = 0; i < P.sym.size(); ++i) {
                Complex prod{1, 0};
                for (size_t j = 0; j < P.sym.size(); ++j)
                    if (j != i) prod *= (P.sym[i] + P.sym[j]) / (P.sym[i] - P.sym[j]);
                H += log_branch(P.sym[i], P.theta) * prod;
            }
            if (usedResidues) *usedResidues = true;
            return H;
        }
    }
    if (usedResidues) *usedResidues = false;
    double Jabs = 0.0;
    {
        Complex J{0, 0};
        for (size_t i = 0; i < P.sym.size(); ++i) J += double(P.mult[i]) / P.sym[i];
        Jabs = std::abs(J);
    }
    double r = 0.1 * std::min(P.min_abs(), 1.0 / std::max(Jabs, 1e-300));
    double R = 10.0 * std::max(P.max_abs(), std::max(P.dist, 1.0));
    const double tol = 1e-14;
    auto circle = [&](double rho) {
        return 1.0 / (4.0 * kPi) *
               integrate_adaptive(
                   [&](double phi) {
                       return (std::log(rho) + I * phi) * P.eval(rho * std::exp(I * phi));
                   },
                   P.theta - kPi, P.theta + kPi, tol);
    };
    Complex ray = 0.5 * integrate_adaptive(
                            [&](double u) {
                                return P.eval(-std::exp(u) * std::exp(I * P.theta));
                            },
                            std::log(r), std::log(R), tol);
    return circle(R) - circle(r) - ray;
}

/// K(v) = 2 e^{i theta} integral over (0, inf) of e(-s e^{i theta}) ds with
/// first-order analytic tails beyond the quadrature window.
Complex face_kernel_value(const PoleData& P) {
    if (P.branch_margin() < 1e-7)
        raise(ErrorCode::BranchConflict, "pole too close to the branch cut");
    Complex S{0, 0};  // log-derivative of e at 0
    Complex a{0, 0};  // 1/lambda coefficient of lambda^2 e(lambda) at infinity
    for (size_t i = 0; i < P.sym.size(); ++i) {
        S += 2.0 * double(P.mult[i]) / P.sym[i];
        a += 2.0 * double(P.mult[i]) * P.sym[i];
    }
    for (Complex d : P.extra) {
        S += 1.0 / d;
        a += d;
    }
    double rmin = std::min(0.1 * P.min_abs(), 1e-9 / std::max(std::abs(S), 1e-9));
    double Rmax = 1e9 * std::max({P.max_abs(), std::abs(a), 1.0});
    Complex eiT = std::exp(I * P.theta);
    Complex integral = integrate_adaptive(
        [&](double u) {
            double s = std::exp(u);
            return P.eval(-s * eiT) * s;
        },
        std::log(rmin), std::log(Rmax), 1e-14);
    Complex tails = P.eval(Complex(0, 0)) * rmin + std::exp(-2.0 * I * P.theta) / Rmax;
    return 2.0 * eiT * (integral + tails);
}

} // namespace

// ---- discrete exponential ----

Complex exp_along_path(const QuadGraph& g, Complex lambda, const std::vector<int>& vertices) {
    Complex out{1, 0};
    for (size_t i = 0; i + 1 < vertices.size(); ++i) {
        Complex e = g.pos(vertices[i + 1]) - g.pos(vertices[i]);
        if (std::abs(lambda - e) < 1e-12 * std::abs(e))
            raise(ErrorCode::PoleHit, "lambda equals an edge value on the path");
        out *= (lambda + e) / (lambda - e);
    }
    return out;
}

Complex discrete_exp(const QuadGraph& g, Complex lambda, int v, int v0) {
    QuadGraph::ConePath cp = g.cone_path(v0, v);
    return exp_along_path(g, lambda, cp.vertices);
}

Complex discrete_exp2(const QuadGraph& g, Complex lambda, int v, int v0) {
    QuadGraph::ConePath cp = g.cone_path(v0, v);
    Complex out{1, 0};
    for (Complex e : cp.edges) {
        Complex den = 1.0 - 0.5 * lambda * e;
        if (std::abs(den) < 1e-12) raise(ErrorCode::PoleHit, "pole of the exp parametrization");
        out *= (1.0 + 0.5 * lambda * e) / den;
    }
    return out;
}

Complex discrete_exp2_face(const QuadGraph& g, Complex lambda, int q, int v0) {
    const Quad& quad = g.quad(q);
    int vb = quad.v[0];
    Complex base = discrete_exp2(g, lambda, vb, v0);
    Complex n1 = g.pos(quad.v[1]) - g.pos(vb);
    Complex n2 = g.pos(quad.v[3]) - g.pos(vb);
    Complex d1 = 1.0 - 0.5 * lambda * n1;
    Complex d2 = 1.0 - 0.5 * lambda * n2;
    if (std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12)
        raise(ErrorCode::PoleHit, "pole of the face exp");
    return base / (d1 * d2);
}

Complex discrete_exp_face_base(const QuadGraph& g, Complex lambda, int v, int q0) {
    const Quad& quad = g.quad(q0);
    int vb = quad.v[0];
    Complex d1 = g.pos(vb) - g.pos(quad.v[1]);
    Complex d2 = g.pos(vb) - g.pos(quad.v[3]);
    if (std::abs(lambda - d1) < 1e-12 * std::abs(d1) ||
        std::abs(lambda - d2) < 1e-12 * std::abs(d2))
        raise(ErrorCode::PoleHit, "lambda equals a half-edge pole");
    return discrete_exp(g, lambda, v, vb) / ((lambda - d1) * (lambda - d2));
}

// ---- path sums ----

void j_field(const QuadGraph& g, int v0, std::vector<Complex>& J, std::vector<int>& parity) {
    if (!g.is_parallelogram_graph())
        raise(ErrorCode::NotParallelogramGraph, "path sums need a parallelogram-graph");
    J.assign(g.vertex_count(), Complex(0, 0));
    parity.assign(g.vertex_count(), -1);
    parity[v0] = 0;
    std::deque<int> bfs{v0};
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop_front();
        for (auto [w, e] : g.vertex_edges(v)) {
            if (parity[w] >= 0) continue;
            J[w] = J[v] + 1.0 / (g.pos(w) - g.pos(v));
            parity[w] = (parity[v] + 1) & 1;
            bfs.push_back(w);
        }
    }
}

PathSums path_sums_vv(const QuadGraph& g, int v, int v0) {
    std::vector<Complex> J;
    std::vector<int> par;
    j_field(g, v0, J, par);
    if (par[v] < 0) raise(ErrorCode::Unreachable, "vertex not connected");
    return {J[v], Complex(0, 0), par[v]};
}

namespace {

// half-edge contribution at the face end: d_i = (neighbor of corner) - corner
void face_end(const QuadGraph& g, int q, int corner, Complex& halfSum, Complex& prod) {
    const Quad& quad = g.quad(q);
    Complex d1 = g.pos(quad.v[(corner + 1) % 4]) - g.pos(quad.v[corner]);
    Complex d2 = g.pos(quad.v[(corner + 3) % 4]) - g.pos(quad.v[corner]);
    halfSum = 0.5 * (1.0 / d1 + 1.0 / d2);
    prod = d1 * d2;
}

} // namespace

PathSums path_sums_vq(const QuadGraph& g, int q, int v0) {
    // J(Q, v0): path v0 -> corner of Q, then two half-edges into the center
    int vb = g.quad(q).v[0];
    PathSums base = path_sums_vv(g, vb, v0);
    Complex halfSum, prod;
    face_end(g, q, 0, halfSum, prod);
    PathSums out;
    out.J = base.J + halfSum;
    out.parity = base.parity;
    double sign = g.color(vb) == g.color(v0) ? 1.0 : -1.0;
    out.tau = sign / prod;
    return out;
}

PathSums path_sums_qv(const QuadGraph& g, int v, int q0) {
    PathSums s = path_sums_vq(g, q0, v);
    s.J = -s.J;  // J(v, Q0) = -J(Q0, v)
    return s;
}

PathSums path_sums_qq(const QuadGraph& g, int q, int q0) {
    int vb = g.quad(q).v[0];
    int vb0 = g.quad(q0).v[0];
    PathSums mid = path_sums_vv(g, vb, vb0);
    Complex dSum, dProd, eSum, eProd;
    face_end(g, q, 0, dSum, dProd);
    face_end(g, q0, 0, eSum, eProd);
    PathSums out;
    // half-edges leave the center of Q0 (sign flip) and enter the center of Q
    out.J = -eSum + mid.J + dSum;
    out.parity = mid.parity;
    double sign = g.color(vb) == g.color(vb0) ? 1.0 : -1.0;
    out.tau = sign / (eProd * dProd);
    return out;
}

// ---- kernel tables ----

KernelTable green_free(const QuadGraph& g, int v0, double evalRadius) {
    if (!g.is_parallelogram_graph())
        raise(ErrorCode::NotParallelogramGraph, "Green construction needs a parallelogram-graph");
    KernelTable t;
    t.kind = KernelKind::GreenFree;
    t.base = v0;
    t.values.assign(g.vertex_count(), Complex(0, 0));
    t.has.assign(g.vertex_count(), 0);
    t.asym.assign(g.vertex_count(), Complex(0, 0));
    t.hasAsym.assign(g.vertex_count(), 0);
    t.diag.eval_radius = evalRadius;
    t.diag.min_branch_margin = kPi;

    double alpha = std::min(g.alpha0() * 0.999, kPi / 2);
    QuadGraph::ConePathIndex idx(g, v0, alpha);
    std::vector<Complex> J;
    std::vector<int> par;
    j_field(g, v0, J, par);

    Complex z0 = g.pos(v0);
    for (int v = 0; v < g.vertex_count(); ++v) {
        double dist = std::abs(g.pos(v) - z0);
        if (evalRadius >= 0 && dist > evalRadius) continue;
        if (v == v0) {
            t.values[v] = 0.0;
            t.has[v] = 1;
            continue;
        }
        if (!idx.reachable(v)) {
            // near the rim of a finite patch a confined path may not exist;
            // the vertex is skipped and counted (impossible on the infinite
            // graph by the covering lemma)
            t.diag.unreached++;
            continue;
        }
        QuadGraph::ConePath cp = idx.path_to(v);
        PoleData P;
        group_poles(cp.edges, P);
        P.theta = std::arg(g.pos(v) - z0);
        P.dist = dist;
        bool res = false;
        Complex H = green_contour_value(P, &res);
        t.values[v] = Complex(H.real() / (2.0 * kPi), 0.0);
        t.has[v] = 1;
        (res ? t.diag.residue_evals : t.diag.quadrature_evals)++;
        t.diag.max_pole_multiplicity =
            std::max(t.diag.max_pole_multiplicity,
                     *std::max_element(P.mult.begin(), P.mult.end()));
        t.diag.min_branch_margin = std::min(t.diag.min_branch_margin, P.branch_margin());
        // asymptote of the construction
        if (par[v] >= 0) {
            double r = dist, jAbs = std::abs(J[v]);
            if (par[v] == 0)
                t.asym[v] = (kEuler + std::log(2.0)) / (2.0 * kPi) + std::log(r * jAbs) / (4.0 * kPi);
            else
                t.asym[v] = std::log(r / jAbs) / (4.0 * kPi);
            t.hasAsym[v] = 1;
        }
    }
    // measured normalization: triangle G(v0) * ar(F_v0)
    if (g.is_interior(v0)) {
        bool starCovered = true;
        VertexField G(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v) G[v] = t.has[v] ? t.values[v] : Complex(0, 0);
        for (const auto& se : g.star(v0))
            for (int c = 0; c < 4; ++c)
                if (!t.has[g.quad(se.quad).v[c]]) starCovered = false;
        if (starCovered)
            t.diag.measured_constant = (laplacian_at(g, G, v0) * g.ar_Fv(v0)).real();
    }
    t.diag.scale_applied = 1.0;
    return t;
}

KernelTable cauchy_kernel_vertex(const QuadGraph& g, const KernelTable& green) {
    if (green.kind != KernelKind::GreenFree)
        raise(ErrorCode::KindMismatch, "vertex kernel needs a Green table");
    KernelTable t;
    t.kind = KernelKind::CauchyVertex;
    t.base = green.base;
    t.values.assign(g.quad_count(), Complex(0, 0));
    t.has.assign(g.quad_count(), 0);
    t.asym.assign(g.quad_count(), Complex(0, 0));
    t.hasAsym.assign(g.quad_count(), 0);
    t.diag = green.diag;
    Complex z0 = g.pos(green.base);
    for (int q = 0; q < g.quad_count(); ++q) {
        const Quad& quad = g.quad(q);
        bool ok = true;
        for (int c = 0; c < 4; ++c)
            if (!green.has[quad.v[c]]) ok = false;
        if (!ok) continue;
        Complex db = g.pos(quad.v[2]) - g.pos(quad.v[0]);
        Complex dw = g.pos(quad.v[3]) - g.pos(quad.v[1]);
        Complex gb = green.values[quad.v[2]] - green.values[quad.v[0]];
        Complex gw = green.values[quad.v[3]] - green.values[quad.v[1]];
        Complex lam = g.geom(q).lambda;
        t.values[q] = 8.0 * kPi * (lam * gb / db + std::conj(lam) * gw / dw);
        t.has[q] = 1;
        PathSums ps = path_sums_vq(g, q, green.base);
        t.asym[q] = 1.0 / (g.geom(q).center - z0) + ps.tau / ps.J;
        t.hasAsym[q] = 1;
    }
    return t;
}

KernelTable cauchy_kernel_face(const QuadGraph& g, int q0, double evalRadius) {
    if (!g.is_parallelogram_graph())
        raise(ErrorCode::NotParallelogramGraph, "Cauchy kernel needs a parallelogram-graph");
    KernelTable t;
    t.kind = KernelKind::CauchyFace;
    t.base = q0;
    t.values.assign(g.vertex_count(), Complex(0, 0));
    t.has.assign(g.vertex_count(), 0);
    t.asym.assign(g.vertex_count(), Complex(0, 0));
    t.hasAsym.assign(g.vertex_count(), 0);
    t.diag.eval_radius = evalRadius;
    t.diag.min_branch_margin = kPi;

    double alpha = std::min(g.alpha0() * 0.999, kPi / 2);
    const Quad& quad = g.quad(q0);
    Complex c0 = g.geom(q0).center;
    std::vector<std::unique_ptr<QuadGraph::ConePathIndex>> idx(4);
    for (int c = 0; c < 4; ++c)
        idx[c] = std::make_unique<QuadGraph::ConePathIndex>(g, quad.v[c], alpha);

    for (int v = 0; v < g.vertex_count(); ++v) {
        double dist = std::abs(g.pos(v) - c0);
        if (evalRadius >= 0 && dist > evalRadius) continue;
        double theta = std::arg(g.pos(v) - c0);
        // choose the base corner giving the safest pole configuration
        int bestCorner = -1;
        double bestMargin = 0.0;
        size_t bestLen = 0;
        PoleData bestP;
        for (int c = 0; c < 4; ++c) {
            int vb = quad.v[c];
            Complex d1 = g.pos(vb) - g.pos(quad.v[(c + 1) % 4]);
            Complex d2 = g.pos(vb) - g.pos(quad.v[(c + 3) % 4]);
            QuadGraph::ConePath cp;
            try {
                cp = idx[c]->path_to(v, {d1, d2});
            } catch (const Error&) {
                continue;
            }
            PoleData P;
            group_poles(cp.edges, P);
            P.extra = {d1, d2};
            P.theta = theta;
            P.dist = dist;
            double margin = P.branch_margin();
            if (bestCorner < 0 || std::make_pair(cp.vertices.size(), -margin) <
                                      std::make_pair(bestLen, -bestMargin)) {
                bestCorner = c;
                bestMargin = margin;
                bestLen = cp.vertices.size();
                bestP = std::move(P);
            }
        }
        if (bestCorner < 0 || bestMargin < 1e-7) {
            if (evalRadius >= 0) {  // finite-patch rim effect, as for the Green table
                t.diag.unreached++;
                continue;
            }
            raise(ErrorCode::BranchConflict, "no base corner confines the kernel poles");
        }
        t.values[v] = face_kernel_value(bestP);
        t.has[v] = 1;
        t.diag.quadrature_evals++;
        t.diag.min_branch_margin = std::min(t.diag.min_branch_margin, bestMargin);
        if (!bestP.mult.empty())
            t.diag.max_pole_multiplicity = std::max(
                t.diag.max_pole_multiplicity, *std::max_element(bestP.mult.begin(), bestP.mult.end()));
        PathSums ps = path_sums_qv(g, v, q0);
        t.asym[v] = 1.0 / (g.pos(v) - c0) + ps.tau / ps.J;
        t.hasAsym[v] = 1;
    }
    return t;
}

KernelTable cauchy_face_derivative(const QuadGraph& g, const KernelTable& kq0) {
    if (kq0.kind != KernelKind::CauchyFace)
        raise(ErrorCode::KindMismatch, "derivative table needs a CauchyFace table");
    KernelTable t;
    t.kind = KernelKind::CauchyFaceDerivative;
    t.base = kq0.base;
    t.values.assign(g.quad_count(), Complex(0, 0));
    t.has.assign(g.quad_count(), 0);
    t.asym.assign(g.quad_count(), Complex(0, 0));
    t.hasAsym.assign(g.quad_count(), 0);
    t.diag = kq0.diag;
    Complex c0 = g.geom(kq0.base).center;
    for (int q = 0; q < g.quad_count(); ++q) {
        const Quad& quad = g.quad(q);
        bool ok = true;
        for (int c = 0; c < 4; ++c)
            if (!kq0.has[quad.v[c]]) ok = false;
        if (!ok) continue;
        Complex db = g.pos(quad.v[2]) - g.pos(quad.v[0]);
        Complex dw = g.pos(quad.v[3]) - g.pos(quad.v[1]);
        Complex kb = kq0.values[quad.v[2]] - kq0.values[quad.v[0]];
        Complex kw = kq0.values[quad.v[3]] - kq0.values[quad.v[1]];
        Complex lam = g.geom(q).lambda;
        t.values[q] = lam * kb / db + std::conj(lam) * kw / dw;
        t.has[q] = 1;
        if (q != kq0.base) {
            PathSums ps = path_sums_qq(g, q, kq0.base);
            Complex dc = g.geom(q).center - c0;
            t.asym[q] = -1.0 / (dc * dc) - ps.tau / (ps.J * ps.J);
            t.hasAsym[q] = 1;
        }
    }
    return t;
}

// ---- Cauchy integrals ----

namespace {

void require_closed(const QuadGraph& g, const MedialPath& contour) {
    if (contour.empty()) raise(ErrorCode::NotContour, "empty contour");
    for (size_t i = 0; i < contour.size(); ++i)
        if (g.medial_head(contour[i]) != g.medial_tail(contour[(i + 1) % contour.size()]))
            raise(ErrorCode::NotContour, "contour is not a closed chain");
}

} // namespace

double contour_winding(const QuadGraph& g, const MedialPath& contour, Complex z) {
    double total = 0.0;
    for (size_t i = 0; i < contour.size(); ++i) {
        Complex a = g.medial_point(g.medial_tail(contour[i])) - z;
        Complex b = g.medial_point(g.medial_head(contour[i])) - z;
        total += std::arg(b / a);
    }
    return total / (2.0 * kPi);
}

Complex cauchy_integral_vertex(const QuadGraph& g, const KernelTable& kv0, const VertexField& f,
                               const MedialPath& contour) {
    if (kv0.kind != KernelKind::CauchyVertex) raise(ErrorCode::KindMismatch, "need a vertex kernel");
    require_closed(g, contour);
    if (std::abs(contour_winding(g, contour, g.pos(kv0.base)) - 1.0) > 0.1)
        raise(ErrorCode::BasePointNotEnclosed, "contour does not surround v0 once");
    Complex s{0, 0};
    for (const auto& e : contour)
        s += f[g.medial_vertex_of(e.id)] * kv0.value_at(e.id >> 2) * g.medial_displacement(e);
    return s / (2.0 * kPi * I);
}

Complex cauchy_integral_face(const QuadGraph& g, const KernelTable& kq0, const FaceField& h,
                             const MedialPath& contour) {
    if (kq0.kind != KernelKind::CauchyFace) raise(ErrorCode::KindMismatch, "need a face kernel");
    require_closed(g, contour);
    if (std::abs(contour_winding(g, contour, g.geom(kq0.base).center) - 1.0) > 0.1)
        raise(ErrorCode::BasePointNotEnclosed, "contour does not surround Q0 once");
    Complex s{0, 0};
    for (const auto& e : contour)
        s += h[e.id >> 2] * kq0.value_at(g.medial_vertex_of(e.id)) * g.medial_displacement(e);
    return s / (2.0 * kPi * I);
}

Complex cauchy_integral_derivative(const QuadGraph& g, const KernelTable& dkq0,
                                   const VertexField& f, const MedialPath& contour) {
    if (dkq0.kind != KernelKind::CauchyFaceDerivative)
        raise(ErrorCode::KindMismatch, "need a face kernel derivative table");
    require_closed(g, contour);
    for (const auto& e : contour)
        if ((e.id >> 2) == dkq0.base)
            raise(ErrorCode::ContourTouchesBase, "contour uses an edge inside Q0");
    if (std::abs(contour_winding(g, contour, g.geom(dkq0.base).center) - 1.0) > 0.1)
        raise(ErrorCode::BasePointNotEnclosed, "contour does not surround Q0 once");
    Complex s{0, 0};
    for (const auto& e : contour)
        s += f[g.medial_vertex_of(e.id)] * dkq0.value_at(e.id >> 2) * g.medial_displacement(e);
    return -s / (2.0 * kPi * I);
}

MedialPath ring_contour(const QuadGraph& g, int base, bool baseIsVertex, int rings) {
    if (rings < 1) raise(ErrorCode::ContourTooTight, "ring radius must be at least 1");
    std::vector<int> seeds = baseIsVertex ? g.quads_at_vertex(base) : std::vector<int>{base};
    return g.boundary_contour(g.quad_neighborhood(seeds, rings - 1));
}

// ---- skew lattice pair ----

SkewLatticePair::SkewLatticePair(Complex e1, Complex e2, int halfExtent)
    : e1_(e1), e2_(e2), m_(halfExtent) {
    if ((std::conj(e1) * e2).imag() <= 0)
        raise(ErrorCode::NotSkewLattice, "spanning vectors must be positively oriented");
    LatticeSpec lamSpec;
    lamSpec.family = LatticeFamily::Skew;
    lamSpec.e1 = e1;
    lamSpec.e2 = e2;
    lamSpec.centered = true;
    lamSpec.m = lamSpec.n = m_;
    lam_ = generate(lamSpec);

    LatticeSpec diaSpec;
    diaSpec.family = LatticeFamily::Skew;
    diaSpec.e1 = e1;
    diaSpec.e2 = e2;
    diaSpec.m = diaSpec.n = 2 * m_ - 1;
    diaSpec.origin = (0.5 - m_) * (e1 + e2);
    dia_ = generate(diaSpec);

    lamQuadToDiaVert_.assign(lam_.quad_count(), -1);
    for (int a = -m_; a < m_; ++a)
        for (int b = -m_; b < m_; ++b) {
            int q = skew_quad_id(lamSpec, a, b);
            int dv = skew_vertex_id(diaSpec, a + m_, b + m_);
            lamQuadToDiaVert_[q] = dv;
        }
    diaQuadToLamVert_.assign(dia_.quad_count(), -1);
    for (int a = 0; a < 2 * m_ - 1; ++a)
        for (int b = 0; b < 2 * m_ - 1; ++b) {
            int q = skew_quad_id(diaSpec, a, b);
            int lv = skew_vertex_id(lamSpec, a - m_ + 1, b - m_ + 1);
            diaQuadToLamVert_[q] = lv;
        }
    lamSpec_ = lamSpec;
    diaSpec_ = diaSpec;
}

int SkewLatticePair::lambda_vertex(int a, int b) const { return skew_vertex_id(lamSpec_, a, b); }
int SkewLatticePair::diamond_vertex(int a, int b) const {
    return skew_vertex_id(diaSpec_, a + m_, b + m_);
}
int SkewLatticePair::lambda_quad_at(int a, int b) const { return skew_quad_id(lamSpec_, a, b); }
int SkewLatticePair::diamond_quad_at(int a, int b) const {
    return skew_quad_id(diaSpec_, a + m_ - 1, b + m_ - 1);
}

SkewLatticePair::Field SkewLatticePair::lift(const VertexField& f) const {
    Field out;
    out.onLambda = true;
    out.values.assign(f.v.begin(), f.v.end());
    out.has.assign(f.size(), 1);
    return out;
}

SkewLatticePair::Field SkewLatticePair::derivative(const Field& f) const {
    const QuadGraph& src = f.onLambda ? lam_ : dia_;
    const std::vector<int>& quadMap = f.onLambda ? lamQuadToDiaVert_ : diaQuadToLamVert_;
    const QuadGraph& dst = f.onLambda ? dia_ : lam_;
    Field out;
    out.onLambda = !f.onLambda;
    out.values.assign(dst.vertex_count(), Complex(0, 0));
    out.has.assign(dst.vertex_count(), 0);
    for (int q = 0; q < src.quad_count(); ++q) {
        const Quad& quad = src.quad(q);
        bool ok = true;
        for (int c = 0; c < 4; ++c)
            if (!f.has[quad.v[c]]) ok = false;
        if (!ok || quadMap[q] < 0) continue;
        Complex db = src.pos(quad.v[2]) - src.pos(quad.v[0]);
        Complex dw = src.pos(quad.v[3]) - src.pos(quad.v[1]);
        Complex fb = f.values[quad.v[2]] - f.values[quad.v[0]];
        Complex fw = f.values[quad.v[3]] - f.values[quad.v[1]];
        Complex lam = src.geom(q).lambda;
        out.values[quadMap[q]] = lam * fb / db + std::conj(lam) * fw / dw;
        out.has[quadMap[q]] = 1;
    }
    return out;
}

SkewLatticePair::Field SkewLatticePair::derivative_n(const Field& f, int n) const {
    Field cur = f;
    for (int i = 0; i < n; ++i) cur = derivative(cur);
    return cur;
}

double SkewLatticePair::tau_prime(Complex x, Complex q0) const {
    // coordinates of x - q0 in the half-step basis (e1/2, e2/2)
    Complex w = x - q0;
    auto cross = [](Complex a, Complex b) { return (std::conj(a) * b).imag(); };
    double det = cross(e1_, e2_);
    long p = std::lround(2.0 * cross(w, e2_) / det);
    long q = std::lround(2.0 * cross(e1_, w) / det);
    if (((p ^ q) & 1) != 0) raise(ErrorCode::NotSkewLattice, "point off the half-step lattice");
    if ((p & 1) != 0) { p += 1; q += 1; }  // x on V(Lambda): use x + e1/2 + e2/2
    long parity = ((p + q) / 2) & 1;
    return parity == 0 ? 1.0 : -1.0;
}

HigherDerivativeCheck skew_higher_derivative(const SkewLatticePair& sk, const VertexField& f,
                                             int n, int ringRadius, double kernelRadius) {
    if (n < 0) raise(ErrorCode::UsageError, "n must be nonnegative");
    if (ringRadius < n / 2 + 1)
        raise(ErrorCode::ContourTooTight,
              "contour must clear discrete distance n/2 around the base point");
    const QuadGraph& lam = sk.lambda();
    const int v0 = sk.lambda_vertex(0, 0);
    const int q0 = sk.lambda_quad_at(0, 0);
    if (kernelRadius < 0)
        kernelRadius = (ringRadius + n + 3) * (std::abs(sk.e1()) + std::abs(sk.e2()));

    // kernel field on the diamond vertices
    SkewLatticePair::Field kfield;
    if (n % 2 == 0) {
        KernelTable green = green_free(lam, v0, kernelRadius);
        KernelTable kv = cauchy_kernel_vertex(lam, green);
        kfield.onLambda = false;
        kfield.values.assign(sk.diamond().vertex_count(), Complex(0, 0));
        kfield.has.assign(sk.diamond().vertex_count(), 0);
        for (int q = 0; q < lam.quad_count(); ++q)
            if (kv.has[q]) {
                int dv = sk.diamond_vertex_of_quad(q);
                if (dv >= 0) {
                    kfield.values[dv] = kv.values[q];
                    kfield.has[dv] = 1;
                }
            }
    } else {
        KernelTable kq = cauchy_kernel_face(lam, q0, kernelRadius);
        kfield.onLambda = true;
        kfield.values.assign(lam.vertex_count(), Complex(0, 0));
        kfield.has.assign(lam.vertex_count(), 0);
        for (int v = 0; v < lam.vertex_count(); ++v)
            if (kq.has[v]) {
                kfield.values[v] = kq.values[v];
                kfield.has[v] = 1;
            }
    }
    SkewLatticePair::Field dnK = sk.derivative_n(kfield, n);
    if (dnK.onLambda)
        raise(ErrorCode::UsageError, "internal parity error");

    // contour on the lambda graph
    MedialPath contour = ring_contour(lam, n % 2 == 0 ? v0 : q0, n % 2 == 0, ringRadius);

    Complex s{0, 0};
    for (const auto& e : contour) {
        int q = e.id >> 2;
        int dv = sk.diamond_vertex_of_quad(q);
        if (dv < 0 || !dnK.has[dv])
            raise(ErrorCode::ContourTooTight, "derivative kernel not available on the contour");
        s += f[lam.quad(q).v[e.id & 3]] * dnK.values[dv] * lam.medial_displacement(e);
    }
    double sign = n % 2 == 0 ? 1.0 : -1.0;
    HigherDerivativeCheck out;
    out.reconstructed = sign * s / (2.0 * kPi * I);

    SkewLatticePair::Field dnF = sk.derivative_n(sk.lift(f), n);
    int x0 = n % 2 == 0 ? v0 : sk.diamond_vertex(0, 0);
    if (!dnF.has[x0]) raise(ErrorCode::ContourTooTight, "lattice too small for the direct derivative");
    out.direct = dnF.values[x0];
    out.asym = Complex(0, 0);
    return out;
}

} // namespace quadcalc
