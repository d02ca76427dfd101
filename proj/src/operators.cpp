#include "quadcalc/operators.hpp"

#include <cmath>
#include <deque>
#include <functional>

namespace quadcalc {

namespace {

const Complex I{0.0, 1.0};

double scale_of(const std::vector<Complex>& v) {
    double s = 0.0;
    for (const auto& x : v) s = std::max(s, std::abs(x));
    return s == 0.0 ? 1.0 : s;
}

} // namespace

void d_lambda_contour(const QuadGraph& g, const VertexField& f, FaceField& df, FaceField& dfbar) {
    df = FaceField(g.quad_count());
    dfbar = FaceField(g.quad_count());
    for (int q = 0; q < g.quad_count(); ++q) {
        Complex sz{0, 0}, szb{0, 0};
        for (int c = 0; c < 4; ++c) {
            Complex e = g.medial_displacement(MedialEdge(4 * q + c, false));
            Complex fv = f[g.quad(q).v[c]];
            sz += fv * e;
            szb += fv * std::conj(e);
        }
        double ar = g.geom(q).ar_FQ;
        df[q] = -szb / (2.0 * I * ar);
        dfbar[q] = sz / (2.0 * I * ar);
    }
}

void d_lambda(const QuadGraph& g, const VertexField& f, FaceField& df, FaceField& dfbar) {
    if (f.size() != g.vertex_count()) raise(ErrorCode::MissingValues, "field size mismatch");
    df = FaceField(g.quad_count());
    dfbar = FaceField(g.quad_count());
    double fs = scale_of(f.v);
    for (int q = 0; q < g.quad_count(); ++q) {
        const Quad& quad = g.quad(q);
        Complex db = g.pos(quad.v[2]) - g.pos(quad.v[0]);
        Complex dw = g.pos(quad.v[3]) - g.pos(quad.v[1]);
        Complex fb = f[quad.v[2]] - f[quad.v[0]];
        Complex fw = f[quad.v[3]] - f[quad.v[1]];
        Complex lam = g.geom(q).lambda;
        df[q] = lam * fb / db + std::conj(lam) * fw / dw;
        dfbar[q] = std::conj(lam) * fb / std::conj(db) + lam * fw / std::conj(dw);
    }
    // cross-check against the elementary-cycle contour form
    FaceField cdf, cdfb;
    d_lambda_contour(g, f, cdf, cdfb);
    double worst = 0.0;
    for (int q = 0; q < g.quad_count(); ++q)
        worst = std::max({worst, std::abs(df[q] - cdf[q]), std::abs(dfbar[q] - cdfb[q])});
    double geo = std::max(1.0, 1.0 / g.min_edge_length());
    if (worst > 1e-10 * fs * geo)
        raise(ErrorCode::MissingValues, "derivative contour cross-check failed");
}

void d_diamond(const QuadGraph& g, const FaceField& h, VertexField& dh, VertexField& dhbar) {
    if (h.size() != g.quad_count()) raise(ErrorCode::MissingValues, "field size mismatch");
    dh = VertexField(g.vertex_count());
    dhbar = VertexField(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.is_boundary(v)) continue;
        Complex sz{0, 0}, szb{0, 0};
        for (const auto& se : g.star(v)) {
            Complex e = -g.medial_displacement(MedialEdge(4 * se.quad + se.corner, false));
            sz += h[se.quad] * e;
            szb += h[se.quad] * std::conj(e);
        }
        double ar = g.ar_Fv(v);
        dh[v] = -szb / (2.0 * I * ar);
        dhbar[v] = sz / (2.0 * I * ar);
    }
}

HolomorphicityReport check_holomorphic(const QuadGraph& g, const VertexField& f) {
    HolomorphicityReport r;
    FaceField df, dfb;
    d_lambda(g, f, df, dfb);
    r.residual.assign(dfb.v.begin(), dfb.v.end());
    for (const auto& x : r.residual) r.maxAbs = std::max(r.maxAbs, std::abs(x));
    return r;
}

HolomorphicityReport check_holomorphic(const QuadGraph& g, const FaceField& h) {
    HolomorphicityReport r;
    r.residual.assign(g.vertex_count(), Complex(0, 0));
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.is_boundary(v)) continue;
        Complex s{0, 0};
        for (const auto& se : g.star(v))
            s += h[se.quad] * -g.medial_displacement(MedialEdge(4 * se.quad + se.corner, false));
        r.residual[v] = s;
        r.maxAbs = std::max(r.maxAbs, std::abs(s));
    }
    return r;
}

FaceField average(const QuadGraph& g, const VertexField& f) {
    if (f.size() != g.vertex_count()) raise(ErrorCode::MissingValues, "field size mismatch");
    FaceField m(g.quad_count());
    for (int q = 0; q < g.quad_count(); ++q) {
        const Quad& quad = g.quad(q);
        m[q] = 0.25 * (f[quad.v[0]] + f[quad.v[1]] + f[quad.v[2]] + f[quad.v[3]]);
    }
    return m;
}

bool is_disk_like(const QuadGraph& g) {
    return g.vertex_count() - g.lambda_edge_count() + g.quad_count() == 1;
}

namespace {

/// Integrates a closed type-Diamond one-form to a vertex function via the
/// medial graph: spanning tree from the black basepoint's first medial vertex,
/// then midpoint reconstruction on Lambda. The two additive constants are
/// fixed at the basepoints.
VertexField integrate_diamond_form(const QuadGraph& g, const OneForm& w, int blackBase,
                                   int whiteBase, Complex cb, Complex cw) {
    if (g.color(blackBase) != Color::Black || g.color(whiteBase) != Color::White)
        raise(ErrorCode::MissingValues, "basepoints must be one black, one white vertex");
    const int nm = g.lambda_edge_count();
    std::vector<Complex> fX(nm, Complex(0, 0));
    std::vector<char> seen(nm, 0);
    int root = g.vertex_edges(blackBase).front().second;
    seen[root] = 1;
    std::deque<int> bfs{root};
    // medial adjacency: every medial edge joins two medial vertices
    std::vector<std::vector<std::pair<int, int>>> madj(nm);  // (other medial vertex, edge id signed)
    for (int e = 0; e < g.medial_edge_count(); ++e) {
        MedialEdge me(e, false);
        int t = g.medial_tail(me), h = g.medial_head(me);
        madj[t].emplace_back(h, e + 1);
        madj[h].emplace_back(t, -(e + 1));
    }
    while (!bfs.empty()) {
        int m = bfs.front();
        bfs.pop_front();
        for (auto [other, se] : madj[m]) {
            if (seen[other]) continue;
            MedialEdge me(std::abs(se) - 1, se < 0);
            fX[other] = fX[m] + w.at(me);
            seen[other] = 1;
            bfs.push_back(other);
        }
    }
    // reconstruct on Lambda: f(v) + f(w) = 2 fX(midpoint)
    VertexField f(g.vertex_count());
    std::vector<char> done(g.vertex_count(), 0);
    f[blackBase] = cb;
    done[blackBase] = 1;
    std::deque<int> vb{blackBase};
    while (!vb.empty()) {
        int v = vb.front();
        vb.pop_front();
        for (auto [wv, e] : g.vertex_edges(v)) {
            if (done[wv]) continue;
            f[wv] = 2.0 * fX[e] - f[v];
            done[wv] = 1;
            vb.push_back(wv);
        }
    }
    Complex shift = cw - f[whiteBase];
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.color(v) == Color::White) f.v[v] += shift;
    return f;
}

} // namespace

VertexField primitive(const QuadGraph& g, const FaceField& h, int blackBase, int whiteBase,
                      Complex cb, Complex cw, double tol) {
    if (!is_disk_like(g)) raise(ErrorCode::NotSimplyConnected, "domain is not simply connected");
    double hs = scale_of(h.v) * std::max(1.0, g.max_edge_length());
    HolomorphicityReport rep = check_holomorphic(g, h);
    if (rep.maxAbs > tol * hs)
        raise(ErrorCode::NotHolomorphic, "Morera defect " + std::to_string(rep.maxAbs));
    OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
    for (int q = 0; q < g.quad_count(); ++q)
        for (int c = 0; c < 4; ++c)
            w.val[4 * q + c] = h[q] * g.medial_displacement(MedialEdge(4 * q + c, false));
    return integrate_diamond_form(g, w, blackBase, whiteBase, cb, cw);
}

Complex laplacian_at(const QuadGraph& g, const VertexField& f, int v) {
    Complex s{0, 0};
    bool black = g.color(v) == Color::Black;
    for (const auto& se : g.star(v)) {
        const Quad& quad = g.quad(se.quad);
        Complex rho = g.geom(se.quad).rho;
        if (!black) rho = 1.0 / rho;
        Complex fvs = f[quad.v[(se.corner + 2) % 4]];
        Complex fvp = f[quad.v[(se.corner + 3) % 4]];   // v'_s
        Complex fvm = f[quad.v[(se.corner + 1) % 4]];   // v'_{s-1}
        s += (std::norm(rho) * (fvs - f[v]) + rho.imag() * (fvp - fvm)) / rho.real();
    }
    return s / (2.0 * g.ar_Fv(v));
}

VertexField laplacian(const QuadGraph& g, const VertexField& f) {
    if (f.size() != g.vertex_count()) raise(ErrorCode::MissingValues, "field size mismatch");
    VertexField out(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) out[v] = laplacian_at(g, f, v);
    return out;
}

VertexField laplacian_factored(const QuadGraph& g, const VertexField& f) {
    FaceField df, dfb;
    d_lambda(g, f, df, dfb);
    VertexField dh, dhb;
    d_diamond(g, dfb, dh, dhb);
    VertexField out(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) out[v] = 4.0 * dh[v];
    return out;
}

double dirichlet_energy_explicit(const QuadGraph& g, const VertexField& f) {
    double E = 0.0;
    for (int q = 0; q < g.quad_count(); ++q) {
        const Quad& quad = g.quad(q);
        Complex rho = g.geom(q).rho;
        Complex fb = f[quad.v[2]] - f[quad.v[0]];
        Complex fw = f[quad.v[3]] - f[quad.v[1]];
        E += (std::norm(rho) * std::norm(fb) + std::norm(fw)) / (2.0 * rho.real());
        E += rho.imag() / rho.real() * (fb * std::conj(fw)).real();
    }
    return E;
}

double dirichlet_energy(const QuadGraph& g, const VertexField& f) {
    OneForm df = exterior_d(g, f);
    double E = scalar_product(g, df, df).real();
    double E2 = dirichlet_energy_explicit(g, f);
    if (std::abs(E - E2) > 1e-10 * std::max({1.0, E, E2}))
        raise(ErrorCode::MissingValues, "energy routes disagree: " + std::to_string(E) + " vs " +
                                            std::to_string(E2));
    return E;
}

VertexField harmonic_conjugate(const QuadGraph& g, const VertexField& f, int blackBase,
                               int whiteBase, double tol) {
    if (!is_disk_like(g)) raise(ErrorCode::NotSimplyConnected, "domain is not simply connected");
    double fs = scale_of(f.v);
    for (const auto& x : f.v)
        if (std::abs(x.imag()) > 1e-12 * fs)
            raise(ErrorCode::NotHarmonic, "harmonic conjugate needs a real function");
    VertexField lap = laplacian(g, f);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v) && std::abs(lap[v]) > tol * std::max(1.0, fs))
            raise(ErrorCode::NotHarmonic,
                  "laplacian residual " + std::to_string(std::abs(lap[v])) + " at vertex " +
                      std::to_string(v));
    // star df = -i p dz + i q dzbar with p = d f, q = dbar f
    FaceField df, dfb;
    d_lambda(g, f, df, dfb);
    OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
    for (int q = 0; q < g.quad_count(); ++q) {
        Complex p = -I * df[q], qq = I * dfb[q];
        for (int c = 0; c < 4; ++c) {
            Complex e = g.medial_displacement(MedialEdge(4 * q + c, false));
            w.val[4 * q + c] = p * e + qq * std::conj(e);
        }
    }
    VertexField ft = integrate_diamond_form(g, w, blackBase, whiteBase, {0, 0}, {0, 0});
    for (auto& x : ft.v) x = Complex(x.real(), 0.0);  // real by construction, drop roundoff
    return ft;
}

BWDecomposition contour_decompose(const QuadGraph& g, const MedialPath& contour) {
    if (contour.empty()) raise(ErrorCode::NotContour, "empty contour");
    for (size_t i = 0; i < contour.size(); ++i) {
        const MedialEdge& a = contour[i];
        const MedialEdge& b = contour[(i + 1) % contour.size()];
        if (g.medial_head(a) != g.medial_tail(b))
            raise(ErrorCode::NotContour, "path is not a closed chain");
    }
    BWDecomposition bw;
    for (const auto& e : contour) {
        int q = e.id >> 2, c = e.id & 3;
        const Quad& quad = g.quad(q);
        int v = quad.v[c];
        int from = quad.v[(c + 3) % 4], to = quad.v[(c + 1) % 4];
        if (e.reversed) std::swap(from, to);
        CycleStep step;
        step.quad = q;
        step.from = from;
        step.to = to;
        step.off = v;  // b(Q) for white steps, w(Q) for black steps
        if (g.color(v) == Color::Black)
            bw.white.push_back(step);
        else
            bw.black.push_back(step);
    }
    auto check_chain = [&](const std::vector<CycleStep>& steps) {
        for (size_t i = 0; i < steps.size(); ++i)
            if (steps[i].to != steps[(i + 1) % steps.size()].from)
                raise(ErrorCode::NotContour, "induced cycle does not chain");
    };
    check_chain(bw.white);
    check_chain(bw.black);
    return bw;
}

Complex integrate_f_dz(const QuadGraph& g, const VertexField& f, const MedialPath& path) {
    Complex s{0, 0};
    for (const auto& e : path)
        s += f[g.medial_vertex_of(e.id)] * g.medial_displacement(e);
    return s;
}

Complex integrate_h_dz(const QuadGraph& g, const FaceField& h, const MedialPath& path) {
    Complex s{0, 0};
    for (const auto& e : path) s += h[e.id >> 2] * g.medial_displacement(e);
    return s;
}

Complex integrate_fh_dz(const QuadGraph& g, const VertexField& f, const FaceField& h,
                        const MedialPath& path) {
    Complex s{0, 0};
    for (const auto& e : path)
        s += f[g.medial_vertex_of(e.id)] * h[e.id >> 2] * g.medial_displacement(e);
    return s;
}

double bw_lemma_residual(const QuadGraph& g, const MedialPath& contour, const VertexField& f,
                         const FaceField& h) {
    BWDecomposition bw = contour_decompose(g, contour);
    Complex w{0, 0}, b{0, 0};
    for (const auto& s : bw.white)
        w += f[s.off] * h[s.quad] * (g.pos(s.to) - g.pos(s.from));
    for (const auto& s : bw.black)
        b += f[s.off] * h[s.quad] * (g.pos(s.to) - g.pos(s.from));
    Complex p = integrate_fh_dz(g, f, h, contour);
    return std::abs(w + b - 2.0 * p);
}

double bw_leibniz_residual(const QuadGraph& g, const MedialPath& contour, const VertexField& f,
                           const VertexField& g2) {
    BWDecomposition bw = contour_decompose(g, contour);
    FaceField dg, dgb, df, dfb;
    d_lambda(g, g2, dg, dgb);
    d_lambda(g, f, df, dfb);
    Complex w{0, 0}, b{0, 0};
    for (const auto& s : bw.white) {
        Complex dz = g.pos(s.to) - g.pos(s.from);
        w += f[s.off] * (dg[s.quad] * dz + dgb[s.quad] * std::conj(dz));
    }
    for (const auto& s : bw.black) {
        Complex dz = g.pos(s.to) - g.pos(s.from);
        b += g2[s.off] * (df[s.quad] * dz + dfb[s.quad] * std::conj(dz));
    }
    return std::abs(w + b);
}

VertexField sample_vertex(const QuadGraph& g, const std::function<Complex(Complex)>& fn) {
    VertexField f(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) f[v] = fn(g.pos(v));
    return f;
}

FaceField sample_face(const QuadGraph& g, const std::function<Complex(Complex)>& fn) {
    FaceField h(g.quad_count());
    for (int q = 0; q < g.quad_count(); ++q) h[q] = fn(g.geom(q).center);
    return h;
}

} // namespace quadcalc
