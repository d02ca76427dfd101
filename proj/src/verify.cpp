#include "quadcalc/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "quadcalc/elliptic.hpp"
#include "quadcalc/forms.hpp"
#include "quadcalc/kernels.hpp"
#include "quadcalc/operators.hpp"

namespace quadcalc {

namespace {

const Complex I{0.0, 1.0};

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Complex rand_c(std::mt19937_64& rng) {
    return Complex(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0);
}

void push(std::vector<CheckResult>& out, const std::string& name, double worst, double tol) {
    out.push_back({name, worst, tol, worst <= tol});
}

MedialPath random_contour(const QuadGraph& g, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        int seed = static_cast<int>(rng() % g.quad_count());
        int rings = 1 + static_cast<int>(rng() % 3);
        try {
            return g.boundary_contour(g.quad_neighborhood({seed}, rings));
        } catch (const Error&) {
            continue;  // region not disk-like near the rim; try again
        }
    }
    return g.cycle_PQ(0);
}

} // namespace

std::vector<int> boundary_depth(const QuadGraph& g) {
    // quad-layer depth: vertices sharing a quad with layer-k vertices are at
    // most layer k+1, boundary vertices at layer 0
    std::vector<int> d(g.vertex_count(), -1);
    std::vector<int> frontier;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_boundary(v)) {
            d[v] = 0;
            frontier.push_back(v);
        }
    int layer = 0;
    while (!frontier.empty()) {
        ++layer;
        std::vector<int> next;
        for (int v : frontier)
            for (const auto& se : g.star(v))
                for (int c = 0; c < 4; ++c) {
                    int w = g.quad(se.quad).v[c];
                    if (d[w] < 0) {
                        d[w] = layer;
                        next.push_back(w);
                    }
                }
        frontier = std::move(next);
    }
    return d;
}

VertexField random_vertex_field(const QuadGraph& g, std::uint64_t seed, bool realOnly,
                                int zeroBoundaryRings) {
    std::mt19937_64 rng(seed);
    std::vector<int> depth = zeroBoundaryRings > 0 ? boundary_depth(g) : std::vector<int>();
    VertexField f(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        Complex x = rand_c(rng);
        if (realOnly) x = Complex(x.real(), 0.0);
        if (zeroBoundaryRings > 0 && depth[v] < zeroBoundaryRings) x = 0.0;
        f[v] = x;
    }
    return f;
}

FaceField random_face_field(const QuadGraph& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dull);
    FaceField h(g.quad_count());
    for (int q = 0; q < g.quad_count(); ++q) h[q] = rand_c(rng);
    return h;
}

VertexField holomorphic_from_harmonic(const QuadGraph& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    DirichletProblem p;
    p.boundary.assign(g.vertex_count(), Complex(0, 0));
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_boundary(v)) p.boundary[v] = Complex(2.0 * uniform01(rng) - 1.0, 0.0);
    p.tolerance = 1e-12;
    VertexField u = solve_dirichlet(g, p);
    int blackBase = -1, whiteBase = -1;
    for (int v = 0; v < g.vertex_count() && (blackBase < 0 || whiteBase < 0); ++v) {
        if (g.color(v) == Color::Black && blackBase < 0) blackBase = v;
        if (g.color(v) == Color::White && whiteBase < 0) whiteBase = v;
    }
    VertexField ut = harmonic_conjugate(g, u, blackBase, whiteBase, 1e-7);
    VertexField f(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) f[v] = u[v] + I * ut[v];
    return f;
}

std::vector<CheckResult> verify_identities(const QuadGraph& g, std::uint64_t seed) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(seed);

    // geometry
    {
        double wLam = 0.0, wRho = 0.0, wAr = 0.0, wCyc = 0.0;
        for (int q = 0; q < g.quad_count(); ++q) {
            const QuadGeometry& ge = g.geom(q);
            wLam = std::max(wLam, std::abs(ge.lambda + std::conj(ge.lambda) - 1.0));
            wRho = std::max(wRho, ge.rho.real() > 0 ? 0.0 : 1.0);
            std::vector<Complex> mids;
            for (int c = 0; c < 4; ++c)
                mids.push_back(0.5 * (g.quad_vertex_pos(q, c) + g.quad_vertex_pos(q, c + 1)));
            wAr = std::max(wAr, std::abs(ge.ar_FQ - 2.0 * signed_shoelace_area(mids)));
            Complex s{0, 0};
            for (const auto& e : g.cycle_PQ(q)) s += g.medial_displacement(e);
            wCyc = std::max(wCyc, std::abs(s));
        }
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (g.is_boundary(v)) continue;
            Complex s{0, 0};
            for (const auto& e : g.cycle_Pv(v)) s += g.medial_displacement(e);
            wCyc = std::max(wCyc, std::abs(s));
        }
        push(out, "lambda+conj(lambda)=1", wLam, 1e-14);
        push(out, "Re(rho)>0", wRho, 0.0);
        push(out, "ar(F_Q) vs shoelace", wAr, 1e-12);
        push(out, "elementary cycle closure", wCyc, 1e-13);
    }

    VertexField f = random_vertex_field(g, rng());
    VertexField f2 = random_vertex_field(g, rng());
    FaceField hrand = random_face_field(g, rng());

    // Stokes, edge form: int_e df = (f(v'+) - f(v'-))/2 against the local
    // representation d f = p dz + q dzbar
    {
        FaceField p, q;
        d_lambda(g, f, p, q);
        OneForm df = exterior_d(g, f);
        double worst = 0.0;
        for (int qq = 0; qq < g.quad_count(); ++qq)
            for (int c = 0; c < 4; ++c) {
                Complex e = g.medial_displacement(MedialEdge(4 * qq + c, false));
                Complex local = p[qq] * e + q[qq] * std::conj(e);
                worst = std::max(worst, std::abs(local - df.val[4 * qq + c]));
            }
        push(out, "Stokes edge form (df)", worst, 1e-12);
    }

    // Stokes, face form: local-coefficient two-form equals the boundary sums
    {
        OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
        std::vector<Complex> pc(g.quad_count()), qc(g.quad_count());
        for (int q = 0; q < g.quad_count(); ++q) {
            pc[q] = rand_c(rng);
            qc[q] = rand_c(rng);
            for (int c = 0; c < 4; ++c) {
                Complex e = g.medial_displacement(MedialEdge(4 * q + c, false));
                w.val[4 * q + c] = pc[q] * e + qc[q] * std::conj(e);
            }
        }
        FaceField P(g.quad_count()), Q(g.quad_count());
        for (int q = 0; q < g.quad_count(); ++q) {
            P[q] = pc[q];
            Q[q] = qc[q];
        }
        VertexField dP, dPb, dQ, dQb;
        d_diamond(g, P, dP, dPb);
        d_diamond(g, Q, dQ, dQb);
        TwoForm dw = exterior_d(g, w);
        double worst = 0.0;
        for (int q = 0; q < g.quad_count(); ++q) worst = std::max(worst, std::abs(dw.onQuad[q]));
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (g.is_boundary(v)) continue;
            Complex local = (dQ[v] - dPb[v]) * (-2.0 * I * g.ar_Fv(v));
            worst = std::max(worst, std::abs(local - dw.onVertex[v]));
        }
        push(out, "Stokes face form (type-diamond)", worst, 1e-12);

        // Leibniz: d(f w) = df ^ w + f dw, face by face
        OneForm fw = product(g, f, w);
        TwoForm dfw = exterior_d(g, fw);
        TwoForm wedgePart = wedge(g, exterior_d(g, f), w);
        TwoForm fdw = product(g, f, dw);
        double worstL = 0.0;
        for (int q = 0; q < g.quad_count(); ++q)
            worstL = std::max(worstL, std::abs(dfw.onQuad[q] - wedgePart.onQuad[q]));
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v))
                worstL = std::max(worstL, std::abs(dfw.onVertex[v] - fdw.onVertex[v]));
        push(out, "Leibniz d(fw)=df^w+f dw", worstL, 1e-11);
    }

    // ddf = 0
    {
        TwoForm ddf = exterior_d(g, exterior_d(g, f));
        double worst = 0.0;
        for (int q = 0; q < g.quad_count(); ++q) worst = std::max(worst, std::abs(ddf.onQuad[q]));
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) worst = std::max(worst, std::abs(ddf.onVertex[v]));
        push(out, "ddf = 0", worst, 1e-12);
    }

    // Hodge involutions
    {
        OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
        for (int q = 0; q < g.quad_count(); ++q) {
            Complex pc = rand_c(rng), qc = rand_c(rng);
            for (int c = 0; c < 4; ++c) {
                Complex e = g.medial_displacement(MedialEdge(4 * q + c, false));
                w.val[4 * q + c] = pc * e + qc * std::conj(e);
            }
        }
        OneForm ssw = hodge(g, hodge(g, w));
        double worst = 0.0;
        for (int e = 0; e < g.medial_edge_count(); ++e)
            worst = std::max(worst, std::abs(ssw.val[e] + w.val[e]));
        VertexField vf = random_vertex_field(g, rng());
        VertexField vf2;
        hodge(g, hodge(g, vf), &vf2, nullptr);
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) worst = std::max(worst, std::abs(vf2[v] - vf[v]));
        FaceField hf = random_face_field(g, rng());
        FaceField hf2;
        hodge(g, hodge(g, hf), nullptr, &hf2);
        for (int q = 0; q < g.quad_count(); ++q)
            worst = std::max(worst, std::abs(hf2[q] - hf[q]));
        push(out, "star^2 = +-Id", worst, 1e-13);

        // cot formula of the Hodge star on one-forms
        OneForm sw = hodge(g, w);
        double worstCot = 0.0;
        for (int q = 0; q < g.quad_count(); ++q) {
            double phi = g.geom(q).phi;
            MedialEdge e(4 * q + 1, false), es(4 * q + 2, false);
            double le = std::abs(g.medial_displacement(e)), les = std::abs(g.medial_displacement(es));
            Complex lhs = sw.at(e);
            Complex rhs = w.at(e) / std::tan(phi) - le / (les * std::sin(phi)) * w.at(es);
            worstCot = std::max(worstCot, std::abs(lhs - rhs));
            Complex lhs2 = sw.at(es);
            Complex rhs2 = les / (le * std::sin(phi)) * w.at(e) - w.at(es) / std::tan(phi);
            worstCot = std::max(worstCot, std::abs(lhs2 - rhs2));
        }
        push(out, "hodge cot formula", worstCot, 1e-12);
    }

    // derivative vs contour (recomputed here for reporting)
    {
        FaceField a, b, ca, cb;
        d_lambda(g, f, a, b);
        d_lambda_contour(g, f, ca, cb);
        double worst = 0.0;
        for (int q = 0; q < g.quad_count(); ++q)
            worst = std::max({worst, std::abs(a[q] - ca[q]), std::abs(b[q] - cb[q])});
        push(out, "derivative vs contour", worst, 1e-12);
    }

    // Laplacian stencil vs factorization
    {
        VertexField l1 = laplacian(g, f);
        VertexField l2 = laplacian_factored(g, f);
        double worst = 0.0;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) worst = std::max(worst, std::abs(l1[v] - l2[v]));
        push(out, "laplacian stencil vs 4 d_diamond dbar_lambda", worst, 1e-11);
    }

    // Green's identities on the whole domain
    {
        std::vector<int> all(g.quad_count());
        for (int q = 0; q < g.quad_count(); ++q) all[q] = q;
        MedialPath boundary = g.boundary_contour(all);
        VertexField gg = f2;
        VertexField lapf = laplacian(g, f), lapg = laplacian(g, gg);
        Complex ip_f_lapg{0, 0}, ip_lapf_g{0, 0};
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (!g.is_interior(v)) continue;
            ip_f_lapg += f[v] * std::conj(lapg[v]) * g.ar_Fv(v);
            ip_lapf_g += lapf[v] * std::conj(gg[v]) * g.ar_Fv(v);
        }
        OneForm df = exterior_d(g, f), dgg = exterior_d(g, gg);
        Complex ip_df_dg = scalar_product(g, df, dgg);
        // conjugate field and its star-derivative as a one-form
        VertexField gbar(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v) gbar[v] = std::conj(gg[v]);
        OneForm sdgbar = hodge(g, exterior_d(g, gbar));
        OneForm fsdgbar = product(g, f, sdgbar);
        Complex rhs1 = integrate_one(g, fsdgbar, boundary);
        double scale1 = std::max({1.0, std::abs(ip_f_lapg), std::abs(ip_df_dg), std::abs(rhs1)});
        push(out, "Green first identity", std::abs(ip_f_lapg + ip_df_dg - rhs1) / scale1, 1e-10);

        OneForm sdf = hodge(g, exterior_d(g, f));
        // gbar times star df, edge by edge
        OneForm gsdf(g.medial_edge_count(), OneFormType::Generic);
        for (int q = 0; q < g.quad_count(); ++q)
            for (int c = 0; c < 4; ++c) {
                int e = 4 * q + c;
                gsdf.val[e] = std::conj(gg[g.quad(q).v[c]]) * sdf.val[e];
            }
        // second identity, with the boundary term oriented as in the smooth
        // case: <lap f, g> - <f, lap g> = closed integral of (gbar star df - f star dgbar)
        Complex rhs2 = integrate_one(g, gsdf, boundary) - integrate_one(g, fsdgbar, boundary);
        Complex lhs2 = ip_lapf_g - ip_f_lapg;
        double scale2 = std::max({1.0, std::abs(lhs2), std::abs(rhs2)});
        push(out, "Green second identity", std::abs(lhs2 - rhs2) / scale2, 1e-10);
    }

    // adjointness of the derivatives (compactly supported f)
    {
        VertexField fc = random_vertex_field(g, rng(), false, 1);
        FaceField h = random_face_field(g, rng());
        FaceField df, dfb;
        d_lambda(g, fc, df, dfb);
        VertexField dh, dhb;
        d_diamond(g, h, dh, dhb);
        Complex a1 = scalar_product(g, df, h);
        VertexField dhbField(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) dhbField[v] = dhb[v];
        Complex a2 = scalar_product(g, fc, dhbField);
        double w1 = std::abs(a1 + a2) / std::max({1.0, std::abs(a1), std::abs(a2)});
        Complex b1 = scalar_product(g, dfb, h);
        VertexField dhField(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) dhField[v] = dh[v];
        Complex b2 = scalar_product(g, fc, dhField);
        double w2 = std::abs(b1 + b2) / std::max({1.0, std::abs(b1), std::abs(b2)});
        push(out, "adjointness of d_lambda / d_diamond", std::max(w1, w2), 1e-11);
    }

    // adjointness of d and delta
    {
        VertexField fc = random_vertex_field(g, rng(), false, 1);
        OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
        for (int q = 0; q < g.quad_count(); ++q) {
            Complex pc = rand_c(rng), qc = rand_c(rng);
            bool nearBoundary = false;
            for (int c = 0; c < 4; ++c)
                if (g.is_boundary(g.quad(q).v[c])) nearBoundary = true;
            if (nearBoundary) pc = qc = 0.0;
            for (int c = 0; c < 4; ++c) {
                Complex e = g.medial_displacement(MedialEdge(4 * q + c, false));
                w.val[4 * q + c] = pc * e + qc * std::conj(e);
            }
        }
        OneForm dfc = exterior_d(g, fc);
        Complex lhs = scalar_product(g, dfc, w);
        VertexField dw = codifferential(g, w);
        Complex rhs = scalar_product(g, fc, dw);
        double w1 = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
        push(out, "adjointness of d / delta", w1, 1e-11);
    }

    // Morera on random contours with a discrete holomorphic field
    {
        VertexField hol = holomorphic_from_harmonic(g, rng());
        FaceField dhol, dholb;
        d_lambda(g, hol, dhol, dholb);
        double scale = 1.0;
        for (const auto& x : hol.v) scale = std::max(scale, std::abs(x));
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            MedialPath contour = random_contour(g, rng);
            worst = std::max(worst, std::abs(integrate_f_dz(g, hol, contour)));
            worst = std::max(worst, std::abs(integrate_h_dz(g, dhol, contour)));
        }
        push(out, "Morera on 50 random contours", worst / scale, 1e-11);

        // holomorphic implies harmonic; derivative is diamond-holomorphic
        VertexField lap = laplacian(g, hol);
        double wh = 0.0;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) wh = std::max(wh, std::abs(lap[v]));
        HolomorphicityReport rep = check_holomorphic(g, dhol);
        push(out, "holomorphic => harmonic", wh / scale, 1e-11);
        push(out, "d_lambda of harmonic is holomorphic", rep.maxAbs / scale, 1e-11);

        // product closedness
        OneForm pf = product_closed_form(g, hol, f);
        OneForm fhdz = product_fh_dz(g, hol, dhol);
        double wc = 0.0;
        double pscale = scale * scale;
        for (int q = 0; q < g.quad_count(); ++q) {
            wc = std::max(wc, std::abs(integrate_one(g, pf, g.cycle_PQ(q))));
            wc = std::max(wc, std::abs(integrate_one(g, fhdz, g.cycle_PQ(q))));
        }
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (!g.is_interior(v)) continue;
            wc = std::max(wc, std::abs(integrate_one(g, pf, g.cycle_Pv(v))));
            wc = std::max(wc, std::abs(integrate_one(g, fhdz, g.cycle_Pv(v))));
        }
        push(out, "product closedness", wc / pscale, 1e-10);

        // Weyl: <hol, laplacian g> = 0 for g vanishing near the boundary
        double ww = 0.0;
        for (int k = 0; k < 50; ++k) {
            VertexField gc = random_vertex_field(g, rng(), false, 2);
            VertexField lg = laplacian(g, gc);
            Complex ip{0, 0};
            for (int v = 0; v < g.vertex_count(); ++v)
                if (g.is_interior(v)) ip += hol[v] * std::conj(lg[v]) * g.ar_Fv(v);
            ww = std::max(ww, std::abs(ip));
        }
        push(out, "Weyl lemma", ww / scale, 1e-10);

        // black/white contour identities
        double wbw = 0.0;
        for (int k = 0; k < 10; ++k) {
            MedialPath contour = random_contour(g, rng);
            wbw = std::max(wbw, bw_lemma_residual(g, contour, f, hrand));
            wbw = std::max(wbw, bw_leibniz_residual(g, contour, f, f2));
        }
        push(out, "black/white cycle identities", wbw, 1e-11);
    }

    // biconstant kernel of the derivatives
    {
        VertexField bc(g.vertex_count());
        Complex cb = rand_c(rng), cw = rand_c(rng);
        for (int v = 0; v < g.vertex_count(); ++v)
            bc[v] = g.color(v) == Color::Black ? cb : cw;
        FaceField d1, d2;
        d_lambda(g, bc, d1, d2);
        double w0 = 0.0;
        for (int q = 0; q < g.quad_count(); ++q)
            w0 = std::max({w0, std::abs(d1[q]), std::abs(d2[q])});
        // a non-biconstant perturbation must show a nonzero derivative
        VertexField pert = bc;
        pert.v[g.quad(0).v[0]] += 1.0;
        FaceField p1, p2;
        d_lambda(g, pert, p1, p2);
        double wp = 0.0;
        for (int q = 0; q < g.quad_count(); ++q) wp = std::max(wp, std::abs(p1[q]));
        push(out, "biconstant derivative kernel", w0 + (wp > 1e-6 ? 0.0 : 1.0), 1e-13);
    }

    return out;
}

std::vector<CheckResult> verify_parallelogram(const QuadGraph& g, std::uint64_t seed) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(seed);
    if (!g.is_parallelogram_graph()) {
        push(out, "parallelogram graph", 1.0, 0.0);
        return out;
    }
    // opposite sides equal
    {
        double w = 0.0;
        for (int q = 0; q < g.quad_count(); ++q) {
            Complex s1 = g.quad_vertex_pos(q, 1) - g.quad_vertex_pos(q, 0);
            Complex s2 = g.quad_vertex_pos(q, 2) - g.quad_vertex_pos(q, 3);
            Complex t1 = g.quad_vertex_pos(q, 3) - g.quad_vertex_pos(q, 0);
            Complex t2 = g.quad_vertex_pos(q, 2) - g.quad_vertex_pos(q, 1);
            w = std::max({w, std::abs(s1 - s2), std::abs(t1 - t2)});
        }
        push(out, "opposite sides equal", w, 1e-12);
    }
    // strips: all crossed edges share the common parallel
    {
        double w = 0.0;
        for (const auto& st : g.strips()) {
            for (int e : st.crossed_edges) {
                auto [a, b] = g.lambda_edge(e);
                Complex d = g.pos(b) - g.pos(a);
                w = std::max(w, std::min(std::abs(d - st.common_parallel),
                                         std::abs(d + st.common_parallel)));
            }
        }
        push(out, "strip common parallels", w, 1e-12);
    }
    // cone path coverage and angle spread
    {
        int v0 = 0;
        double bestDist = 1e300;
        Complex c{0, 0};
        for (int v = 0; v < g.vertex_count(); ++v) c += g.pos(v);
        c /= double(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v)
            if (std::abs(g.pos(v) - c) < bestDist) {
                bestDist = std::abs(g.pos(v) - c);
                v0 = v;
            }
        QuadGraph::ConePathIndex idx(g, v0, 0.0);
        double w = 0.0;
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (!idx.reachable(v)) {
                w = 1.0;
                break;
            }
            QuadGraph::ConePath cp = idx.path_to(v);
            if (cp.max_relative_angle >= std::numbers::pi) w = std::max(w, 1.0);
        }
        push(out, "cone path coverage", w, 0.0);
    }
    // averaging preserves holomorphicity; exponential identities
    {
        VertexField hol = holomorphic_from_harmonic(g, rng());
        double scale = 1.0;
        for (const auto& x : hol.v) scale = std::max(scale, std::abs(x));
        FaceField m = average(g, hol);
        HolomorphicityReport rep = check_holomorphic(g, m);
        push(out, "averaging preserves holomorphicity", rep.maxAbs / scale, 1e-11);

        int v0 = g.quad(g.quad_count() / 2).v[0];
        double wexp = 0.0, wpar = 0.0, wder = 0.0;
        for (int k = 0; k < 20; ++k) {
            Complex lam = 0.35 * rand_c(rng);
            VertexField ef(g.vertex_count());
            bool poleHit = false;
            try {
                for (int v = 0; v < g.vertex_count(); ++v)
                    ef[v] = discrete_exp2(g, lam, v, v0);
            } catch (const Error&) {
                poleHit = true;
            }
            if (poleHit) continue;
            double es = 0.0;
            for (const auto& x : ef.v) es = std::max(es, std::abs(x));
            HolomorphicityReport er = check_holomorphic(g, ef);
            wexp = std::max(wexp, er.maxAbs / es);
            FaceField de, deb;
            d_lambda(g, ef, de, deb);
            for (int q = 0; q < g.quad_count(); ++q) {
                Complex expected = lam * discrete_exp2_face(g, lam, q, v0);
                wder = std::max(wder, std::abs(de[q] - expected) / es);
            }
        }
        // path independence of the exponential over the quad cycles
        for (int k = 0; k < 20; ++k) {
            int q = static_cast<int>(rng() % g.quad_count());
            Complex lam = 2.5 * rand_c(rng) + Complex(3.0, 0);
            const Quad& quad = g.quad(q);
            std::vector<int> a = {quad.v[0], quad.v[1], quad.v[2]};
            std::vector<int> b = {quad.v[0], quad.v[3], quad.v[2]};
            Complex va = exp_along_path(g, lam, a), vb = exp_along_path(g, lam, b);
            wpar = std::max(wpar, std::abs(va - vb) / std::max(1.0, std::abs(va)));
        }
        push(out, "exponential holomorphicity", wexp, 1e-11);
        push(out, "d_lambda exp = lambda exp", wder, 1e-11);
        push(out, "exponential path independence", wpar, 1e-11);
    }
    // J and tau path independence across base corner choices
    {
        double w = 0.0;
        for (int k = 0; k < 20; ++k) {
            int q = static_cast<int>(rng() % g.quad_count());
            int v0 = static_cast<int>(rng() % g.vertex_count());
            PathSums a = path_sums_vq(g, q, v0);
            // recompute from another corner by hand
            const Quad& quad = g.quad(q);
            int vb = quad.v[2];
            PathSums base = path_sums_vv(g, vb, v0);
            Complex d1 = g.pos(quad.v[3]) - g.pos(vb);
            Complex d2 = g.pos(quad.v[1]) - g.pos(vb);
            Complex J2 = base.J + 0.5 * (1.0 / d1 + 1.0 / d2);
            double sign = g.color(vb) == g.color(v0) ? 1.0 : -1.0;
            Complex tau2 = sign / (d1 * d2);
            w = std::max({w, std::abs(a.J - J2) / std::max(1.0, std::abs(a.J)),
                          std::abs(a.tau - tau2) / std::max(1.0, std::abs(a.tau))});
        }
        push(out, "J and tau corner independence", w, 1e-11);
    }
    return out;
}

std::string format_check_table(const std::vector<CheckResult>& rows) {
    std::ostringstream out;
    for (const auto& r : rows) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-45s %-5s worst=%.3e tol=%.3e\n", r.name.c_str(),
                      r.pass ? "PASS" : "FAIL", r.worst, r.tol);
        out << buf;
    }
    return out.str();
}

bool all_pass(const std::vector<CheckResult>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

} // namespace quadcalc
