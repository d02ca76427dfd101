#include "quadcalc/forms.hpp"

#include <cmath>
#include <sstream>

#include "quadcalc/graph_io.hpp"
#include "quadcalc/operators.hpp"

namespace quadcalc {

namespace {

const Complex I{0.0, 1.0};

} // namespace

OneForm form_dz(const QuadGraph& g) {
    OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
    for (int e = 0; e < g.medial_edge_count(); ++e)
        w.val[e] = g.medial_displacement(MedialEdge(e, false));
    return w;
}

OneForm form_dzbar(const QuadGraph& g) {
    OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
    for (int e = 0; e < g.medial_edge_count(); ++e)
        w.val[e] = std::conj(g.medial_displacement(MedialEdge(e, false)));
    return w;
}

TwoForm omega_lambda(const QuadGraph& g) {
    TwoForm W(g, TwoFormType::TypeLambda);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) W.onVertex[v] = -2.0 * I * g.ar_Fv(v);
    return W;
}

TwoForm omega_diamond(const QuadGraph& g) {
    TwoForm W(g, TwoFormType::TypeDiamond);
    for (int q = 0; q < g.quad_count(); ++q) W.onQuad[q] = -2.0 * I * g.geom(q).ar_FQ;
    return W;
}

Complex integrate_one(const QuadGraph& g, const OneForm& w, const MedialPath& path) {
    Complex s{0, 0};
    for (const auto& e : path) {
        if (e.id < 0 || e.id >= g.medial_edge_count())
            raise(ErrorCode::EdgeNotInGraph, "medial edge id out of range");
        s += w.at(e);
    }
    return s;
}

OneForm exterior_d(const QuadGraph& g, const VertexField& f) {
    if (f.size() != g.vertex_count()) raise(ErrorCode::MissingValues, "field size mismatch");
    OneForm w(g.medial_edge_count(), OneFormType::TypeDiamond);
    for (int q = 0; q < g.quad_count(); ++q) {
        const Quad& quad = g.quad(q);
        for (int c = 0; c < 4; ++c) {
            Complex next = f[quad.v[(c + 1) % 4]];
            Complex prev = f[quad.v[(c + 3) % 4]];
            w.val[4 * q + c] = 0.5 * (next - prev);
        }
    }
    return w;
}

OneForm exterior_d(const QuadGraph& g, const FaceField& h) {
    if (h.size() != g.quad_count()) raise(ErrorCode::MissingValues, "field size mismatch");
    OneForm w(g.medial_edge_count(), OneFormType::TypeLambda);
    std::fill(w.has.begin(), w.has.end(), 0);
    VertexField dh, dhb;
    d_diamond(g, h, dh, dhb);
    for (int q = 0; q < g.quad_count(); ++q) {
        const Quad& quad = g.quad(q);
        for (int c = 0; c < 4; ++c) {
            int v = quad.v[c];
            if (g.is_boundary(v)) continue;
            Complex e = g.medial_displacement(MedialEdge(4 * q + c, false));
            w.val[4 * q + c] = dh[v] * e + dhb[v] * std::conj(e);
            w.has[4 * q + c] = 1;
        }
    }
    return w;
}

TwoForm exterior_d(const QuadGraph& g, const OneForm& w) {
    TwoForm W(g, w.type == OneFormType::TypeDiamond ? TwoFormType::TypeLambda : TwoFormType::Mixed);
    for (int q = 0; q < g.quad_count(); ++q)
        W.onQuad[q] = integrate_one(g, w, g.cycle_PQ(q));
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) W.onVertex[v] = integrate_one(g, w, g.cycle_Pv(v));
    return W;
}

std::pair<Complex, Complex> decompose_diamond(const QuadGraph& g, const OneForm& w, int q) {
    // edges parallel to the black diagonal: corners 1 (w-) and 3 (w+);
    // parallel to the white diagonal: corners 2 (b+) and 0 (b-)
    Complex ie = w.at(MedialEdge(4 * q + 1, false));
    Complex ieOpp = w.at(MedialEdge(4 * q + 3, false));
    Complex ies = w.at(MedialEdge(4 * q + 2, false));
    Complex iesOpp = w.at(MedialEdge(4 * q + 0, false));
    double scale = std::max({std::abs(ie), std::abs(ieOpp), std::abs(ies), std::abs(iesOpp), 1e-300});
    if (std::abs(ie + ieOpp) > 1e-9 * scale || std::abs(ies + iesOpp) > 1e-9 * scale)
        raise(ErrorCode::NotTypeDiamond, "parallel medial edges of F_Q carry unequal values");
    Complex e = g.medial_displacement(MedialEdge(4 * q + 1, false));   // (b+ - b-)/2
    Complex es = g.medial_displacement(MedialEdge(4 * q + 2, false));  // (w+ - w-)/2
    Complex lam = g.geom(q).lambda;
    Complex p = lam * ie / e + std::conj(lam) * ies / es;
    Complex qq = std::conj(lam) * ie / std::conj(e) + lam * ies / std::conj(es);
    return {p, qq};
}

OneForm wedge_check_type(const QuadGraph& g, const OneForm& w) {
    if (w.type != OneFormType::TypeDiamond)
        raise(ErrorCode::NotTypeDiamond, "operation requires a type-Diamond one-form");
    (void)g;
    return w;
}

TwoForm wedge(const QuadGraph& g, const OneForm& a, const OneForm& b) {
    if (a.type != OneFormType::TypeDiamond || b.type != OneFormType::TypeDiamond)
        raise(ErrorCode::NotTypeDiamond, "wedge requires type-Diamond one-forms");
    TwoForm W(g, TwoFormType::TypeDiamond);
    for (int q = 0; q < g.quad_count(); ++q) {
        auto [p, qa] = decompose_diamond(g, a, q);
        auto [pp, qb] = decompose_diamond(g, b, q);
        W.onQuad[q] = (p * qb - qa * pp) * (-2.0 * I * g.geom(q).ar_FQ);
    }
    return W;
}

TwoForm hodge(const QuadGraph& g, const VertexField& f) {
    TwoForm W(g, TwoFormType::TypeLambda);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) W.onVertex[v] = -f[v] / (2.0 * I) * (-2.0 * I * g.ar_Fv(v));
    return W;
}

TwoForm hodge(const QuadGraph& g, const FaceField& h) {
    TwoForm W(g, TwoFormType::TypeDiamond);
    for (int q = 0; q < g.quad_count(); ++q)
        W.onQuad[q] = -h[q] / (2.0 * I) * (-2.0 * I * g.geom(q).ar_FQ);
    return W;
}

OneForm hodge(const QuadGraph& g, const OneForm& w) {
    if (w.type != OneFormType::TypeDiamond)
        raise(ErrorCode::NotTypeDiamond, "hodge star of one-forms requires type Diamond");
    OneForm out(g.medial_edge_count(), OneFormType::TypeDiamond);
    for (int q = 0; q < g.quad_count(); ++q) {
        auto [p, qq] = decompose_diamond(g, w, q);
        Complex sp = -I * p, sq = I * qq;
        for (int c = 0; c < 4; ++c) {
            Complex e = g.medial_displacement(MedialEdge(4 * q + c, false));
            out.val[4 * q + c] = sp * e + sq * std::conj(e);
        }
    }
    return out;
}

void hodge(const QuadGraph& g, const TwoForm& W, VertexField* outV, FaceField* outH) {
    if (W.type == TwoFormType::TypeLambda) {
        if (!outV) raise(ErrorCode::TypeMismatch, "type-Lambda two-form dualizes to a vertex function");
        *outV = VertexField(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v))
                outV->v[v] = -2.0 * I * W.onVertex[v] / (-2.0 * I * g.ar_Fv(v));
    } else if (W.type == TwoFormType::TypeDiamond) {
        if (!outH) raise(ErrorCode::TypeMismatch, "type-Diamond two-form dualizes to a face function");
        *outH = FaceField(g.quad_count());
        for (int q = 0; q < g.quad_count(); ++q)
            outH->v[q] = -2.0 * I * W.onQuad[q] / (-2.0 * I * g.geom(q).ar_FQ);
    } else {
        raise(ErrorCode::TypeMismatch, "hodge star needs a typed two-form");
    }
}

VertexField codifferential(const QuadGraph& g, const OneForm& w) {
    if (w.type != OneFormType::TypeDiamond)
        raise(ErrorCode::TypeMismatch, "codifferential needs a type-Diamond one-form");
    OneForm sw = hodge(g, w);
    VertexField out(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.is_boundary(v)) continue;
        Complex dsw = integrate_one(g, sw, g.cycle_Pv(v));  // d(star w) on F_v
        // star of the type-Lambda two-form, then negate
        out[v] = -(-2.0 * I * dsw / (-2.0 * I * g.ar_Fv(v)));
    }
    return out;
}

OneForm codifferential(const QuadGraph& g, const TwoForm& W) {
    if (W.type != TwoFormType::TypeLambda)
        raise(ErrorCode::TypeMismatch, "codifferential of two-forms needs type Lambda");
    VertexField f;
    hodge(g, W, &f, nullptr);
    OneForm df = exterior_d(g, f);
    OneForm out = hodge(g, df);
    for (auto& x : out.val) x = -x;
    return out;
}

Complex scalar_product(const QuadGraph& g, const VertexField& a, const VertexField& b) {
    if (a.size() != g.vertex_count() || b.size() != g.vertex_count())
        raise(ErrorCode::KindMismatch, "vertex field size mismatch");
    Complex s{0, 0};
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) s += a[v] * std::conj(b[v]) * g.ar_Fv(v);
    return s;
}

Complex scalar_product(const QuadGraph& g, const FaceField& a, const FaceField& b) {
    if (a.size() != g.quad_count() || b.size() != g.quad_count())
        raise(ErrorCode::KindMismatch, "face field size mismatch");
    Complex s{0, 0};
    for (int q = 0; q < g.quad_count(); ++q) s += a[q] * std::conj(b[q]) * g.geom(q).ar_FQ;
    return s;
}

Complex scalar_product(const QuadGraph& g, const OneForm& a, const OneForm& b) {
    if (a.type != OneFormType::TypeDiamond || b.type != OneFormType::TypeDiamond)
        raise(ErrorCode::KindMismatch, "scalar product of one-forms requires type Diamond");
    Complex s{0, 0};
    for (int q = 0; q < g.quad_count(); ++q) {
        auto [p1, q1] = decompose_diamond(g, a, q);
        auto [p2, q2] = decompose_diamond(g, b, q);
        s += 2.0 * g.geom(q).ar_FQ * (p1 * std::conj(p2) + q1 * std::conj(q2));
    }
    return s;
}

Complex scalar_product(const QuadGraph& g, const TwoForm& a, const TwoForm& b) {
    if (a.type != b.type || a.type == TwoFormType::Mixed)
        raise(ErrorCode::KindMismatch, "scalar product of two-forms requires equal pure types");
    Complex s{0, 0};
    if (a.type == TwoFormType::TypeLambda) {
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) {
                double ar = g.ar_Fv(v);
                s += a.onVertex[v] * std::conj(b.onVertex[v]) / ar;
            }
    } else {
        for (int q = 0; q < g.quad_count(); ++q)
            s += a.onQuad[q] * std::conj(b.onQuad[q]) / g.geom(q).ar_FQ;
    }
    return s;
}

OneForm product(const QuadGraph& g, const VertexField& f, const OneForm& w) {
    OneForm out(g.medial_edge_count(), OneFormType::Generic);
    out.has = w.has;
    for (int q = 0; q < g.quad_count(); ++q)
        for (int c = 0; c < 4; ++c) {
            int e = 4 * q + c;
            if (w.has[e]) out.val[e] = f[g.quad(q).v[c]] * w.val[e];
        }
    return out;
}

OneForm product(const QuadGraph& g, const FaceField& h, const OneForm& w) {
    OneForm out(g.medial_edge_count(), OneFormType::Generic);
    out.has = w.has;
    for (int q = 0; q < g.quad_count(); ++q)
        for (int c = 0; c < 4; ++c) {
            int e = 4 * q + c;
            if (w.has[e]) out.val[e] = h[q] * w.val[e];
        }
    return out;
}

TwoForm product(const QuadGraph& g, const VertexField& f, const TwoForm& W) {
    if (W.type != TwoFormType::TypeLambda)
        raise(ErrorCode::TypeMismatch, "f * Omega needs a type-Lambda two-form");
    TwoForm out(g, TwoFormType::TypeLambda);
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.is_interior(v)) out.onVertex[v] = f[v] * W.onVertex[v];
    return out;
}

TwoForm product(const QuadGraph& g, const FaceField& h, const TwoForm& W) {
    if (W.type != TwoFormType::TypeDiamond)
        raise(ErrorCode::TypeMismatch, "h * Omega needs a type-Diamond two-form");
    TwoForm out(g, TwoFormType::TypeDiamond);
    for (int q = 0; q < g.quad_count(); ++q) out.onQuad[q] = h[q] * W.onQuad[q];
    return out;
}

OneForm product_fh_dz(const QuadGraph& g, const VertexField& f, const FaceField& h) {
    OneForm out(g.medial_edge_count(), OneFormType::Generic);
    for (int q = 0; q < g.quad_count(); ++q)
        for (int c = 0; c < 4; ++c) {
            int e = 4 * q + c;
            out.val[e] = f[g.quad(q).v[c]] * h[q] * g.medial_displacement(MedialEdge(e, false));
        }
    return out;
}

OneForm product_closed_form(const QuadGraph& g, const VertexField& f, const VertexField& g2) {
    OneForm df = exterior_d(g, f);
    OneForm dg = exterior_d(g, g2);
    OneForm a = product(g, f, dg);
    OneForm b = product(g, g2, df);
    OneForm out(g.medial_edge_count(), OneFormType::Generic);
    for (int e = 0; e < g.medial_edge_count(); ++e) out.val[e] = a.val[e] + b.val[e];
    return out;
}

std::string one_form_to_csv(const OneForm& w) {
    std::ostringstream out;
    out << "edge_id,re,im\n";
    for (size_t e = 0; e < w.val.size(); ++e)
        if (w.has[e])
            out << e << "," << format_double(w.val[e].real()) << ","
                << format_double(w.val[e].imag()) << "\n";
    return out.str();
}

std::string two_form_to_csv(const QuadGraph& g, const TwoForm& W) {
    std::ostringstream out;
    out << "face_id,re,im\n";
    for (int q = 0; q < g.quad_count(); ++q)
        out << "Q" << q << "," << format_double(W.onQuad[q].real()) << ","
            << format_double(W.onQuad[q].imag()) << "\n";
    for (int v = 0; v < g.vertex_count(); ++v)
        if (v < static_cast<int>(W.hasVertex.size()) && W.hasVertex[v])
            out << "V" << v << "," << format_double(W.onVertex[v].real()) << ","
                << format_double(W.onVertex[v].imag()) << "\n";
    return out.str();
}

} // namespace quadcalc
