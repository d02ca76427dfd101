#pragma once

#include <vector>

#include "quadcalc/quadgraph.hpp"

namespace quadcalc {

/// Complex function on V(Lambda).
struct VertexField {
    std::vector<Complex> v;

    VertexField() = default;
    explicit VertexField(int n, Complex fill = {0, 0}) : v(n, fill) {}
    Complex& operator[](int i) { return v[i]; }
    Complex operator[](int i) const { return v[i]; }
    int size() const { return static_cast<int>(v.size()); }
};

/// Complex function on V(Diamond), i.e. on the quads.
struct FaceField {
    std::vector<Complex> v;

    FaceField() = default;
    explicit FaceField(int n, Complex fill = {0, 0}) : v(n, fill) {}
    Complex& operator[](int i) { return v[i]; }
    Complex operator[](int i) const { return v[i]; }
    int size() const { return static_cast<int>(v.size()); }
};

enum class OneFormType { Generic, TypeDiamond, TypeLambda };
enum class TwoFormType { TypeLambda, TypeDiamond, Mixed };

/// Discrete one-form: complex values on oriented medial edges, antisymmetric
/// under reversal. Stored on the canonical orientation (ccw around F_Q).
struct OneForm {
    std::vector<Complex> val;       // by edge id
    std::vector<char> has;          // defined mask
    OneFormType type = OneFormType::Generic;

    explicit OneForm(int edges = 0, OneFormType t = OneFormType::Generic)
        : val(edges, Complex(0, 0)), has(edges, 1), type(t) {}

    Complex at(const MedialEdge& e) const {
        if (!has[e.id]) raise(ErrorCode::MissingValues, "one-form undefined on edge");
        return e.reversed ? -val[e.id] : val[e.id];
    }
    void set(const MedialEdge& e, Complex x) {
        val[e.id] = e.reversed ? -x : x;
        has[e.id] = 1;
    }
};

/// Discrete two-form: complex values on medial faces F_Q (all quads) and F_v
/// (interior vertices).
struct TwoForm {
    std::vector<Complex> onQuad;
    std::vector<Complex> onVertex;  // interior vertices only; others stay 0/undefined
    std::vector<char> hasVertex;
    TwoFormType type = TwoFormType::Mixed;

    TwoForm() = default;
    TwoForm(const QuadGraph& g, TwoFormType t)
        : onQuad(g.quad_count(), Complex(0, 0)),
          onVertex(g.vertex_count(), Complex(0, 0)),
          hasVertex(g.vertex_count(), 0),
          type(t) {
        for (int v = 0; v < g.vertex_count(); ++v)
            if (g.is_interior(v)) hasVertex[v] = 1;
    }
};

// canonical forms
OneForm form_dz(const QuadGraph& g);
OneForm form_dzbar(const QuadGraph& g);
TwoForm omega_lambda(const QuadGraph& g);   // -2i ar(F_v) on vertex faces
TwoForm omega_diamond(const QuadGraph& g);  // -2i ar(F_Q) on quad faces

Complex integrate_one(const QuadGraph& g, const OneForm& w, const MedialPath& path);

/// d of a vertex function: exact midpoint differences (type Diamond).
OneForm exterior_d(const QuadGraph& g, const VertexField& f);
/// d of a face function: local representation d h = dh_z dz + dh_zbar dzbar
/// per vertex star (type Lambda); defined on edges at interior vertices only.
OneForm exterior_d(const QuadGraph& g, const FaceField& h);
/// d of a one-form, via the boundary sums of discrete Stokes.
TwoForm exterior_d(const QuadGraph& g, const OneForm& w);

/// Unique p, q with w = p dz + q dzbar on the four medial edges of quad q.
std::pair<Complex, Complex> decompose_diamond(const QuadGraph& g, const OneForm& w, int q);

OneForm wedge_check_type(const QuadGraph& g, const OneForm& w);  // throws NotTypeDiamond
TwoForm wedge(const QuadGraph& g, const OneForm& a, const OneForm& b);

// Hodge star
TwoForm hodge(const QuadGraph& g, const VertexField& f);
TwoForm hodge(const QuadGraph& g, const FaceField& h);
OneForm hodge(const QuadGraph& g, const OneForm& w);  // type Diamond only
/// Star of a two-form: type Lambda gives a vertex function, type Diamond a
/// face function. Exactly one of the outputs is filled, per the input's type.
void hodge(const QuadGraph& g, const TwoForm& W, VertexField* outV, FaceField* outH);

/// delta = -star d star on type-Diamond one-forms; defined at interior vertices.
VertexField codifferential(const QuadGraph& g, const OneForm& w);
/// delta of a type-Lambda two-form.
OneForm codifferential(const QuadGraph& g, const TwoForm& W);

// scalar products
Complex scalar_product(const QuadGraph& g, const VertexField& a, const VertexField& b);
Complex scalar_product(const QuadGraph& g, const FaceField& a, const FaceField& b);
Complex scalar_product(const QuadGraph& g, const OneForm& a, const OneForm& b);
Complex scalar_product(const QuadGraph& g, const TwoForm& a, const TwoForm& b);

// products with functions
OneForm product(const QuadGraph& g, const VertexField& f, const OneForm& w);
OneForm product(const QuadGraph& g, const FaceField& h, const OneForm& w);
TwoForm product(const QuadGraph& g, const VertexField& f, const TwoForm& W);  // type Lambda
TwoForm product(const QuadGraph& g, const FaceField& h, const TwoForm& W);    // type Diamond

/// One-form f h dz for f on V(Lambda), h on V(Diamond).
OneForm product_fh_dz(const QuadGraph& g, const VertexField& f, const FaceField& h);

/// Closed one-form f dg + g df of the medial product (no holomorphicity claim).
OneForm product_closed_form(const QuadGraph& g, const VertexField& f, const VertexField& g2);

std::string one_form_to_csv(const OneForm& w);
std::string two_form_to_csv(const QuadGraph& g, const TwoForm& W);

} // namespace quadcalc
