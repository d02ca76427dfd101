#pragma once

#include <functional>
#include <vector>

#include "quadcalc/forms.hpp"
#include "quadcalc/quadgraph.hpp"

namespace quadcalc {

/// Discrete derivatives of a vertex function, one value per quad. Computed
/// from the closed-form lambda_Q expression and cross-checked against the
/// P_Q contour integrals.
void d_lambda(const QuadGraph& g, const VertexField& f, FaceField& df, FaceField& dfbar);

/// Contour form of the lambda derivatives (used as the independent route).
void d_lambda_contour(const QuadGraph& g, const VertexField& f, FaceField& df, FaceField& dfbar);

/// Discrete derivatives of a face function at interior vertices.
void d_diamond(const QuadGraph& g, const FaceField& h, VertexField& dh, VertexField& dhbar);

struct HolomorphicityReport {
    // vertex input: per-quad CR defect (dbar_Lambda f);
    // face input: per-interior-vertex contour defect (integral of h dz over P_v)
    std::vector<Complex> residual;
    double maxAbs = 0.0;
};

HolomorphicityReport check_holomorphic(const QuadGraph& g, const VertexField& f);
HolomorphicityReport check_holomorphic(const QuadGraph& g, const FaceField& h);

/// m(f)(Q): mean of the four corner values.
FaceField average(const QuadGraph& g, const VertexField& f);

/// Discrete primitive of a discrete holomorphic face function: f with
/// d_lambda f = h, fixed by f(blackBase) = cb and f(whiteBase) = cw.
VertexField primitive(const QuadGraph& g, const FaceField& h, int blackBase, int whiteBase,
                      Complex cb = {0, 0}, Complex cw = {0, 0}, double tol = 1e-9);

/// Laplacian stencil at interior vertices; boundary entries are left 0.
VertexField laplacian(const QuadGraph& g, const VertexField& f);
Complex laplacian_at(const QuadGraph& g, const VertexField& f, int v);
/// 4 d_diamond(dbar_lambda f), the factorized route (cross-check).
VertexField laplacian_factored(const QuadGraph& g, const VertexField& f);

/// Dirichlet energy <df,df>, via forms; cross-checked against the explicit
/// per-quad formula to 1e-10 relative.
double dirichlet_energy(const QuadGraph& g, const VertexField& f);
double dirichlet_energy_explicit(const QuadGraph& g, const VertexField& f);

/// Real harmonic conjugate with ftilde(blackBase) = ftilde(whiteBase) = 0.
VertexField harmonic_conjugate(const QuadGraph& g, const VertexField& f, int blackBase,
                               int whiteBase, double tol = 1e-8);

/// True iff the quad complex is homeomorphic to a disk (Euler characteristic).
bool is_disk_like(const QuadGraph& g);

// ---- black/white contour decomposition (section on Cauchy notation) ----

struct CycleStep {
    int quad;
    int from, to;  // oriented diagonal endpoints
    int off;       // b(Q) for white steps, w(Q) for black steps
};

struct BWDecomposition {
    std::vector<CycleStep> white;  // steps along Gamma* diagonals
    std::vector<CycleStep> black;  // steps along Gamma diagonals
};

/// Splits a discrete contour on X into the induced white and black cycles.
BWDecomposition contour_decompose(const QuadGraph& g, const MedialPath& contour);

/// | oint_W f(b(Q)) h dz + oint_B f(w(Q)) h dz - 2 oint_P f h dz |
double bw_lemma_residual(const QuadGraph& g, const MedialPath& contour, const VertexField& f,
                         const FaceField& h);
/// | oint_W f(b(Q)) dg + oint_B g(w(Q)) df |
double bw_leibniz_residual(const QuadGraph& g, const MedialPath& contour, const VertexField& f,
                           const VertexField& g2);

/// Integral of the product one-form f h dz over a medial path.
Complex integrate_f_dz(const QuadGraph& g, const VertexField& f, const MedialPath& path);
Complex integrate_h_dz(const QuadGraph& g, const FaceField& h, const MedialPath& path);
Complex integrate_fh_dz(const QuadGraph& g, const VertexField& f, const FaceField& h,
                        const MedialPath& path);

// sampled fields
VertexField sample_vertex(const QuadGraph& g, const std::function<Complex(Complex)>& fn);
FaceField sample_face(const QuadGraph& g, const std::function<Complex(Complex)>& fn);

} // namespace quadcalc
