#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quadcalc/forms.hpp"
#include "quadcalc/lattices.hpp"
#include "quadcalc/quadgraph.hpp"

namespace quadcalc {

// ---- discrete exponential ----

/// e(lambda, v; v0): multiplicative edge-ratio (lambda+e)/(lambda-e) along any
/// path from v0 to v (path independent on parallelogram-graphs).
Complex discrete_exp(const QuadGraph& g, Complex lambda, int v, int v0);
/// exp parametrization: exp(lambda, .; v0) = e(2/lambda, .; v0).
Complex discrete_exp2(const QuadGraph& g, Complex lambda, int v, int v0);
/// Face value exp(lambda, Q; v0) used by d_lambda exp = lambda exp.
Complex discrete_exp2_face(const QuadGraph& g, Complex lambda, int q, int v0);
/// e(lambda, v; Q0), the face-based exponential entering the Cauchy kernel.
Complex discrete_exp_face_base(const QuadGraph& g, Complex lambda, int v, int q0);
/// Product along an explicit vertex path (for path-independence checks).
Complex exp_along_path(const QuadGraph& g, Complex lambda, const std::vector<int>& vertices);

// ---- path sums ----

struct PathSums {
    Complex J{0, 0};
    Complex tau{0, 0};  // zero for vertex-vertex pairs (no half-edge data)
    int parity = 0;     // full-edge path length mod 2
};

PathSums path_sums_vv(const QuadGraph& g, int v, int v0);   // J(v, v0)
PathSums path_sums_vq(const QuadGraph& g, int q, int v0);   // J(Q, v0), tau(Q, v0)
PathSums path_sums_qv(const QuadGraph& g, int v, int q0);   // J(v, Q0), tau(v, Q0)
PathSums path_sums_qq(const QuadGraph& g, int q, int q0);   // J(Q, Q0), tau(Q, Q0)

/// J(x, v0) and path parity for every reachable vertex, by one BFS.
void j_field(const QuadGraph& g, int v0, std::vector<Complex>& J, std::vector<int>& parity);

// ---- kernel tables ----

enum class KernelKind { GreenFree, CauchyVertex, CauchyFace, CauchyFaceDerivative };

struct KernelDiagnostics {
    double measured_constant = 0.0;  // triangle G(v0) * ar(F_v0)
    double scale_applied = 1.0;
    double eval_radius = 0.0;
    int residue_evals = 0;      // targets evaluated by exact residues
    int quadrature_evals = 0;   // targets evaluated by branch-cut quadrature
    int max_pole_multiplicity = 1;
    int unreached = 0;               // rim vertices without a confined cone path
    double min_branch_margin = 0.0;  // angular gap between poles and the log cut
};

struct KernelTable {
    KernelKind kind = KernelKind::GreenFree;
    int base = -1;  // v0 (GreenFree, CauchyVertex) or Q0 (CauchyFace, derivative)
    // GreenFree / CauchyFace*: indexed by vertex id; CauchyVertex: by quad id
    std::vector<Complex> values;
    std::vector<char> has;
    std::vector<Complex> asym;  // predicted asymptotic reference value
    std::vector<char> hasAsym;
    KernelDiagnostics diag;

    Complex value_at(int id) const {
        if (!has[id]) raise(ErrorCode::MissingValues, "kernel table has no value at id");
        return values[id];
    }
};

/// Free discrete Green's function by per-vertex contour evaluation (poles via
/// cone paths, residues for well separated poles, branch-cut quadrature
/// otherwise). Real-valued, G(v0;v0) = 0. The measured normalization
/// triangle G(v0) ar(F_v0) is recorded in the diagnostics; the table keeps the
/// construction's own constant (1/2) so that 8 pi d_lambda G is a Cauchy
/// kernel exactly.
KernelTable green_free(const QuadGraph& g, int v0, double evalRadius = -1.0);

/// K_{v0} = 8 pi d_lambda G(.; v0) on the quads; needs the Green table.
KernelTable cauchy_kernel_vertex(const QuadGraph& g, const KernelTable& green);

/// K_{Q0} on the vertices via the ray integral of the face-based exponential.
KernelTable cauchy_kernel_face(const QuadGraph& g, int q0, double evalRadius = -1.0);

/// d_lambda of a CauchyFace table, with the derivative asymptote.
KernelTable cauchy_face_derivative(const QuadGraph& g, const KernelTable& kq0);

// ---- Cauchy integral formulae ----

/// (1/2 pi i) contour integral of f K dz; reconstructs f(v0).
Complex cauchy_integral_vertex(const QuadGraph& g, const KernelTable& kv0, const VertexField& f,
                               const MedialPath& contour);
/// (1/2 pi i) contour integral of h K dz; reconstructs h(Q0).
Complex cauchy_integral_face(const QuadGraph& g, const KernelTable& kq0, const FaceField& h,
                             const MedialPath& contour);
/// -(1/2 pi i) contour integral of f (d_lambda K) dz; reconstructs d_lambda f(Q0).
Complex cauchy_integral_derivative(const QuadGraph& g, const KernelTable& dkq0,
                                   const VertexField& f, const MedialPath& contour);

// ---- skew integer lattice: iterated derivative and n-th order formulae ----

/// A centered skew lattice together with its shifted dual, set up so that the
/// single operator d alternates between fields on Lambda and on Diamond.
class SkewLatticePair {
public:
    SkewLatticePair(Complex e1, Complex e2, int halfExtent);

    const QuadGraph& lambda() const { return lam_; }
    const QuadGraph& diamond() const { return dia_; }
    Complex e1() const { return e1_; }
    Complex e2() const { return e2_; }
    int half_extent() const { return m_; }

    int lambda_vertex(int a, int b) const;           // position a e1 + b e2
    int diamond_vertex(int a, int b) const;          // position (a+1/2) e1 + (b+1/2) e2
    int lambda_quad_at(int a, int b) const;          // quad with center (a+1/2, b+1/2)
    int diamond_quad_at(int a, int b) const;         // quad of dia with center (a, b)
    int diamond_vertex_of_quad(int lamQuad) const { return lamQuadToDiaVert_[lamQuad]; }
    int lambda_vertex_of_quad(int diaQuad) const { return diaQuadToLamVert_[diaQuad]; }

    struct Field {
        bool onLambda = true;  // values indexed by vertices of lambda() or diamond()
        std::vector<Complex> values;
        std::vector<char> has;
    };

    Field lift(const VertexField& f) const;  // full field on lambda
    /// One application of the derivative d; the support shrinks by the quads
    /// whose corners are not all defined.
    Field derivative(const Field& f) const;
    Field derivative_n(const Field& f, int n) const;

    /// tau' parity factor of the n-th derivative asymptote.
    double tau_prime(Complex x, Complex q0) const;

private:
    Complex e1_, e2_;
    int m_;
    QuadGraph lam_, dia_;
    LatticeSpec lamSpec_, diaSpec_;
    std::vector<int> lamQuadToDiaVert_, diaQuadToLamVert_;
};

struct HigherDerivativeCheck {
    Complex reconstructed;  // contour formula value
    Complex direct;         // repeated derivative at x0
    Complex asym;           // asymptote reference at the probe point (diagnostic)
};

/// Evaluates the n-th order Cauchy formula for f at x0 (= v0 for even n, the
/// shifted Q0 for odd n) over the given ring radius, against direct iterated
/// derivatives.
HigherDerivativeCheck skew_higher_derivative(const SkewLatticePair& sk, const VertexField& f,
                                             int n, int ringRadius, double kernelRadius = -1.0);

// ---- contours ----

/// Boundary contour of the quads within `rings` adjacency steps of the base
/// (a vertex star for baseIsVertex, one quad otherwise).
MedialPath ring_contour(const QuadGraph& g, int base, bool baseIsVertex, int rings);

/// Winding number of the contour around a point (for enclosure checks).
double contour_winding(const QuadGraph& g, const MedialPath& contour, Complex z);

} // namespace quadcalc
