#pragma once

#include <optional>
#include <string>

#include "quadcalc/forms.hpp"
#include "quadcalc/quadgraph.hpp"

namespace quadcalc {

struct DirichletProblem {
    // values at boundary vertices, indexed by vertex id (interior entries ignored)
    std::vector<Complex> boundary;
    double tolerance = 1e-10;
};

struct SolveDiagnostics {
    double residual = 0.0;  // max-norm residual of the assembled linear system
    int iterations = 0;     // 0 for the direct factorization
    std::string method;     // "ldlt" or "cg"
    int unknowns = 0;
};

struct SolveOptions {
    bool force_iterative = false;
    std::optional<std::vector<double>> initial_guess;  // interior unknowns, iterative path only
    int direct_limit = 20000;  // unknown count above which the iterative path is used
};

/// Unique energy minimizer matching the boundary data; |laplacian| < tolerance
/// at every interior vertex.
VertexField solve_dirichlet(const QuadGraph& g, const DirichletProblem& p,
                            SolveDiagnostics* diag = nullptr, const SolveOptions& opt = {});

/// Green's function in the domain: zero boundary values and
/// laplacian = delta_{v v0} / (4 ar(F_v0)).
VertexField green_in_domain(const QuadGraph& g, int v0, double tol = 1e-10,
                            SolveDiagnostics* diag = nullptr);

/// Preimage solvers on disk-like domains (surjectivity of the operators).
VertexField solve_preimage_dlambda(const QuadGraph& g, const FaceField& target,
                                   bool conjugated = false, double tol = 1e-9);
FaceField solve_preimage_ddiamond(const QuadGraph& g, const VertexField& target,
                                  bool conjugated = false, double tol = 1e-9);
VertexField solve_preimage_laplace(const QuadGraph& g, const VertexField& target,
                                   double tol = 1e-9);

} // namespace quadcalc
