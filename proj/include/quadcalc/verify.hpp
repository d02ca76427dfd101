#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadcalc/forms.hpp"
#include "quadcalc/quadgraph.hpp"

namespace quadcalc {

struct CheckResult {
    std::string name;
    double worst = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Exact-identity suite on one graph: geometry identities, Stokes, Leibniz,
/// ddf = 0, Hodge involution, derivative-vs-contour, Laplacian factorization,
/// Green's identities, adjointness, Morera, Weyl, product closedness,
/// black/white contour identities.
std::vector<CheckResult> verify_identities(const QuadGraph& g, std::uint64_t seed);

/// Parallelogram-graph extras: averaging, exponential holomorphicity and path
/// independence, J/tau path independence, cone path coverage, strip parallels.
std::vector<CheckResult> verify_parallelogram(const QuadGraph& g, std::uint64_t seed);

std::string format_check_table(const std::vector<CheckResult>& rows);
bool all_pass(const std::vector<CheckResult>& rows);

// test-field helpers shared with the CLI and the acceptance suite
VertexField random_vertex_field(const QuadGraph& g, std::uint64_t seed, bool realOnly = false,
                                int zeroBoundaryRings = 0);
FaceField random_face_field(const QuadGraph& g, std::uint64_t seed);
/// BFS distance to the boundary (0 on boundary vertices).
std::vector<int> boundary_depth(const QuadGraph& g);
/// A discrete holomorphic field built as u + i (harmonic conjugate of u).
VertexField holomorphic_from_harmonic(const QuadGraph& g, std::uint64_t seed);

} // namespace quadcalc
