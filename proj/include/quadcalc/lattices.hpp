#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadcalc/quadgraph.hpp"

namespace quadcalc {

enum class LatticeFamily { Skew, RhombicStrips, DeBruijnMultigrid, PerturbedSquare, Fixture };

struct LatticeSpec {
    LatticeFamily family = LatticeFamily::Skew;
    // skew / perturbedSquare
    Complex e1{1.0, 0.0};
    Complex e2{0.0, 1.0};
    Complex origin{0.0, 0.0};
    int m = 4, n = 4;          // quads per direction (grid extent)
    bool centered = false;     // index range [-m..m] x [-n..n] instead of [0..m] x [0..n]
    // multigrid families
    std::vector<Complex> directions;  // pairwise nonparallel
    std::vector<double> offsets;      // per family; seeded irrational defaults if empty
    double radius = 10.0;
    // perturbedSquare
    double jitter = 0.0;
    // fixture
    std::string fixture = "fig3";
    std::uint64_t seed = 0;
};

/// Deterministic generator for the graph families used throughout; output
/// always passes build_quadgraph validation.
QuadGraph generate(const LatticeSpec& spec);

/// Vertex id at lattice coordinates (a, b) of a generated skew lattice
/// (row-major over the index box; only valid for Skew/PerturbedSquare specs).
int skew_vertex_id(const LatticeSpec& spec, int a, int b);
/// Quad id of the cell whose lower-left corner is (a, b).
int skew_quad_id(const LatticeSpec& spec, int a, int b);

} // namespace quadcalc
