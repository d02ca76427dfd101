#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "quadcalc/errors.hpp"

namespace quadcalc {

using Complex = std::complex<double>;

enum class Color : std::uint8_t { Black = 0, White = 1 };

struct VertexInput {
    Complex pos;
    Color color;
    bool boundary = false;
};

/// Quad corners in counterclockwise order (b-, w-, b+, w+).
struct Quad {
    std::array<int, 4> v;

    int corner_of(int vertex) const {
        for (int i = 0; i < 4; ++i)
            if (v[i] == vertex) return i;
        return -1;
    }
};

/// Per-quad derived geometry.
struct QuadGeometry {
    Complex rho;     // -i (w+ - w-) / (b+ - b-)
    double phi;      // diagonal intersection angle, in (0, pi)
    Complex lambda;  // 2 lambda = exp(-i(phi - pi/2)) / sin(phi)
    double ar_FQ;    // twice the Euclidean area of the Varignon parallelogram
    Complex center;  // parallelogram center, else diagonal-midpoint average
};

/// Directed edge of the medial graph. Canonical orientation of edge id
/// e = 4*quad + corner runs counterclockwise around the quad's face F_Q,
/// i.e. from the midpoint of (prev, v) to the midpoint of (v, next) where
/// v is the quad's corner. `reversed` flips it (counterclockwise around F_v).
struct MedialEdge {
    int id = -1;
    bool reversed = false;

    MedialEdge() = default;
    MedialEdge(int id_, bool rev) : id(id_), reversed(rev) {}
};

using MedialPath = std::vector<MedialEdge>;

/// One entry of a vertex star: quad index plus the corner index of the
/// center vertex inside that quad. Stars are stored in counterclockwise
/// order; for interior vertices consecutive entries share an edge and the
/// sequence is cyclic.
struct StarEntry {
    int quad;
    int corner;
};

struct Strip {
    std::vector<int> quads;          // in traversal order
    std::vector<int> crossed_edges;  // lambda-edge ids, quads.size()+1 of them (open strip)
    bool closed = false;
    Complex common_parallel{0.0, 0.0};  // parallelogram-graphs only
};

class QuadGraph {
public:
    // --- sizes ---
    int vertex_count() const { return static_cast<int>(pos_.size()); }
    int quad_count() const { return static_cast<int>(quads_.size()); }
    int lambda_edge_count() const { return static_cast<int>(edge_ends_.size()); }
    int medial_edge_count() const { return 4 * quad_count(); }

    // --- vertices ---
    Complex pos(int v) const { return pos_[v]; }
    Color color(int v) const { return color_[v]; }
    bool is_boundary(int v) const { return boundary_[v]; }
    bool is_interior(int v) const { return !boundary_[v]; }
    double ar_Fv(int v) const;  // throws BoundaryVertexFace
    const std::vector<StarEntry>& star(int v) const { return star_[v]; }

    // --- quads ---
    const Quad& quad(int q) const { return quads_[q]; }
    const QuadGeometry& geom(int q) const { return geom_[q]; }
    Complex quad_vertex_pos(int q, int corner) const { return pos_[quads_[q].v[corner & 3]]; }

    // --- lambda edges (vertex pairs) ---
    std::pair<int, int> lambda_edge(int e) const { return edge_ends_[e]; }
    int lambda_edge_id(int a, int b) const;  // -1 if absent
    const std::vector<int>& edge_quads(int e) const { return edge_quads_[e]; }
    /// (neighbor, lambda edge id) pairs, sorted by neighbor.
    const std::vector<std::pair<int, int>>& vertex_edges(int v) const { return vertex_edges_[v]; }

    // --- medial graph ---
    // Medial vertices are midpoints of lambda edges; their ids coincide with
    // lambda edge ids.
    int medial_quad(int eid) const { return eid >> 2; }
    int medial_corner(int eid) const { return eid & 3; }
    int medial_vertex_of(int eid) const { return quads_[eid >> 2].v[eid & 3]; }
    Complex medial_displacement(const MedialEdge& e) const;
    int medial_tail(const MedialEdge& e) const;  // medial vertex (= lambda edge id)
    int medial_head(const MedialEdge& e) const;
    Complex medial_point(int medialVertex) const;

    /// Counterclockwise elementary cycle around the quad face F_Q.
    MedialPath cycle_PQ(int q) const;
    /// Counterclockwise elementary cycle around F_v; interior v only.
    MedialPath cycle_Pv(int v) const;

    /// Counterclockwise boundary contour of the region spanned by the faces
    /// F_Q for quads in `quadSet` plus the fully surrounded F_v. The set must
    /// produce a single closed loop (disk-like region).
    MedialPath boundary_contour(const std::vector<int>& quadSet) const;
    /// Quads within `rings` adjacency steps of the seed quads.
    std::vector<int> quad_neighborhood(const std::vector<int>& seeds, int rings) const;
    /// All quads incident to vertex v.
    std::vector<int> quads_at_vertex(int v) const;

    // --- strips ---
    const std::vector<Strip>& strips() const;

    // --- parallelogram diagnostics ---
    bool is_parallelogram_graph() const { return parallelogram_; }
    double alpha0() const { return alpha0_; }  // min interior angle
    double q0() const { return q0_; }          // min side-length ratio
    double min_edge_length() const { return edge_min_; }
    double max_edge_length() const { return edge_max_; }

    /// area weight of a medial face: F_Q for quads, F_v for interior vertices
    double face_weight_quad(int q) const { return geom_[q].ar_FQ; }
    double face_weight_vertex(int v) const { return ar_Fv(v); }

    // --- cone paths (parallelogram-graphs) ---
    struct ConePath {
        std::vector<int> vertices;       // v0, ..., v
        std::vector<Complex> edges;      // displacements, vertices.size()-1 of them
        double base_angle = 0.0;         // all edge arguments in [base, base+span)
        double max_relative_angle = 0.0; // span actually used
    };

    /// Shortest directed edge path v0 -> v whose edge arguments lie in a
    /// half-open interval of length pi (pi - alpha0 when alpha0 > 0).
    ConePath cone_path(int v0, int v, double alpha0 = 0.0) const;

    friend QuadGraph build_quadgraph(std::vector<VertexInput> vertices,
                                     std::vector<std::array<int, 4>> quads);

    /// Reusable BFS index for cone paths from a fixed base vertex; used by the
    /// kernel evaluations which need one path per target.
    class ConePathIndex {
    public:
        ConePathIndex(const QuadGraph& g, int v0, double alpha0 = 0.0);
        ConePath path_to(int v) const;
        /// Restricts the candidate base angles to those whose interval also
        /// contains the given directions (pole placement for face kernels).
        ConePath path_to(int v, const std::vector<Complex>& alsoCover) const;
        bool reachable(int v) const;

    private:
        ConePath extract(int angleIndex, int v) const;
        const QuadGraph& g_;
        int v0_;
        double span_;
        std::vector<double> angles_;            // candidate base angles
        std::vector<std::vector<int>> parent_;  // per angle, per vertex: predecessor (-1 unreached)
        std::vector<std::vector<int>> dist_;
        std::vector<std::vector<float>> maxrel_;
    };

private:
    std::vector<Complex> pos_;
    std::vector<Color> color_;
    std::vector<char> boundary_;
    std::vector<Quad> quads_;
    std::vector<QuadGeometry> geom_;
    std::vector<double> ar_Fv_;  // -1 for boundary vertices
    std::vector<std::vector<StarEntry>> star_;

    std::vector<std::pair<int, int>> edge_ends_;
    std::vector<std::vector<int>> edge_quads_;
    std::vector<std::vector<std::pair<int, int>>> vertex_edges_;  // (neighbor, edge id), sorted

    mutable std::vector<Strip> strips_;
    mutable bool strips_built_ = false;

    bool parallelogram_ = false;
    double alpha0_ = 0.0, q0_ = 0.0, edge_min_ = 0.0, edge_max_ = 0.0;

    void build_derived();
};

/// Validates and finishes a quad-graph: bipartite corner pattern, positive
/// (counterclockwise) orientation (normalized by swapping w-/w+ when given
/// clockwise), strong regularity, connected color classes. Boundary flags are
/// completed with the combinatorial boundary.
QuadGraph build_quadgraph(std::vector<VertexInput> vertices,
                          std::vector<std::array<int, 4>> quads);

double signed_shoelace_area(const std::vector<Complex>& poly);

} // namespace quadcalc
