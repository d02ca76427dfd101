#include "quadcalc/quadgraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>

namespace quadcalc {

namespace {

constexpr double kPi = std::numbers::pi;

double norm_angle(double a) {  // into [0, 2pi)
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
    return a;
}

} // namespace

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonBipartite: return "NonBipartite";
        case ErrorCode::OrientationInconsistent: return "OrientationInconsistent";
        case ErrorCode::StrongRegularityViolated: return "StrongRegularityViolated";
        case ErrorCode::DisconnectedColorClass: return "DisconnectedColorClass";
        case ErrorCode::BoundaryVertexFace: return "BoundaryVertexFace";
        case ErrorCode::NotParallelogramGraph: return "NotParallelogramGraph";
        case ErrorCode::Unreachable: return "Unreachable";
        case ErrorCode::EdgeNotInGraph: return "EdgeNotInGraph";
        case ErrorCode::MissingValues: return "MissingValues";
        case ErrorCode::NotTypeDiamond: return "NotTypeDiamond";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::BoundaryVertex: return "BoundaryVertex";
        case ErrorCode::NotHolomorphic: return "NotHolomorphic";
        case ErrorCode::NotSimplyConnected: return "NotSimplyConnected";
        case ErrorCode::NotHarmonic: return "NotHarmonic";
        case ErrorCode::NotContour: return "NotContour";
        case ErrorCode::NotCompactlySupported: return "NotCompactlySupported";
        case ErrorCode::EmptyInterior: return "EmptyInterior";
        case ErrorCode::SolverDivergence: return "SolverDivergence";
        case ErrorCode::BoundaryVertexRequested: return "BoundaryVertexRequested";
        case ErrorCode::NotDiskLike: return "NotDiskLike";
        case ErrorCode::InconsistentTarget: return "InconsistentTarget";
        case ErrorCode::PoleHit: return "PoleHit";
        case ErrorCode::BranchConflict: return "BranchConflict";
        case ErrorCode::NotSkewLattice: return "NotSkewLattice";
        case ErrorCode::ContourTooTight: return "ContourTooTight";
        case ErrorCode::BasePointNotEnclosed: return "BasePointNotEnclosed";
        case ErrorCode::ContourTouchesBase: return "ContourTouchesBase";
        case ErrorCode::DegenerateSpec: return "DegenerateSpec";
        case ErrorCode::RegularityLost: return "RegularityLost";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::UsageError: return "UsageError";
    }
    return "UnknownError";
}

double signed_shoelace_area(const std::vector<Complex>& poly) {
    double s = 0.0;
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        const Complex& a = poly[i];
        const Complex& b = poly[(i + 1) % n];
        s += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * s;
}

QuadGraph build_quadgraph(std::vector<VertexInput> vertices,
                          std::vector<std::array<int, 4>> quads) {
    QuadGraph g;
    const int nv = static_cast<int>(vertices.size());

    double scale = 0.0;
    for (const auto& v : vertices) scale = std::max(scale, std::abs(v.pos));
    if (scale == 0.0) scale = 1.0;

    for (auto& q : quads) {
        for (int i : q)
            if (i < 0 || i >= nv)
                throw std::invalid_argument("quad vertex index out of range");
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (q[i] == q[j]) throw std::invalid_argument("quad repeats a vertex");
        // bipartite corner pattern (b-, w-, b+, w+)
        if (vertices[q[0]].color != Color::Black || vertices[q[2]].color != Color::Black ||
            vertices[q[1]].color != Color::White || vertices[q[3]].color != Color::White)
            raise(ErrorCode::NonBipartite, "quad corners must alternate black, white, black, white");
        // orientation: positive signed area of the Varignon parallelogram
        std::vector<Complex> mids(4);
        for (int i = 0; i < 4; ++i)
            mids[i] = 0.5 * (vertices[q[i]].pos + vertices[q[(i + 1) % 4]].pos);
        double area = signed_shoelace_area(mids);
        if (std::abs(area) < 1e-9 * scale * scale)
            raise(ErrorCode::OrientationInconsistent, "degenerate quad (zero Varignon area)");
        if (area < 0) std::swap(q[1], q[3]);  // reverse orientation, keep b- first
    }

    g.pos_.resize(nv);
    g.color_.resize(nv);
    g.boundary_.assign(nv, 0);
    for (int i = 0; i < nv; ++i) {
        g.pos_[i] = vertices[i].pos;
        g.color_[i] = vertices[i].color;
        g.boundary_[i] = vertices[i].boundary ? 1 : 0;
    }
    g.quads_.resize(quads.size());
    for (size_t i = 0; i < quads.size(); ++i) g.quads_[i].v = quads[i];

    g.build_derived();
    return g;
}

void QuadGraph::build_derived() {
    const int nv = vertex_count();
    const int nq = quad_count();

    // ---- lambda edges ----
    std::map<std::pair<int, int>, int> edge_index;
    edge_ends_.clear();
    edge_quads_.clear();
    for (int q = 0; q < nq; ++q) {
        for (int s = 0; s < 4; ++s) {
            int a = quads_[q].v[s], b = quads_[q].v[(s + 1) % 4];
            auto key = std::minmax(a, b);
            auto it = edge_index.find(key);
            int e;
            if (it == edge_index.end()) {
                e = static_cast<int>(edge_ends_.size());
                edge_index.emplace(key, e);
                edge_ends_.push_back(key);
                edge_quads_.emplace_back();
            } else {
                e = it->second;
            }
            edge_quads_[e].push_back(q);
        }
    }
    for (size_t e = 0; e < edge_quads_.size(); ++e) {
        auto& qs = edge_quads_[e];
        std::sort(qs.begin(), qs.end());
        if (qs.size() > 2 || (qs.size() == 2 && qs[0] == qs[1]))
            raise(ErrorCode::StrongRegularityViolated, "edge shared by more than two faces");
    }

    vertex_edges_.assign(nv, {});
    for (int e = 0; e < lambda_edge_count(); ++e) {
        auto [a, b] = edge_ends_[e];
        vertex_edges_[a].emplace_back(b, e);
        vertex_edges_[b].emplace_back(a, e);
    }
    for (auto& ve : vertex_edges_) std::sort(ve.begin(), ve.end());

    // ---- strong regularity: two faces meet in at most a vertex or one edge ----
    {
        std::vector<std::vector<int>> vquads(nv);
        for (int q = 0; q < nq; ++q)
            for (int s = 0; s < 4; ++s) vquads[quads_[q].v[s]].push_back(q);
        std::map<std::pair<int, int>, int> shared;
        for (int v = 0; v < nv; ++v) {
            auto& qs = vquads[v];
            std::sort(qs.begin(), qs.end());
            for (size_t i = 0; i < qs.size(); ++i)
                for (size_t j = i + 1; j < qs.size(); ++j) shared[{qs[i], qs[j]}]++;
        }
        for (const auto& [pair, cnt] : shared) {
            if (cnt <= 1) continue;
            if (cnt > 2)
                raise(ErrorCode::StrongRegularityViolated, "two faces share three or more vertices");
            // exactly two shared vertices: must form a common edge of both quads
            const Quad& qa = quads_[pair.first];
            const Quad& qb = quads_[pair.second];
            std::vector<int> common;
            for (int x : qa.v)
                for (int y : qb.v)
                    if (x == y) common.push_back(x);
            auto consecutive = [](const Quad& q, int a, int b) {
                for (int s = 0; s < 4; ++s) {
                    int u = q.v[s], w = q.v[(s + 1) % 4];
                    if ((u == a && w == b) || (u == b && w == a)) return true;
                }
                return false;
            };
            if (!consecutive(qa, common[0], common[1]) || !consecutive(qb, common[0], common[1]))
                raise(ErrorCode::StrongRegularityViolated,
                      "two faces share two vertices that do not form a common edge");
        }
    }

    // ---- per-quad geometry ----
    geom_.resize(nq);
    parallelogram_ = true;
    alpha0_ = kPi;
    q0_ = 1.0;
    edge_min_ = 1e300;
    edge_max_ = 0.0;
    double scale = 0.0;
    for (const auto& p : pos_) scale = std::max(scale, std::abs(p));
    if (scale == 0.0) scale = 1.0;
    for (int q = 0; q < nq; ++q) {
        Complex b0 = pos_[quads_[q].v[0]], w0 = pos_[quads_[q].v[1]];
        Complex b1 = pos_[quads_[q].v[2]], w1 = pos_[quads_[q].v[3]];
        Complex db = b1 - b0, dw = w1 - w0;
        QuadGeometry& gg = geom_[q];
        gg.rho = Complex(0, -1) * dw / db;
        double c = std::clamp((Complex(0, 1) * gg.rho / std::abs(gg.rho)).real(), -1.0, 1.0);
        gg.phi = std::acos(c);
        gg.lambda = std::exp(Complex(0, -(gg.phi - kPi / 2))) / (2.0 * std::sin(gg.phi));
        gg.ar_FQ = 0.5 * std::abs(db) * std::abs(dw) * std::sin(gg.phi);
        bool par = std::abs((b0 + b1) - (w0 + w1)) <= 1e-12 * std::max(1.0, scale);
        if (!par) parallelogram_ = false;
        gg.center = par ? 0.25 * (b0 + b1 + w0 + w1)
                        : 0.5 * (0.5 * (b0 + b1) + 0.5 * (w0 + w1));
        for (int s = 0; s < 4; ++s) {
            Complex p = pos_[quads_[q].v[s]];
            Complex u = pos_[quads_[q].v[(s + 1) % 4]] - p;
            Complex w = pos_[quads_[q].v[(s + 3) % 4]] - p;
            double ang = norm_angle(std::arg(w) - std::arg(u));  // ccw interior angle
            alpha0_ = std::min(alpha0_, ang);
            double lu = std::abs(u), lw = std::abs(w);
            edge_min_ = std::min({edge_min_, lu, lw});
            edge_max_ = std::max({edge_max_, lu, lw});
            q0_ = std::min(q0_, std::min(lu / lw, lw / lu));
        }
    }

    // ---- stars in counterclockwise cyclic order ----
    // In quad Q at corner c the ccw walk around the center vertex continues
    // across the edge (v, prev corner).
    star_.assign(nv, {});
    std::vector<std::vector<StarEntry>> incident(nv);
    for (int q = 0; q < nq; ++q)
        for (int c = 0; c < 4; ++c) incident[quads_[q].v[c]].push_back({q, c});
    auto other_quad = [&](int e, int q) -> int {
        const auto& qs = edge_quads_[e];
        if (qs.size() < 2) return -1;
        return qs[0] == q ? qs[1] : qs[0];
    };
    for (int v = 0; v < nv; ++v) {
        if (incident[v].empty()) {
            boundary_[v] = 1;
            continue;
        }
        // walk clockwise from an arbitrary start to find the ccw-first quad
        StarEntry start = incident[v][0];
        StarEntry cur = start;
        bool closed = false;
        for (size_t guard = 0; guard <= incident[v].size(); ++guard) {
            int nextCorner = (cur.corner + 1) % 4;  // edge (v, next corner) borders the cw neighbor
            int e = lambda_edge_id(v, quads_[cur.quad].v[nextCorner]);
            int oq = other_quad(e, cur.quad);
            if (oq < 0) break;
            int oc = quads_[oq].corner_of(v);
            cur = {oq, oc};
            if (oq == start.quad) { closed = true; break; }
        }
        // now walk counterclockwise collecting the star
        std::vector<StarEntry>& st = star_[v];
        StarEntry first = cur;
        st.push_back(first);
        for (size_t guard = 0; guard < incident[v].size(); ++guard) {
            int prevCorner = (st.back().corner + 3) % 4;
            int e = lambda_edge_id(v, quads_[st.back().quad].v[prevCorner]);
            int oq = other_quad(e, st.back().quad);
            if (oq < 0) break;
            if (oq == first.quad) break;  // cycle closed
            st.push_back({oq, quads_[oq].corner_of(v)});
        }
        if (st.size() != incident[v].size())
            raise(ErrorCode::StrongRegularityViolated, "vertex star is not a single fan");
        if (!closed) boundary_[v] = 1;
    }

    // ---- ar(F_v) for interior vertices ----
    ar_Fv_.assign(nv, -1.0);
    for (int v = 0; v < nv; ++v) {
        if (boundary_[v]) continue;
        double s = 0.0;
        const auto& st = star_[v];
        for (const auto& se : st) {
            Complex vp = pos_[quads_[se.quad].v[(se.corner + 3) % 4]];   // v'_s
            Complex vpm = pos_[quads_[se.quad].v[(se.corner + 1) % 4]];  // v'_{s-1}
            s += (vp * std::conj(vpm)).imag();
        }
        ar_Fv_[v] = 0.25 * s;
        if (ar_Fv_[v] <= 0)
            raise(ErrorCode::OrientationInconsistent, "nonpositive vertex face area");
    }

    // ---- connected color classes (diagonal graphs Gamma, Gamma*) ----
    for (int phase = 0; phase < 2; ++phase) {
        std::vector<std::vector<int>> adj(nv);
        for (int q = 0; q < nq; ++q) {
            int a = quads_[q].v[phase], b = quads_[q].v[phase + 2];
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        int seed = -1, count = 0;
        for (int v = 0; v < nv; ++v)
            if (color_[v] == (phase == 0 ? Color::Black : Color::White)) {
                ++count;
                if (seed < 0) seed = v;
            }
        if (count == 0) raise(ErrorCode::DisconnectedColorClass, "empty color class");
        std::vector<char> seen(nv, 0);
        std::deque<int> bfs{seed};
        seen[seed] = 1;
        int reached = 0;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop_front();
            ++reached;
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    bfs.push_back(w);
                }
        }
        if (reached != count)
            raise(ErrorCode::DisconnectedColorClass,
                  phase == 0 ? "black diagonal graph disconnected" : "white diagonal graph disconnected");
    }
}

int QuadGraph::lambda_edge_id(int a, int b) const {
    const auto& ve = vertex_edges_[a];
    auto it = std::lower_bound(ve.begin(), ve.end(), std::make_pair(b, -1));
    if (it != ve.end() && it->first == b) return it->second;
    return -1;
}

double QuadGraph::ar_Fv(int v) const {
    if (boundary_[v])
        raise(ErrorCode::BoundaryVertexFace, "F_v undefined for boundary vertex " + std::to_string(v));
    return ar_Fv_[v];
}

Complex QuadGraph::medial_displacement(const MedialEdge& e) const {
    const Quad& q = quads_[e.id >> 2];
    int c = e.id & 3;
    Complex d = 0.5 * (pos_[q.v[(c + 1) % 4]] - pos_[q.v[(c + 3) % 4]]);
    return e.reversed ? -d : d;
}

int QuadGraph::medial_tail(const MedialEdge& e) const {
    const Quad& q = quads_[e.id >> 2];
    int c = e.id & 3;
    int prev = q.v[(c + 3) % 4], next = q.v[(c + 1) % 4];
    return lambda_edge_id(q.v[c], e.reversed ? next : prev);
}

int QuadGraph::medial_head(const MedialEdge& e) const {
    return medial_tail(MedialEdge(e.id, !e.reversed));
}

Complex QuadGraph::medial_point(int medialVertex) const {
    auto [a, b] = edge_ends_[medialVertex];
    return 0.5 * (pos_[a] + pos_[b]);
}

MedialPath QuadGraph::cycle_PQ(int q) const {
    MedialPath p;
    for (int c = 0; c < 4; ++c) p.emplace_back(4 * q + c, false);
    return p;
}

MedialPath QuadGraph::cycle_Pv(int v) const {
    if (boundary_[v]) raise(ErrorCode::BoundaryVertex, "P_v undefined for boundary vertex");
    MedialPath p;
    for (const auto& se : star_[v]) p.emplace_back(4 * se.quad + se.corner, true);
    return p;
}

std::vector<int> QuadGraph::quads_at_vertex(int v) const {
    std::vector<int> out;
    for (const auto& se : star_[v]) out.push_back(se.quad);
    return out;
}

std::vector<int> QuadGraph::quad_neighborhood(const std::vector<int>& seeds, int rings) const {
    std::vector<char> in(quad_count(), 0);
    std::deque<std::pair<int, int>> bfs;
    for (int q : seeds)
        if (!in[q]) {
            in[q] = 1;
            bfs.emplace_back(q, 0);
        }
    while (!bfs.empty()) {
        auto [q, d] = bfs.front();
        bfs.pop_front();
        if (d == rings) continue;
        for (int s = 0; s < 4; ++s) {
            int e = lambda_edge_id(quads_[q].v[s], quads_[q].v[(s + 1) % 4]);
            for (int oq : edge_quads_[e])
                if (!in[oq]) {
                    in[oq] = 1;
                    bfs.emplace_back(oq, d + 1);
                }
        }
    }
    std::vector<int> out;
    for (int q = 0; q < quad_count(); ++q)
        if (in[q]) out.push_back(q);
    return out;
}

MedialPath QuadGraph::boundary_contour(const std::vector<int>& quadSet) const {
    std::vector<char> inQ(quad_count(), 0);
    for (int q : quadSet) inQ[q] = 1;
    // F_v belongs to the region iff v is interior and its whole star is in
    std::vector<char> inV(vertex_count(), 0);
    for (int v = 0; v < vertex_count(); ++v) {
        if (boundary_[v]) continue;
        bool all = !star_[v].empty();
        for (const auto& se : star_[v])
            if (!inQ[se.quad]) { all = false; break; }
        inV[v] = all ? 1 : 0;
    }
    // boundary edges: exactly one adjacent face in the region
    std::vector<MedialEdge> edges;
    for (int q = 0; q < quad_count(); ++q) {
        for (int c = 0; c < 4; ++c) {
            int v = quads_[q].v[c];
            bool a = inQ[q], b = inV[v] != 0;
            if (a == b) continue;
            edges.emplace_back(4 * q + c, !a);  // region on the left
        }
    }
    if (edges.empty()) raise(ErrorCode::NotContour, "empty boundary");
    // The boundary may pass through a medial vertex twice (the region pinches
    // where both endpoints of a lambda edge sit on the rim); the walk then
    // continues around the same lambda vertex, switching region faces.
    std::multimap<int, int> byTail;
    for (size_t i = 0; i < edges.size(); ++i)
        byTail.emplace(medial_tail(edges[i]), static_cast<int>(i));
    MedialPath path;
    int cur = 0;
    for (size_t guard = 0; guard <= edges.size(); ++guard) {
        path.push_back(edges[cur]);
        int h = medial_head(edges[cur]);
        auto [lo, hi] = byTail.equal_range(h);
        int next = -1;
        for (auto it = lo; it != hi; ++it) {
            if (next < 0) next = it->second;
            if (medial_vertex_of(edges[it->second].id) == medial_vertex_of(edges[cur].id))
                next = it->second;
        }
        if (next < 0) raise(ErrorCode::NotContour, "region boundary is not closed");
        if (next == 0) break;
        cur = next;
    }
    if (path.size() != edges.size())
        raise(ErrorCode::NotContour, "region boundary has several loops (not disk-like)");
    return path;
}

const std::vector<Strip>& QuadGraph::strips() const {
    if (strips_built_) return strips_;
    // each quad belongs to two strips, one per opposite-side pair
    std::vector<std::array<char, 2>> used(quad_count(), {0, 0});
    auto cross = [&](int q, int side) -> std::pair<int, int> {
        int e = lambda_edge_id(quads_[q].v[side], quads_[q].v[(side + 1) % 4]);
        const auto& qs = edge_quads_[e];
        int oq = qs.size() == 2 ? (qs[0] == q ? qs[1] : qs[0]) : -1;
        if (oq < 0) return {-1, -1};
        int a = quads_[q].v[side], b = quads_[q].v[(side + 1) % 4];
        for (int s = 0; s < 4; ++s) {
            int u = quads_[oq].v[s], w = quads_[oq].v[(s + 1) % 4];
            if ((u == a && w == b) || (u == b && w == a)) return {oq, s};
        }
        return {-1, -1};
    };
    auto edge_of = [&](int q, int side) {
        return lambda_edge_id(quads_[q].v[side], quads_[q].v[(side + 1) % 4]);
    };
    for (int q0 = 0; q0 < quad_count(); ++q0) {
        for (int pair = 0; pair < 2; ++pair) {
            if (used[q0][pair]) continue;
            // walk backwards through the entry side to find the start quad,
            // or detect a closed strip
            int q = q0, inSide = pair;
            bool closed = false;
            {
                int cq = q0, cs = pair, guard = 0;
                for (;;) {
                    auto [oq, os] = cross(cq, cs);
                    if (oq < 0) { q = cq; inSide = cs; break; }
                    if (oq == q0 && os % 2 == pair) { closed = true; q = q0; inSide = pair; break; }
                    cq = oq;
                    cs = (os + 2) % 4;
                    if (++guard > quad_count())
                        raise(ErrorCode::StrongRegularityViolated, "strip walk did not terminate");
                }
            }
            Strip st;
            st.closed = closed;
            st.crossed_edges.push_back(edge_of(q, inSide));
            int cq = q, cs = inSide;
            for (;;) {
                used[cq][cs % 2] = 1;
                st.quads.push_back(cq);
                int outSide = (cs + 2) % 4;
                st.crossed_edges.push_back(edge_of(cq, outSide));
                auto [oq, os] = cross(cq, outSide);
                if (oq < 0) break;
                if (closed && oq == q && os % 2 == inSide % 2) break;
                cq = oq;
                cs = os;
            }
            if (parallelogram_) {
                auto [a, b] = edge_ends_[st.crossed_edges.front()];
                st.common_parallel = pos_[b] - pos_[a];
            }
            strips_.push_back(std::move(st));
        }
    }
    strips_built_ = true;
    return strips_;
}

// ---- cone paths ----

QuadGraph::ConePathIndex::ConePathIndex(const QuadGraph& g, int v0, double alpha0)
    : g_(g), v0_(v0) {
    if (!g.is_parallelogram_graph())
        raise(ErrorCode::NotParallelogramGraph, "cone paths require a parallelogram-graph");
    span_ = kPi - alpha0;
    // candidate base angles: all distinct directed edge arguments
    std::set<long long> buckets;
    for (int e = 0; e < g.lambda_edge_count(); ++e) {
        auto [a, b] = g.lambda_edge(e);
        for (Complex d : {g.pos(b) - g.pos(a), g.pos(a) - g.pos(b)}) {
            double ang = norm_angle(std::arg(d));
            long long key = llround(ang * 1e9);
            if (buckets.insert(key).second) angles_.push_back(ang);
        }
    }
    std::sort(angles_.begin(), angles_.end());
    const int nv = g.vertex_count();
    parent_.assign(angles_.size(), std::vector<int>(nv, -1));
    dist_.assign(angles_.size(), std::vector<int>(nv, -1));
    maxrel_.assign(angles_.size(), std::vector<float>(nv, 0.f));
    const double eps = 1e-12;
    for (size_t ai = 0; ai < angles_.size(); ++ai) {
        double theta = angles_[ai];
        auto& par = parent_[ai];
        auto& dist = dist_[ai];
        auto& mrel = maxrel_[ai];
        std::deque<int> bfs{v0};
        dist[v0] = 0;
        par[v0] = v0;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop_front();
            for (auto [w, e] : g.vertex_edges_[v]) {
                if (dist[w] >= 0) continue;
                double rel = norm_angle(std::arg(g.pos(w) - g.pos(v)) - theta);
                if (rel >= 2.0 * kPi - 1e-9) rel = 0.0;  // base-direction edges, wrapped by roundoff
                bool ok = alpha0 > 0 ? rel <= span_ + eps : rel < span_ - eps;
                if (!ok) continue;
                dist[w] = dist[v] + 1;
                par[w] = v;
                mrel[w] = std::max(mrel[v], static_cast<float>(rel));
                bfs.push_back(w);
            }
        }
    }
}

bool QuadGraph::ConePathIndex::reachable(int v) const {
    for (size_t ai = 0; ai < angles_.size(); ++ai)
        if (dist_[ai][v] >= 0) return true;
    return false;
}

QuadGraph::ConePath QuadGraph::ConePathIndex::extract(int best, int v) const {
    ConePath cp;
    cp.base_angle = angles_[best];
    cp.max_relative_angle = maxrel_[best][v];
    for (int cur = v; cur != v0_; cur = parent_[best][cur]) cp.vertices.push_back(cur);
    cp.vertices.push_back(v0_);
    std::reverse(cp.vertices.begin(), cp.vertices.end());
    for (size_t i = 0; i + 1 < cp.vertices.size(); ++i)
        cp.edges.push_back(g_.pos(cp.vertices[i + 1]) - g_.pos(cp.vertices[i]));
    return cp;
}

QuadGraph::ConePath QuadGraph::ConePathIndex::path_to(int v) const {
    return path_to(v, {});
}

QuadGraph::ConePath QuadGraph::ConePathIndex::path_to(int v,
                                                      const std::vector<Complex>& alsoCover) const {
    // lexicographic tie-break: (path length, smallest maximal relative edge
    // argument, smallest base angle)
    int best = -1;
    for (size_t ai = 0; ai < angles_.size(); ++ai) {
        if (dist_[ai][v] < 0) continue;
        bool covers = true;
        for (Complex d : alsoCover) {
            double rel = norm_angle(std::arg(d) - angles_[ai]);
            if (rel >= 2.0 * kPi - 1e-9) rel = 0.0;
            if (rel > span_ + 1e-12) covers = false;
        }
        if (!covers) continue;
        if (best < 0 || dist_[ai][v] < dist_[best][v] ||
            (dist_[ai][v] == dist_[best][v] && maxrel_[ai][v] < maxrel_[best][v]))
            best = static_cast<int>(ai);
    }
    if (best < 0)
        raise(ErrorCode::Unreachable, "no cone path to vertex " + std::to_string(v));
    return extract(best, v);
}

QuadGraph::ConePath QuadGraph::cone_path(int v0, int v, double alpha0) const {
    ConePathIndex idx(*this, v0, alpha0);
    return idx.path_to(v);
}

} // namespace quadcalc
