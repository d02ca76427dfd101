#include "quadcalc/lattices.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace quadcalc {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct GridRange {
    int a0, a1, b0, b1;  // vertex index box
};

GridRange vertex_box(const LatticeSpec& s) {
    if (s.centered) return {-s.m, s.m, -s.n, s.n};
    return {0, s.m, 0, s.n};
}

QuadGraph build_grid(const LatticeSpec& s, const std::vector<Complex>& positions) {
    GridRange r = vertex_box(s);
    int cols = r.a1 - r.a0 + 1;
    auto vid = [&](int a, int b) { return (b - r.b0) * cols + (a - r.a0); };
    std::vector<VertexInput> verts(positions.size());
    for (int b = r.b0; b <= r.b1; ++b)
        for (int a = r.a0; a <= r.a1; ++a) {
            VertexInput& v = verts[vid(a, b)];
            v.pos = positions[vid(a, b)];
            int par = ((a % 2) + (b % 2) + 4) % 2;
            v.color = par == 0 ? Color::Black : Color::White;
            v.boundary = (a == r.a0 || a == r.a1 || b == r.b0 || b == r.b1);
        }
    std::vector<std::array<int, 4>> quads;
    for (int b = r.b0; b < r.b1; ++b)
        for (int a = r.a0; a < r.a1; ++a) {
            std::array<int, 4> c{vid(a, b), vid(a + 1, b), vid(a + 1, b + 1), vid(a, b + 1)};
            if (verts[c[0]].color != Color::Black) c = {c[1], c[2], c[3], c[0]};
            quads.push_back(c);
        }
    return build_quadgraph(std::move(verts), std::move(quads));
}

QuadGraph gen_skew(const LatticeSpec& s) {
    if (std::abs(s.e1.real() * s.e2.imag() - s.e1.imag() * s.e2.real()) < 1e-12)
        raise(ErrorCode::DegenerateSpec, "spanning vectors are parallel");
    GridRange r = vertex_box(s);
    int cols = r.a1 - r.a0 + 1, rows = r.b1 - r.b0 + 1;
    std::vector<Complex> pos(cols * rows);
    for (int b = r.b0; b <= r.b1; ++b)
        for (int a = r.a0; a <= r.a1; ++a)
            pos[(b - r.b0) * cols + (a - r.a0)] = s.origin + double(a) * s.e1 + double(b) * s.e2;
    return build_grid(s, pos);
}

QuadGraph gen_perturbed(const LatticeSpec& s) {
    GridRange r = vertex_box(s);
    int cols = r.a1 - r.a0 + 1, rows = r.b1 - r.b0 + 1;
    std::mt19937_64 rng(s.seed);
    std::vector<Complex> pos(cols * rows);
    for (int b = r.b0; b <= r.b1; ++b)
        for (int a = r.a0; a <= r.a1; ++a) {
            double dx = s.jitter * (2.0 * uniform01(rng) - 1.0);
            double dy = s.jitter * (2.0 * uniform01(rng) - 1.0);
            pos[(b - r.b0) * cols + (a - r.a0)] =
                s.origin + double(a) * s.e1 + double(b) * s.e2 + Complex(dx, dy);
        }
    try {
        return build_grid(s, pos);
    } catch (const Error& e) {
        raise(ErrorCode::RegularityLost, std::string("jitter broke an invariant: ") + e.what());
    }
}

// de Bruijn multigrid: family k consists of the lines <z, n_k> = j + offset_k,
// j integer, with n_k the unit normal of direction_k. The dual tiling places a
// parallelogram with side vectors direction_k, direction_l at every
// intersection of a family-k line with a family-l line.
QuadGraph gen_multigrid(const LatticeSpec& s, bool forceUnit) {
    const int d = static_cast<int>(s.directions.size());
    if (d < 2) raise(ErrorCode::DegenerateSpec, "multigrid needs at least two directions");
    std::vector<Complex> xi = s.directions;
    if (forceUnit)
        for (auto& x : xi) x /= std::abs(x);
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l)
            if (std::abs((std::conj(xi[k]) * xi[l]).imag()) < 1e-9 * std::abs(xi[k]) * std::abs(xi[l]))
                raise(ErrorCode::DegenerateSpec, "multigrid directions must be pairwise nonparallel");

    std::vector<double> gamma = s.offsets;
    if (gamma.empty()) {
        std::mt19937_64 rng(s.seed ^ 0x9e3779b97f4a7c15ull);
        gamma.resize(d);
        for (auto& g : gamma) g = 0.12345 + 0.75 * uniform01(rng);
    }
    if (static_cast<int>(gamma.size()) != d)
        raise(ErrorCode::DegenerateSpec, "offsets size mismatch");

    std::vector<Complex> normal(d);
    for (int k = 0; k < d; ++k) normal[k] = xi[k] / std::abs(xi[k]);
    auto coord = [&](Complex z, int k) {
        return z.real() * normal[k].real() + z.imag() * normal[k].imag();
    };

    struct Tile {
        std::array<long long, 4> keys;  // vertex keys of corners (ccw)
    };
    // K-vector -> vertex key; keys encode the integer coordinates
    std::map<std::vector<int>, long long> kindex;
    std::vector<std::vector<int>> kvecs;
    auto key_of = [&](const std::vector<int>& K) {
        auto it = kindex.find(K);
        if (it != kindex.end()) return it->second;
        long long id = static_cast<long long>(kvecs.size());
        kindex.emplace(K, id);
        kvecs.push_back(K);
        return id;
    };

    std::vector<std::array<long long, 4>> tiles;
    std::vector<std::pair<int, int>> tile_families;
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
            // line j of family k: coord(z,k) = j + gamma_k
            // solve the 2x2 system for the intersection point
            double a11 = normal[k].real(), a12 = normal[k].imag();
            double a21 = normal[l].real(), a22 = normal[l].imag();
            double det = a11 * a22 - a12 * a21;
            int jmax = static_cast<int>(std::ceil(s.radius)) + 2;
            for (int j = -jmax; j <= jmax; ++j)
                for (int m = -jmax; m <= jmax; ++m) {
                    double rk = j + gamma[k], rl = m + gamma[l];
                    Complex z((rk * a22 - rl * a12) / det, (a11 * rl - a21 * rk) / det);
                    if (std::abs(z) > s.radius) continue;
                    std::vector<int> K(d);
                    for (int i = 0; i < d; ++i) {
                        if (i == k || i == l) continue;
                        double c = coord(z, i) - gamma[i];
                        double nearest = std::round(c);
                        if (std::abs(c - nearest) < 1e-7)
                            raise(ErrorCode::DegenerateSpec,
                                  "triple line intersection within tolerance; change offsets");
                        K[i] = static_cast<int>(std::ceil(c));
                    }
                    std::array<long long, 4> corner{};
                    // ccw order depends on the orientation of (xi_k, xi_l)
                    bool pos = (std::conj(xi[k]) * xi[l]).imag() > 0;
                    auto at = [&](int dk, int dl) {
                        K[k] = j + dk;
                        K[l] = m + dl;
                        return key_of(K);
                    };
                    if (pos) {
                        corner = {at(0, 0), at(1, 0), at(1, 1), at(0, 1)};
                    } else {
                        corner = {at(0, 0), at(0, 1), at(1, 1), at(1, 0)};
                    }
                    tiles.push_back(corner);
                    tile_families.emplace_back(k, l);
                }
        }
    if (tiles.empty()) raise(ErrorCode::DegenerateSpec, "no tiles inside radius");

    // keep the largest connected patch (ragged rims can disconnect)
    {
        std::map<std::pair<long long, long long>, std::vector<int>> edge_tiles;
        for (size_t t = 0; t < tiles.size(); ++t)
            for (int c = 0; c < 4; ++c) {
                auto key = std::minmax(tiles[t][c], tiles[t][(c + 1) % 4]);
                edge_tiles[key].push_back(static_cast<int>(t));
            }
        std::vector<int> comp(tiles.size(), -1);
        int ncomp = 0;
        for (size_t t0 = 0; t0 < tiles.size(); ++t0) {
            if (comp[t0] >= 0) continue;
            std::vector<int> stack{static_cast<int>(t0)};
            comp[t0] = ncomp;
            while (!stack.empty()) {
                int t = stack.back();
                stack.pop_back();
                for (int c = 0; c < 4; ++c) {
                    auto key = std::minmax(tiles[t][c], tiles[t][(c + 1) % 4]);
                    for (int ot : edge_tiles[key])
                        if (comp[ot] < 0) {
                            comp[ot] = ncomp;
                            stack.push_back(ot);
                        }
                }
            }
            ++ncomp;
        }
        std::vector<int> sizes(ncomp, 0);
        for (int c : comp) sizes[c]++;
        int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
        std::vector<std::array<long long, 4>> kept;
        for (size_t t = 0; t < tiles.size(); ++t)
            if (comp[t] == keep) kept.push_back(tiles[t]);
        tiles = std::move(kept);
    }

    // materialize vertices actually used
    std::map<long long, int> vmap;
    std::vector<VertexInput> verts;
    auto vertex_id = [&](long long key) {
        auto it = vmap.find(key);
        if (it != vmap.end()) return it->second;
        const std::vector<int>& K = kvecs[static_cast<size_t>(key)];
        Complex p{0.0, 0.0};
        int parity = 0;
        for (int i = 0; i < d; ++i) {
            p += double(K[i]) * xi[i];
            parity += K[i];
        }
        VertexInput v;
        v.pos = p;
        v.color = ((parity % 2) + 2) % 2 == 0 ? Color::Black : Color::White;
        int id = static_cast<int>(verts.size());
        verts.push_back(v);
        vmap.emplace(key, id);
        return id;
    };
    std::vector<std::array<int, 4>> quads;
    for (const auto& t : tiles) {
        std::array<int, 4> q{vertex_id(t[0]), vertex_id(t[1]), vertex_id(t[2]), vertex_id(t[3])};
        if (verts[q[0]].color != Color::Black) q = {q[1], q[2], q[3], q[0]};
        quads.push_back(q);
    }
    return build_quadgraph(std::move(verts), std::move(quads));
}

QuadGraph gen_fig3() {
    auto B = Color::Black;
    auto W = Color::White;
    std::vector<VertexInput> v = {
        {{0, 0}, B, false},   // 0
        {{1, 0}, W, true},    // 1
        {{0, 1}, W, true},    // 2: i
        {{-1, 0}, W, true},   // 3: -1
        {{0, -1}, W, true},   // 4: -i
        {{2, 2}, B, true},    // 5: 2+2i
        {{-1, 1}, B, true},   // 6: -1+i
        {{-1, -1}, B, true},  // 7: -1-i
        {{1, -1}, B, true},   // 8: 1-i
    };
    std::vector<std::array<int, 4>> q = {
        {0, 1, 5, 2},  // 0, 1, 2+2i, i
        {0, 2, 6, 3},  // 0, i, -1+i, -1
        {0, 3, 7, 4},  // 0, -1, -1-i, -i
        {0, 4, 8, 1},  // 0, -i, 1-i, 1
    };
    return build_quadgraph(std::move(v), std::move(q));
}

} // namespace

QuadGraph generate(const LatticeSpec& spec) {
    switch (spec.family) {
        case LatticeFamily::Skew: return gen_skew(spec);
        case LatticeFamily::PerturbedSquare: return gen_perturbed(spec);
        case LatticeFamily::DeBruijnMultigrid: return gen_multigrid(spec, false);
        case LatticeFamily::RhombicStrips: return gen_multigrid(spec, true);
        case LatticeFamily::Fixture:
            if (spec.fixture == "fig3") return gen_fig3();
            raise(ErrorCode::DegenerateSpec, "unknown fixture: " + spec.fixture);
    }
    raise(ErrorCode::DegenerateSpec, "unknown family");
}

int skew_vertex_id(const LatticeSpec& spec, int a, int b) {
    GridRange r = vertex_box(spec);
    if (a < r.a0 || a > r.a1 || b < r.b0 || b > r.b1) return -1;
    return (b - r.b0) * (r.a1 - r.a0 + 1) + (a - r.a0);
}

int skew_quad_id(const LatticeSpec& spec, int a, int b) {
    GridRange r = vertex_box(spec);
    if (a < r.a0 || a >= r.a1 || b < r.b0 || b >= r.b1) return -1;
    return (b - r.b0) * (r.a1 - r.a0) + (a - r.a0);
}

} // namespace quadcalc
