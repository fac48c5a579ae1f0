#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include "flatnorm/complex/complex.hpp"
#include "flatnorm/geom/predicates.hpp"
#include "flatnorm/mesh/pslg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace oracle {

using namespace flatnorm;

// Exhaustive minimum of M(t - ∂s) + λ M(s) over s in {-range..range}^T.
// Masses are accumulated in integer units of 2^-40 so the running sums do not drift.
inline double brute_force_flat_norm(const Chain& t, const Complex2& K, double lambda, int range = 2) {
    const std::size_t T = K.num_triangles(), E = K.num_edges();
    const double unit = std::ldexp(1.0, -40);
    std::vector<std::int64_t> len(E), area(T);
    for (std::size_t e = 0; e < E; ++e) len[e] = std::llround(std::ldexp(K.edge_length(e), 40));
    for (std::size_t f = 0; f < T; ++f) area[f] = std::llround(std::ldexp(K.triangle_area(f).get_d(), 40));
    std::vector<std::int64_t> x = t.dense(E), s(T, -range);
    for (std::size_t f = 0; f < T; ++f)
        for (int k = 0; k < 3; ++k) x[K.triangle_edges(f)[k]] -= K.triangle_edge_signs(f)[k] * s[f];
    std::int64_t mx = 0, ms = 0;
    for (std::size_t e = 0; e < E; ++e) mx += std::llabs(x[e]) * len[e];
    for (std::size_t f = 0; f < T; ++f) ms += std::llabs(s[f]) * area[f];
    double best = std::numeric_limits<double>::infinity();

    auto set = [&](std::size_t f, std::int64_t v) {
        std::int64_t d = v - s[f];
        for (int k = 0; k < 3; ++k) {
            auto e = K.triangle_edges(f)[k];
            mx -= std::llabs(x[e]) * len[e];
            x[e] -= K.triangle_edge_signs(f)[k] * d;
            mx += std::llabs(x[e]) * len[e];
        }
        ms += (std::llabs(v) - std::llabs(s[f])) * area[f];
        s[f] = v;
    };
    auto rec = [&](auto&& self, std::size_t f) -> void {
        if (f == T) {
            best = std::min(best, (static_cast<double>(mx) + lambda * static_cast<double>(ms)) * unit);
            return;
        }
        for (int v = -range; v <= range; ++v) {
            set(f, v);
            self(self, f + 1);
        }
        set(f, -range);
    };
    rec(rec, 0);
    return best;
}

// Triangulation of a point set by incremental hull insertion in
// lexicographic order. Collinear input points are skipped until the first
// proper triangle appears.
inline std::vector<Tri> incremental_triangulation(const std::vector<Point>& pts) {
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pts[a] < pts[b]; });
    std::vector<Tri> tris;
    std::vector<std::size_t> hull;  // CCW
    std::size_t k = 2;
    while (k < idx.size() && orient2d(pts[idx[0]], pts[idx[1]], pts[idx[k]]) == 0) ++k;
    if (k >= idx.size()) return tris;
    // fan from the first non-collinear point over the collinear chain
    for (std::size_t i = 0; i + 1 < k; ++i) tris.push_back({idx[i], idx[i + 1], idx[k]});
    for (std::size_t i = 0; i <= k; ++i) hull.push_back(idx[i]);
    {
        Rational a = 0;
        for (std::size_t i = 0; i < hull.size(); ++i) a += cross(pts[hull[i]], pts[hull[(i + 1) % hull.size()]]);
        if (a < 0) std::reverse(hull.begin(), hull.end());
    }
    for (std::size_t j = k + 1; j < idx.size(); ++j) {
        const Point& p = pts[idx[j]];
        const std::size_t h = hull.size();
        std::vector<char> visible(h);
        for (std::size_t i = 0; i < h; ++i) visible[i] = orient2d(pts[hull[i]], pts[hull[(i + 1) % h]], p) < 0;
        std::vector<std::size_t> next;
        // start right after a non-visible edge
        std::size_t start = 0;
        while (visible[start]) ++start;
        bool inserted = false;
        for (std::size_t c = 0; c < h; ++c) {
            std::size_t i = (start + c) % h;
            if (!visible[i]) {
                next.push_back(hull[i]);
                continue;
            }
            tris.push_back({hull[i], hull[(i + 1) % h], idx[j]});
            bool prev_visible = visible[(i + h - 1) % h];
            if (!prev_visible) next.push_back(hull[i]);
            if (!inserted) {
                next.push_back(idx[j]);
                inserted = true;
            }
        }
        hull = std::move(next);
    }
    return tris;
}

// Random small complex on integer points; at most max_tris triangles.
inline Complex2 random_small_complex(std::mt19937_64& rng, std::size_t max_tris) {
    for (;;) {
        std::uniform_int_distribution<int> c(0, 12);
        std::uniform_int_distribution<std::size_t> npts(4, 9);
        std::set<std::pair<int, int>> seen;
        std::vector<Point> pts;
        for (std::size_t n = npts(rng); pts.size() < n;) {
            int x = c(rng), y = c(rng);
            if (seen.insert({x, y}).second) pts.push_back({Rational(x), Rational(y)});
        }
        auto tris = incremental_triangulation(pts);
        if (tris.empty()) continue;
        std::shuffle(tris.begin(), tris.end(), rng);
        if (tris.size() > max_tris) tris.resize(max_tris);
        // keep only vertices that are used
        std::vector<long> remap(pts.size(), -1);
        std::vector<Point> used;
        for (auto& t : tris)
            for (auto& v : t) {
                if (remap[v] < 0) {
                    remap[v] = static_cast<long>(used.size());
                    used.push_back(pts[v]);
                }
                v = static_cast<std::size_t>(remap[v]);
            }
        return build_complex(used, tris);
    }
}

// Random integral 1-chain supported on up to k edges, coefficients in [-c, c].
inline Chain random_chain(std::mt19937_64& rng, const Complex2& K, std::size_t k, int c) {
    Chain t(1);
    std::uniform_int_distribution<std::size_t> pick(0, K.num_edges() - 1);
    std::uniform_int_distribution<int> coef(-c, c);
    for (std::size_t i = 0; i < k; ++i) t.add(pick(rng), coef(rng));
    return t;
}

// Random PSLG on integer points whose convex hull closure has no input angle
// below min_angle_deg. Segments are added greedily between random vertex pairs.
inline PSLG random_pslg(std::mt19937_64& rng, std::size_t points, std::size_t tries, double min_angle_deg) {
    std::uniform_int_distribution<int> c(0, 24);
    for (;;) {
        PSLG g;
        std::set<std::pair<int, int>> seen;
        while (g.vertices.size() < points) {
            int x = c(rng), y = c(rng);
            if (seen.insert({x, y}).second) g.add_vertex({Rational(x), Rational(y)});
        }
        try {
            if (with_convex_hull(g).min_input_angle_deg() < min_angle_deg) continue;
        } catch (const GeometryError&) {
            continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, points - 1);
        for (std::size_t k = 0; k < tries; ++k) {
            std::size_t a = pick(rng), b = pick(rng);
            if (a == b) continue;
            PSLG h = g;
            h.add_segment(a, b);
            try {
                h.validate();
                if (with_convex_hull(h).min_input_angle_deg() < min_angle_deg) continue;
            } catch (const GeometryError&) {
                continue;
            }
            g = std::move(h);
        }
        return g;
    }
}

}  // namespace oracle
