#include "flatnorm/mesh/grid.hpp"

#include "flatnorm/geom/predicates.hpp"

#include <cmath>

namespace flatnorm {

namespace {

Integer ceil_div(const Rational& a, const Rational& h) {
    Rational q = a / h;
    Integer z;
    mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return z;
}

bool on_grid(const Rational& w, const Rational& w0, const Rational& h) {
    Rational q = (w - w0) / h;
    return q.get_den() == 1;
}

Rational floor_dyadic(double v, int sig_bits) {
    int e = 0;
    std::frexp(v, &e);
    int k = sig_bits - e;
    return from_double(std::ldexp(std::floor(std::ldexp(v, k)), -k));
}

}  // namespace

GridResult superimpose_grid(const PSLG& g, const GridSpec& spec) {
    if (!(spec.cell_diameter > 0)) throw std::invalid_argument("grid cell diameter must be positive");
    PSLG H = with_convex_hull(g);
    auto hull = convex_hull(H.vertices);

    GridGeometry geo;
    Rational t = round_dyadic(std::tan(spec.rotation / 2), 30);
    geo.cos = (1 - t * t) / (1 + t * t);
    geo.sin = 2 * t / (1 + t * t);
    geo.side = floor_dyadic(spec.cell_diameter / std::sqrt(2.0), 20);
    geo.cell_diameter = geo.side.get_d() * std::sqrt(2.0);
    const Rational &c = geo.cos, &s = geo.sin, &h = geo.side;
    auto U = [&](const Point& p) -> Rational { return c * p.x() + s * p.y(); };
    auto V = [&](const Point& p) -> Rational { return c * p.y() - s * p.x(); };

    std::vector<Rational> pu, pv;
    for (const auto& p : H.vertices) {
        pu.push_back(U(p));
        pv.push_back(V(p));
    }
    Rational umin = pu[hull[0]], umax = umin, vmin = pv[hull[0]], vmax = vmin;
    for (auto i : hull) {
        umin = std::min(umin, pu[i]);
        umax = std::max(umax, pu[i]);
        vmin = std::min(vmin, pv[i]);
        vmax = std::max(vmax, pv[i]);
    }

    // a grid node on a segment: the segment meets a u-line at a v on the grid
    auto node_on_segment = [&](const Rational& u0, const Rational& v0) {
        for (const auto& seg : H.segments) {
            const Rational &ua = pu[seg.a], &ub = pu[seg.b];
            if (ua == ub) continue;
            Rational lo = std::min(ua, ub), hi = std::max(ua, ub);
            for (Integer i = ceil_div(lo - u0, h); i * h + u0 <= hi; ++i) {
                Rational w = u0 + Rational(i) * h;
                Rational tt = (w - ua) / (ub - ua);
                if (on_grid(pv[seg.a] + tt * (pv[seg.b] - pv[seg.a]), v0, h)) return true;
            }
        }
        return false;
    };
    Rational u0 = U(spec.origin), v0 = V(spec.origin);
    for (int k = 0;; ++k) {
        bool bad = false;
        for (std::size_t i = 0; i < H.vertices.size() && !bad; ++i)
            bad = on_grid(pu[i], u0, h) || on_grid(pv[i], v0, h);
        if (!bad) bad = node_on_segment(u0, v0);
        if (!bad) break;
        if (k == 64) throw GeometryError("could not place the grid off the input");
        ++geo.origin_shifts;
        u0 += h * Rational((k * 37) % 101 + 1, 257);
        v0 += h * Rational((k * 53) % 103 + 1, 263);
    }
    geo.u0 = u0;
    geo.v0 = v0;

    std::vector<Segment> segs;
    for (const auto& seg : H.segments) segs.push_back({H.vertices[seg.a], H.vertices[seg.b], seg.mult});
    // clip the line {w(p) = level} to the hull; w is U or V
    auto clip = [&](const std::vector<Rational>& w, const Rational& level) {
        std::vector<Point> hits;
        for (std::size_t i = 0; i < hull.size(); ++i) {
            std::size_t a = hull[i], b = hull[(i + 1) % hull.size()];
            if (w[a] == w[b]) continue;
            if ((w[a] - level) * (w[b] - level) > 0) continue;
            Rational tt = (level - w[a]) / (w[b] - w[a]);
            hits.push_back(lerp(H.vertices[a], H.vertices[b], tt));
        }
        if (hits.size() < 2) return;
        std::size_t lo = 0, hi = 0;
        for (std::size_t i = 1; i < hits.size(); ++i) {
            if (hits[i] < hits[lo]) lo = i;
            if (hits[hi] < hits[i]) hi = i;
        }
        if (hits[lo] != hits[hi]) {
            segs.push_back({hits[lo], hits[hi], 0});
            ++geo.lines;
        }
    };
    for (Integer i = ceil_div(umin - u0, h); u0 + Rational(i) * h <= umax; ++i) clip(pu, u0 + Rational(i) * h);
    for (Integer i = ceil_div(vmin - v0, h); v0 + Rational(i) * h <= vmax; ++i) clip(pv, v0 + Rational(i) * h);

    GridResult out;
    if (geo.lines == 0) {
        out.pslg = H;
    } else {
        out.pslg = pslg_from_segments(segs, H.vertices);
    }
    out.geometry = geo;
    return out;
}

}  // namespace flatnorm
