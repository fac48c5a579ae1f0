#include "flatnorm/geom/arrangement.hpp"

#include "flatnorm/geom/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace flatnorm {

namespace {

struct Piece {
    Point lo, hi;  // lo.x < hi.x
    std::int64_t sign;
};

Rational y_at(const Piece& p, const Rational& x) {
    return p.lo.y() + (p.hi.y() - p.lo.y()) * (x - p.lo.x()) / (p.hi.x() - p.lo.x());
}

double tol(double v) { return 1e-9 * (1 + std::fabs(v)); }

}  // namespace

PLRegion filling_region(const PLCurrent& cycle) {
    if (!pl_boundary(cycle).empty()) throw GeometryError("filling requested for a current with boundary");
    std::vector<Piece> pieces;
    const PLCurrent canon = cycle.canonical();
    for (const auto& s : canon.segments()) {
        int c = cmp(s.a.x(), s.b.x());
        if (c == 0) continue;
        if (c < 0)
            pieces.push_back({s.a, s.b, s.mult});
        else
            pieces.push_back({s.b, s.a, -s.mult});
    }
    PLRegion region;
    if (pieces.empty()) return region;

    std::set<Rational> xs;
    for (const auto& p : pieces) {
        xs.insert(p.lo.x());
        xs.insert(p.hi.x());
    }
    std::vector<std::size_t> order(pieces.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pieces[a].lo.dx() < pieces[b].lo.dx(); });
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const Piece& p = pieces[order[oi]];
        double reach = p.hi.dx() + tol(p.hi.dx());
        for (std::size_t oj = oi + 1; oj < order.size() && pieces[order[oj]].lo.dx() <= reach; ++oj) {
            const Piece& q = pieces[order[oj]];
            if (segment_relation(p.lo, p.hi, q.lo, q.hi) != SegmentRelation::proper) continue;
            auto t = line_intersection_param(p.lo, p.hi, q.lo, q.hi);
            xs.insert(p.lo.x() + *t * (p.hi.x() - p.lo.x()));
        }
    }

    std::vector<Rational> X(xs.begin(), xs.end());
    std::vector<std::size_t> by_lo(pieces.size());
    std::iota(by_lo.begin(), by_lo.end(), 0);
    std::sort(by_lo.begin(), by_lo.end(), [&](auto a, auto b) { return pieces[a].lo.x() < pieces[b].lo.x(); });
    std::vector<std::size_t> active;
    std::size_t next = 0;
    for (std::size_t k = 0; k + 1 < X.size(); ++k) {
        const Rational &x0 = X[k], &x1 = X[k + 1];
        active.erase(std::remove_if(active.begin(), active.end(), [&](auto i) { return pieces[i].hi.x() <= x0; }),
                     active.end());
        while (next < by_lo.size() && pieces[by_lo[next]].lo.x() <= x0) {
            if (pieces[by_lo[next]].hi.x() > x0) active.push_back(by_lo[next]);
            ++next;
        }
        if (active.empty()) continue;
        struct Cut {
            Rational y0, y1;
            std::int64_t sign;
        };
        std::vector<Cut> cuts;
        for (auto i : active) cuts.push_back({y_at(pieces[i], x0), y_at(pieces[i], x1), pieces[i].sign});
        std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) {
            Rational sa = a.y0 + a.y1, sb = b.y0 + b.y1;
            return sa < sb;
        });
        std::int64_t w = 0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            w += cuts[i].sign;
            if (w == 0) continue;
            const Cut &lo = cuts[i], &hi = cuts[i + 1];
            std::vector<Point> poly{{x0, lo.y0}, {x1, lo.y1}, {x1, hi.y1}, {x0, hi.y0}};
            std::vector<Point> clean;
            for (auto& p : poly)
                if (clean.empty() || clean.back() != p) clean.push_back(p);
            if (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
            if (clean.size() < 3 || polygon_area2(clean) == 0) continue;
            region.add({std::move(clean), w}, false);
        }
        w += cuts.back().sign;
        if (w != 0) throw GeometryError("winding number does not close; input is not a cycle");
    }
    return region;
}

PLRegion filler_region(const PLCurrent& a, const PLCurrent& b) {
    if (pl_boundary(a) != pl_boundary(b)) throw GeometryError("filler requested for currents with different boundaries");
    return filling_region(a - b);
}

Rational filler_area_bound(const PLCurrent& a, const PLCurrent& b) { return filler_region(a, b).mass_exact(); }

Noding node_segments(const std::vector<std::pair<Point, Point>>& segs, const std::vector<Point>& extra_points) {
    const std::size_t n = segs.size();
    std::vector<std::vector<Rational>> cuts(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (segs[i].first == segs[i].second) throw GeometryError("zero-length segment");
        cuts[i] = {Rational(0), Rational(1)};
    }
    auto lo = [&](std::size_t i) { return std::min(segs[i].first.dx(), segs[i].second.dx()); };
    auto hi = [&](std::size_t i) { return std::max(segs[i].first.dx(), segs[i].second.dx()); };
    auto ylo = [&](std::size_t i) { return std::min(segs[i].first.dy(), segs[i].second.dy()); };
    auto yhi = [&](std::size_t i) { return std::max(segs[i].first.dy(), segs[i].second.dy()); };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return lo(a) < lo(b); });

    auto add_point = [&](std::size_t i, const Point& p) {
        const auto& [a, b] = segs[i];
        if (in_segment_interior(a, b, p)) cuts[i].push_back(project_param(a, b, p));
    };
    for (std::size_t oi = 0; oi < n; ++oi) {
        std::size_t i = order[oi];
        double reach = hi(i) + tol(hi(i));
        for (std::size_t oj = oi + 1; oj < n && lo(order[oj]) <= reach; ++oj) {
            std::size_t j = order[oj];
            if (ylo(j) > yhi(i) + tol(yhi(i)) || ylo(i) > yhi(j) + tol(yhi(j))) continue;
            const auto& [a, b] = segs[i];
            const auto& [c, d] = segs[j];
            auto rel = segment_relation(a, b, c, d);
            if (rel == SegmentRelation::disjoint) continue;
            if (rel == SegmentRelation::proper) {
                auto t = line_intersection_param(a, b, c, d);
                Point x = lerp(a, b, *t);
                cuts[i].push_back(*t);
                cuts[j].push_back(project_param(c, d, x));
                continue;
            }
            add_point(i, c);
            add_point(i, d);
            add_point(j, a);
            add_point(j, b);
        }
    }
    if (!extra_points.empty()) {
        std::vector<std::size_t> porder(extra_points.size());
        std::iota(porder.begin(), porder.end(), 0);
        std::sort(porder.begin(), porder.end(), [&](auto a, auto b) { return extra_points[a].dx() < extra_points[b].dx(); });
        for (std::size_t i = 0; i < n; ++i) {
            auto first = std::lower_bound(porder.begin(), porder.end(), lo(i) - tol(lo(i)),
                                          [&](std::size_t k, double v) { return extra_points[k].dx() < v; });
            for (auto it = first; it != porder.end() && extra_points[*it].dx() <= hi(i) + tol(hi(i)); ++it)
                add_point(i, extra_points[*it]);
        }
    }

    Noding out;
    std::map<Point, std::size_t> ids;
    auto vid = [&](const Point& p) {
        auto [it, fresh] = ids.emplace(p, out.vertices.size());
        if (fresh) out.vertices.push_back(p);
        return it->second;
    };
    for (const auto& p : extra_points) vid(p);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> seg_ids;
    for (std::size_t i = 0; i < n; ++i) {
        auto& c = cuts[i];
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        const auto& [a, b] = segs[i];
        std::vector<std::size_t> vs;
        for (const auto& t : c) vs.push_back(t == 0 ? vid(a) : t == 1 ? vid(b) : vid(lerp(a, b, t)));
        for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
            std::size_t u = vs[k], v = vs[k + 1];
            int sign = 1;
            if (out.vertices[v] < out.vertices[u]) {
                std::swap(u, v);
                sign = -1;
            }
            auto [it, fresh] = seg_ids.emplace(std::make_pair(u, v), out.segments.size());
            if (fresh) out.segments.push_back({u, v, {}});
            out.segments[it->second].sources.emplace_back(i, sign);
        }
    }
    return out;
}

}  // namespace flatnorm
