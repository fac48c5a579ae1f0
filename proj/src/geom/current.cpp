#include "flatnorm/geom/current.hpp"

#include "flatnorm/geom/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace flatnorm {

namespace {

struct LineKey {
    int vertical;
    Rational slope, offset;
    bool operator<(const LineKey& o) const {
        if (vertical != o.vertical) return vertical < o.vertical;
        int c = cmp(slope, o.slope);
        if (c != 0) return c < 0;
        return offset < o.offset;
    }
};

LineKey line_of(const Point& a, const Point& b) {
    if (a.x() != b.x()) {
        Rational k = (b.y() - a.y()) / (b.x() - a.x());
        return {0, k, a.y() - k * a.x()};
    }
    return {1, Rational(0), a.x()};
}

const Rational& param_on(const LineKey& k, const Point& p) { return k.vertical ? p.y() : p.x(); }

Point point_on(const LineKey& k, const Rational& t) {
    if (k.vertical) return {k.offset, t};
    return {t, k.slope * t + k.offset};
}

}  // namespace

PLCurrent::PLCurrent(std::vector<Segment> segs) {
    for (auto& s : segs) add(s.a, s.b, s.mult);
}

void PLCurrent::add(const Point& a, const Point& b, std::int64_t mult) {
    if (a == b) throw GeometryError("zero-length segment in current");
    if (mult == 0) return;
    segs_.push_back({a, b, mult});
}

void PLCurrent::append(const PLCurrent& other, std::int64_t scale) {
    if (scale == 0) return;
    for (const auto& s : other.segs_) segs_.push_back({s.a, s.b, s.mult * scale});
}

PLCurrent PLCurrent::polyline(const std::vector<Point>& pts, std::int64_t mult, bool closed) {
    PLCurrent c;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) c.add(pts[i], pts[i + 1], mult);
    if (closed && pts.size() > 2) c.add(pts.back(), pts.front(), mult);
    return c;
}

double PLCurrent::raw_mass() const {
    double m = 0;
    for (const auto& s : segs_) m += std::fabs(static_cast<double>(s.mult)) * distance(s.a, s.b);
    return m;
}

double PLCurrent::mass() const { return canonical().raw_mass(); }

PLCurrent PLCurrent::canonical() const {
    std::map<LineKey, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < segs_.size(); ++i) groups[line_of(segs_[i].a, segs_[i].b)].push_back(i);

    PLCurrent out;
    for (const auto& [key, ids] : groups) {
        // net multiplicity change at each breakpoint, in the increasing-param direction
        std::map<Rational, std::int64_t> delta;
        for (auto i : ids) {
            const auto& s = segs_[i];
            const Rational& ta = param_on(key, s.a);
            const Rational& tb = param_on(key, s.b);
            std::int64_t m = ta < tb ? s.mult : -s.mult;
            delta[std::min(ta, tb)] += m;
            delta[std::max(ta, tb)] -= m;
        }
        std::int64_t run = 0;
        const Rational* start = nullptr;
        for (const auto& [t, d] : delta) {
            std::int64_t next = run + d;
            if (next != run) {
                if (run != 0 && start) out.segs_.push_back({point_on(key, *start), point_on(key, t), run});
                start = &t;
            }
            run = next;
        }
    }
    return out;
}

PLCurrent PLCurrent::scaled(std::int64_t k) const {
    PLCurrent c;
    c.append(*this, k);
    return c;
}

PLCurrent operator+(const PLCurrent& a, const PLCurrent& b) {
    PLCurrent c = a;
    c.append(b);
    return c;
}

PLCurrent operator-(const PLCurrent& a, const PLCurrent& b) {
    PLCurrent c = a;
    c.append(b, -1);
    return c;
}

Rational polygon_area2(const std::vector<Point>& pts) {
    Rational s = 0;
    for (std::size_t i = 0, n = pts.size(); i < n; ++i) s += cross(pts[i], pts[(i + 1) % n]);
    return s;
}

bool polygon_is_simple(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    if (n < 3) return false;
    if (polygon_area2(pts) == 0) return false;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto lo = [&](std::size_t i) { return std::min(pts[i].dx(), pts[(i + 1) % n].dx()); };
    auto hi = [&](std::size_t i) { return std::max(pts[i].dx(), pts[(i + 1) % n].dx()); };
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return lo(a) < lo(b); });
    for (std::size_t oi = 0; oi < n; ++oi) {
        std::size_t i = order[oi];
        const Point &a = pts[i], &b = pts[(i + 1) % n];
        if (a == b) return false;
        double reach = hi(i) + 1e-9 * (1 + std::fabs(hi(i)));
        for (std::size_t oj = oi + 1; oj < n && lo(order[oj]) <= reach; ++oj) {
            std::size_t j = order[oj];
            const Point &c = pts[j], &d = pts[(j + 1) % n];
            auto rel = segment_relation(a, b, c, d);
            if (rel == SegmentRelation::disjoint) continue;
            bool adjacent = (j == (i + 1) % n) || (i == (j + 1) % n);
            if (!adjacent) return false;
            if (rel != SegmentRelation::touching) return false;
            if (n == 3) continue;
            // adjacent edges may meet only at their shared vertex
            const Point& shared = (j == (i + 1) % n) ? b : a;
            const Point& other = (j == (i + 1) % n) ? d : c;
            const Point& mine = (j == (i + 1) % n) ? a : b;
            if (orient2d(mine, shared, other) == 0 && diametral_sign(mine, other, shared) > 0) return false;
        }
    }
    return true;
}

int winding_number(const std::vector<Point>& loop, const Point& p) {
    int w = 0;
    for (std::size_t i = 0, n = loop.size(); i < n; ++i) {
        const Point &a = loop[i], &b = loop[(i + 1) % n];
        if (a.y() <= p.y()) {
            if (b.y() > p.y() && orient2d(a, b, p) > 0) ++w;
        } else {
            if (b.y() <= p.y() && orient2d(a, b, p) < 0) --w;
        }
    }
    return w;
}

bool point_on_loop(const std::vector<Point>& loop, const Point& p) {
    for (std::size_t i = 0, n = loop.size(); i < n; ++i)
        if (on_segment(loop[i], loop[(i + 1) % n], p)) return true;
    return false;
}

PLRegion::PLRegion(std::vector<Polygon> polys, bool validate) {
    for (auto& p : polys) add(std::move(p), validate);
}

PLRegion PLRegion::polygon(const std::vector<Point>& pts, std::int64_t mult) {
    PLRegion r;
    r.add({pts, mult});
    return r;
}

void PLRegion::add(Polygon p, bool validate) {
    if (p.mult == 0) return;
    std::vector<Point> v;
    for (auto& q : p.vertices)
        if (v.empty() || !(v.back() == q)) v.push_back(q);
    while (v.size() > 1 && v.front() == v.back()) v.pop_back();
    if (validate && !polygon_is_simple(v)) throw GeometryError("polygon is not simple");
    if (v.size() < 3) throw GeometryError("polygon needs three vertices");
    Rational a = polygon_area2(v);
    if (a == 0) throw GeometryError("zero-area polygon");
    if (a < 0) {
        std::reverse(v.begin(), v.end());
        p.mult = -p.mult;
    }
    polys_.push_back({std::move(v), p.mult});
}

void PLRegion::append(const PLRegion& other, std::int64_t scale) {
    if (scale == 0) return;
    for (const auto& p : other.polys_) polys_.push_back({p.vertices, p.mult * scale});
}

Rational PLRegion::mass_exact() const {
    Rational m = 0;
    for (const auto& p : polys_) m += abs(Rational(p.mult)) * polygon_area2(p.vertices) / 2;
    return m;
}

Rational PLRegion::signed_area() const {
    Rational m = 0;
    for (const auto& p : polys_) m += Rational(p.mult) * polygon_area2(p.vertices) / 2;
    return m;
}

PLRegion PLRegion::scaled(std::int64_t k) const {
    PLRegion r;
    r.append(*this, k);
    return r;
}

PointMasses pl_boundary(const PLCurrent& c) {
    PointMasses m;
    for (const auto& s : c.segments()) {
        m[s.a] -= s.mult;
        m[s.b] += s.mult;
    }
    for (auto it = m.begin(); it != m.end();) it = it->second == 0 ? m.erase(it) : std::next(it);
    return m;
}

PLCurrent region_boundary(const PLRegion& r) {
    PLCurrent c;
    for (const auto& p : r.polygons()) c.append(PLCurrent::polyline(p.vertices, p.mult, true));
    return c;
}

PLCurrent dilate(const PLCurrent& c, const Rational& f) {
    if (f <= 0) throw GeometryError("dilation factor must be positive");
    PLCurrent out;
    for (const auto& s : c.segments()) out.add(f * s.a, f * s.b, s.mult);
    return out;
}

PLRegion dilate(const PLRegion& r, const Rational& f) {
    if (f <= 0) throw GeometryError("dilation factor must be positive");
    PLRegion out;
    for (const auto& p : r.polygons()) {
        Polygon q{{}, p.mult};
        for (const auto& v : p.vertices) q.vertices.push_back(f * v);
        out.add(std::move(q), false);
    }
    return out;
}

}  // namespace flatnorm
