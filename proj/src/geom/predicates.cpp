#include "flatnorm/geom/predicates.hpp"

#include <algorithm>
#include <cmath>

namespace flatnorm {

namespace {

constexpr double kEps = 0x1p-50;

double mag(const Point& p) { return std::max(std::fabs(p.dx()), std::fabs(p.dy())); }

int sign_of(const Rational& r) { return sgn(r); }

int orient_exact(const Point& a, const Point& b, const Point& c) {
    Rational l = (b.x() - a.x()) * (c.y() - a.y());
    Rational r = (b.y() - a.y()) * (c.x() - a.x());
    return cmp(l, r) > 0 ? 1 : (l == r ? 0 : -1);
}

}  // namespace

Rational dot(const Point& a, const Point& b) { return a.x() * b.x() + a.y() * b.y(); }
Rational cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

Rational squared_distance(const Point& a, const Point& b) {
    Rational dx = a.x() - b.x(), dy = a.y() - b.y();
    return dx * dx + dy * dy;
}

double distance(const Point& a, const Point& b) {
    return std::sqrt(squared_distance(a, b).get_d());
}

Point lerp(const Point& a, const Point& b, const Rational& t) {
    return {a.x() + t * (b.x() - a.x()), a.y() + t * (b.y() - a.y())};
}

std::size_t PointHash::operator()(const Point& p) const {
    std::size_t h = std::hash<double>()(p.dx());
    return h ^ (std::hash<double>()(p.dy()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

int orient2d(const Point& a, const Point& b, const Point& c) {
    // Coordinates were rounded once to double; each difference carries at most
    // 2 ulp(m) of input error plus one rounding.
    double m = std::max({mag(a), mag(b), mag(c)});
    double e = 4 * kEps * m;
    double d1x = b.dx() - a.dx(), d1y = b.dy() - a.dy();
    double d2x = c.dx() - a.dx(), d2y = c.dy() - a.dy();
    double l = d1x * d2y, r = d1y * d2x;
    double det = l - r;
    double ax = std::fabs(d1x) + e, ay = std::fabs(d1y) + e, bx = std::fabs(d2x) + e,
           by = std::fabs(d2y) + e;
    double bound = (ax * by - std::fabs(d1x) * std::fabs(d2y)) +
                   (ay * bx - std::fabs(d1y) * std::fabs(d2x)) +
                   8 * kEps * (ax * by + ay * bx);
    if (det > bound) return 1;
    if (det < -bound) return -1;
    return orient_exact(a, b, c);
}

Rational area2(const Point& a, const Point& b, const Point& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

int incircle(const Point& a, const Point& b, const Point& c, const Point& d) {
    double m = std::max({mag(a), mag(b), mag(c), mag(d)});
    double e = 4 * kEps * m;
    double adx = a.dx() - d.dx(), ady = a.dy() - d.dy();
    double bdx = b.dx() - d.dx(), bdy = b.dy() - d.dy();
    double cdx = c.dx() - d.dx(), cdy = c.dy() - d.dy();
    double al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
    double det = al * (bdx * cdy - bdy * cdx) + bl * (cdx * ady - cdy * adx) +
                 cl * (adx * bdy - ady * bdx);
    auto up = [e](double v) { return std::fabs(v) + e; };
    double Ax = up(adx), Ay = up(ady), Bx = up(bdx), By = up(bdy), Cx = up(cdx), Cy = up(cdy);
    double Al = Ax * Ax + Ay * Ay, Bl = Bx * Bx + By * By, Cl = Cx * Cx + Cy * Cy;
    double perm_e = Al * (Bx * Cy + By * Cx) + Bl * (Cx * Ay + Cy * Ax) + Cl * (Ax * By + Ay * Bx);
    double ax0 = std::fabs(adx), ay0 = std::fabs(ady), bx0 = std::fabs(bdx), by0 = std::fabs(bdy),
           cx0 = std::fabs(cdx), cy0 = std::fabs(cdy);
    double perm0 = al * (bx0 * cy0 + by0 * cx0) + bl * (cx0 * ay0 + cy0 * ax0) +
                   cl * (ax0 * by0 + ay0 * bx0);
    double bound = (perm_e - perm0) + 32 * kEps * perm_e;
    if (det > bound) return 1;
    if (det < -bound) return -1;

    Rational eax = a.x() - d.x(), eay = a.y() - d.y();
    Rational ebx = b.x() - d.x(), eby = b.y() - d.y();
    Rational ecx = c.x() - d.x(), ecy = c.y() - d.y();
    Rational exact = (eax * eax + eay * eay) * (ebx * ecy - eby * ecx) +
                     (ebx * ebx + eby * eby) * (ecx * eay - ecy * eax) +
                     (ecx * ecx + ecy * ecy) * (eax * eby - eay * ebx);
    return sign_of(exact);
}

Point circumcenter(const Point& a, const Point& b, const Point& c) {
    Rational bx = b.x() - a.x(), by = b.y() - a.y();
    Rational cx = c.x() - a.x(), cy = c.y() - a.y();
    Rational d = 2 * (bx * cy - by * cx);
    if (d == 0) throw GeometryError("circumcenter of collinear points");
    Rational b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    Rational ux = (cy * b2 - by * c2) / d;
    Rational uy = (bx * c2 - cx * b2) / d;
    return {a.x() + ux, a.y() + uy};
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
    if (orient2d(a, b, p) != 0) return false;
    return diametral_sign(a, b, p) <= 0;
}

bool in_segment_interior(const Point& a, const Point& b, const Point& p) {
    if (p == a || p == b) return false;
    return on_segment(a, b, p);
}

int diametral_sign(const Point& a, const Point& b, const Point& p) {
    double ax = a.dx() - p.dx(), ay = a.dy() - p.dy(), bx = b.dx() - p.dx(), by = b.dy() - p.dy();
    double v = ax * bx + ay * by;
    double m = std::max({mag(a), mag(b), mag(p)});
    double e = 4 * kEps * m;
    double bound = (std::fabs(ax) + e) * (std::fabs(bx) + e) + (std::fabs(ay) + e) * (std::fabs(by) + e) -
                   std::fabs(ax * bx) - std::fabs(ay * by) +
                   8 * kEps * (std::fabs(ax * bx) + std::fabs(ay * by) + 1e-300);
    if (v > bound) return 1;
    if (v < -bound) return -1;
    return sign_of((a.x() - p.x()) * (b.x() - p.x()) + (a.y() - p.y()) * (b.y() - p.y()));
}

SegmentRelation segment_relation(const Point& a, const Point& b, const Point& c, const Point& d) {
    if (std::max(a.dx(), b.dx()) < std::min(c.dx(), d.dx()) - 1e-9 * (1 + std::fabs(c.dx()) + std::fabs(d.dx())) ||
        std::max(c.dx(), d.dx()) < std::min(a.dx(), b.dx()) - 1e-9 * (1 + std::fabs(a.dx()) + std::fabs(b.dx())) ||
        std::max(a.dy(), b.dy()) < std::min(c.dy(), d.dy()) - 1e-9 * (1 + std::fabs(c.dy()) + std::fabs(d.dy())) ||
        std::max(c.dy(), d.dy()) < std::min(a.dy(), b.dy()) - 1e-9 * (1 + std::fabs(a.dy()) + std::fabs(b.dy())))
        return SegmentRelation::disjoint;
    int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
    int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
    if (o1 == 0 && o2 == 0) {
        // collinear: compare projections
        bool hit = on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
        if (!hit) return SegmentRelation::disjoint;
        int shared = 0;
        if (c == a || c == b) ++shared;
        if (d == a || d == b) ++shared;
        if (shared == 2) return SegmentRelation::overlapping;
        if (shared == 1) {
            // they share one endpoint; overlapping iff the other endpoint of one lies on the other
            bool inner = in_segment_interior(a, b, c) || in_segment_interior(a, b, d) ||
                         in_segment_interior(c, d, a) || in_segment_interior(c, d, b);
            return inner ? SegmentRelation::overlapping : SegmentRelation::touching;
        }
        return SegmentRelation::overlapping;
    }
    if (o1 * o2 < 0 && o3 * o4 < 0) return SegmentRelation::proper;
    if ((o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
        (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b)))
        return SegmentRelation::touching;
    return SegmentRelation::disjoint;
}

std::optional<Rational> line_intersection_param(const Point& a, const Point& b, const Point& c,
                                                const Point& d) {
    Rational rx = b.x() - a.x(), ry = b.y() - a.y();
    Rational sx = d.x() - c.x(), sy = d.y() - c.y();
    Rational den = rx * sy - ry * sx;
    if (den == 0) return std::nullopt;
    Rational qx = c.x() - a.x(), qy = c.y() - a.y();
    Rational t = (qx * sy - qy * sx) / den;
    return t;
}

Rational project_param(const Point& a, const Point& b, const Point& p) {
    Rational dx = b.x() - a.x(), dy = b.y() - a.y();
    return ((p.x() - a.x()) * dx + (p.y() - a.y()) * dy) / (dx * dx + dy * dy);
}

}  // namespace flatnorm
