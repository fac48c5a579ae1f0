#include "flatnorm/complex/regularity.hpp"

#include "flatnorm/geom/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flatnorm {

namespace {

double point_segment_distance(double px, double py, double ax, double ay, double bx, double by) {
    double dx = bx - ax, dy = by - ay;
    double l2 = dx * dx + dy * dy;
    double t = l2 > 0 ? std::clamp(((px - ax) * dx + (py - ay) * dy) / l2, 0.0, 1.0) : 0.0;
    double qx = ax + t * dx - px, qy = ay + t * dy - py;
    return std::sqrt(qx * qx + qy * qy);
}

}  // namespace

SimplexRegularity simplex_regularity(const Point& a, const Point& b, const Point& c) {
    Rational A2 = area2(a, b, c);
    if (A2 == 0) throw GeometryError("degenerate triangle in regularity computation");
    double area = std::fabs(A2.get_d()) / 2;
    double la = distance(b, c), lb = distance(a, c), lc = distance(a, b);
    SimplexRegularity s;
    s.perimeter = la + lb + lc;
    s.diameter = std::max({la, lb, lc});
    s.inradius = 2 * area / s.perimeter;
    s.b_sigma = std::numbers::pi * s.inradius * s.inradius / 4;
    s.theta = s.diameter * s.perimeter / s.b_sigma + 2 * s.diameter / s.inradius;
    s.min_angle_deg = min_angle_deg(a, b, c);
    return s;
}

RegularityReport regularity(const Complex2& K, const std::vector<std::size_t>& subset) {
    RegularityReport r;
    double sup1 = 0, sup2 = 0;
    for (auto t : subset) {
        const auto& v = K.triangles()[t];
        auto s = simplex_regularity(K.vertices()[v[0]], K.vertices()[v[1]], K.vertices()[v[2]]);
        sup1 = std::max(sup1, s.diameter * s.perimeter / s.b_sigma);
        sup2 = std::max(sup2, s.diameter / s.inradius);
        r.theta_max = std::max(r.theta_max, s.theta);
        r.max_diameter = std::max(r.max_diameter, s.diameter);
        if (s.min_angle_deg < r.min_angle_deg) {
            r.min_angle_deg = s.min_angle_deg;
            r.min_angle_triangle = t;
        }
        r.simplices.push_back(s);
    }
    r.theta_K = sup1 + 2 * sup2;
    return r;
}

RegularityReport regularity(const Complex2& K) {
    if (K.num_triangles() == 0) throw GeometryError("regularity of an empty complex");
    std::vector<std::size_t> all(K.num_triangles());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return regularity(K, all);
}

double angle_regularity_bound(double theta_deg) {
    if (!(theta_deg > 0) || theta_deg > 60) throw std::invalid_argument("angle must lie in (0, 60] degrees");
    double h = theta_deg * std::numbers::pi / 360;
    double ct = 1 / std::tan(h);
    return 48 / std::numbers::pi * ct * ct + 4 * ct;
}

bool angle_below(const Point& p, const Point& q, const Point& r, const Rational& cos2) {
    Rational ux = q.x() - p.x(), uy = q.y() - p.y(), vx = r.x() - p.x(), vy = r.y() - p.y();
    Rational d = ux * vx + uy * vy;
    if (d <= 0) return false;
    return d * d > cos2 * (ux * ux + uy * uy) * (vx * vx + vy * vy);
}

double min_angle_deg(const Point& a, const Point& b, const Point& c, int* slot) {
    const Point* P[3] = {&a, &b, &c};
    double best = 180;
    for (int k = 0; k < 3; ++k) {
        const Point &p = *P[k], &q = *P[(k + 1) % 3], &r = *P[(k + 2) % 3];
        double ux = q.dx() - p.dx(), uy = q.dy() - p.dy(), vx = r.dx() - p.dx(), vy = r.dy() - p.dy();
        double ang = std::atan2(std::fabs(ux * vy - uy * vx), ux * vx + uy * vy) * 180 / std::numbers::pi;
        if (ang < best) {
            best = ang;
            if (slot) *slot = k;
        }
    }
    return best;
}

bool triangle_has_angle_below(const Point& a, const Point& b, const Point& c, double threshold_deg) {
    double cs = std::cos(threshold_deg * std::numbers::pi / 180);
    Rational cos2 = from_double(cs * cs);
    return angle_below(a, b, c, cos2) || angle_below(b, c, a, cos2) || angle_below(c, a, b, cos2);
}

bool triangle_in_tube(const Point& a, const Point& b, const Point& c, const PLCurrent& skeleton, double radius) {
    const double r = radius * (1 - 1e-12);
    const Point* P[3] = {&a, &b, &c};
    double diam = std::max({distance(a, b), distance(b, c), distance(a, c)});
    double nearest = INFINITY;
    for (const auto& s : skeleton.segments()) {
        double worst = 0;
        for (auto* p : P) {
            double d = point_segment_distance(p->dx(), p->dy(), s.a.dx(), s.a.dy(), s.b.dx(), s.b.dy());
            worst = std::max(worst, d);
            nearest = std::min(nearest, d);
        }
        if (worst <= r) return true;
    }
    return nearest + diam <= r;
}

AngleAudit small_angle_locations(const Complex2& K, const PLCurrent& skeleton, double radius, double threshold_deg) {
    if (!(radius > 0)) throw std::invalid_argument("tube radius must be positive");
    AngleAudit audit;
    audit.radius = radius;
    audit.threshold_deg = threshold_deg;
    const auto& V = K.vertices();
    for (std::size_t t = 0; t < K.num_triangles(); ++t) {
        const auto& v = K.triangles()[t];
        bool inside = triangle_in_tube(V[v[0]], V[v[1]], V[v[2]], skeleton, radius);
        if (!inside) audit.outside.push_back(t);
        if (triangle_has_angle_below(V[v[0]], V[v[1]], V[v[2]], threshold_deg)) {
            audit.small.push_back({t, min_angle_deg(V[v[0]], V[v[1]], V[v[2]]), inside});
            if (!inside) audit.all_in_tube = false;
        }
    }
    if (!audit.outside.empty()) {
        auto rep = regularity(K, audit.outside);
        audit.theta_outside = rep.theta_K;
        audit.min_angle_outside = rep.min_angle_deg;
    }
    return audit;
}

}  // namespace flatnorm
