#pragma once

#include "flatnorm/complex/complex.hpp"

#include <vector>

namespace flatnorm {

struct SimplexRegularity {
    double diameter = 0, inradius = 0, perimeter = 0;
    double b_sigma = 0;  // area of the disk of radius inradius/2
    double theta = 0;    // diam·perim/B + 2·diam/inradius
    double min_angle_deg = 0;
};

struct RegularityReport {
    std::vector<SimplexRegularity> simplices;  // indexed like the triangle subset given
    double theta_K = 0;       // sup(diam·perim/B) + 2·sup(diam/inradius)
    double theta_max = 0;     // max over simplices of theta
    double min_angle_deg = 60;
    std::size_t min_angle_triangle = 0;
    double max_diameter = 0;
};

SimplexRegularity simplex_regularity(const Point& a, const Point& b, const Point& c);

// Over all triangles, or over the given subset.
RegularityReport regularity(const Complex2& K);
RegularityReport regularity(const Complex2& K, const std::vector<std::size_t>& subset);

// (48/π)cot²(θ/2) + 4cot(θ/2), θ in degrees, 0 < θ <= 60.
double angle_regularity_bound(double theta_deg);

// Exact test: is the angle at p in triangle (p, q, r) strictly smaller than the
// angle whose cosine squared is cos2 (cos2 in [0, 1], angle < 90°)?
bool angle_below(const Point& p, const Point& q, const Point& r, const Rational& cos2);
// Exact comparison of the smallest angle against threshold_deg (< 90).
bool triangle_has_angle_below(const Point& a, const Point& b, const Point& c, double threshold_deg);

// Smallest angle in degrees, with the vertex slot (0..2) where it occurs.
double min_angle_deg(const Point& a, const Point& b, const Point& c, int* slot = nullptr);

struct SmallAngle {
    std::size_t triangle;
    double angle_deg;
    bool in_tube;
};

struct AngleAudit {
    double radius = 0, threshold_deg = 30;
    std::vector<SmallAngle> small;
    bool all_in_tube = true;
    std::vector<std::size_t> outside;  // triangles not contained in the tube
    double theta_outside = 0;          // theta_K over the outside triangles
    double min_angle_outside = 60;
};

// Conservative tube containment: a triangle counts as inside when it lies in
// one segment's radius-capsule, or in the ball around its nearest vertex.
bool triangle_in_tube(const Point& a, const Point& b, const Point& c, const PLCurrent& skeleton, double radius);

AngleAudit small_angle_locations(const Complex2& K, const PLCurrent& skeleton, double radius,
                                 double threshold_deg = 30);

}  // namespace flatnorm
