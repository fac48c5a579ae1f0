#pragma once

#include "flatnorm/geom/point.hpp"

#include <optional>

namespace flatnorm {

// Sign of the signed area of (a, b, c): +1 counter-clockwise, -1 clockwise, 0 collinear.
int orient2d(const Point& a, const Point& b, const Point& c);

// +1 if d lies strictly inside the circle through a, b, c (given CCW), 0 on it.
int incircle(const Point& a, const Point& b, const Point& c, const Point& d);

// Twice the signed area of (a, b, c).
Rational area2(const Point& a, const Point& b, const Point& c);

Point circumcenter(const Point& a, const Point& b, const Point& c);

// p on the closed segment [a, b] (a != b).
bool on_segment(const Point& a, const Point& b, const Point& p);
// p strictly between a and b on segment ab.
bool in_segment_interior(const Point& a, const Point& b, const Point& p);

enum class SegmentRelation { disjoint, proper, touching, overlapping };

// Classifies how the closed segments ab and cd meet.
SegmentRelation segment_relation(const Point& a, const Point& b, const Point& c, const Point& d);

// Parameter t along ab of the intersection of lines ab and cd; nullopt when parallel.
std::optional<Rational> line_intersection_param(const Point& a, const Point& b, const Point& c,
                                                const Point& d);

// Parameter of p projected on line ab (exact: dot(p-a, b-a)/|b-a|^2).
Rational project_param(const Point& a, const Point& b, const Point& p);

// Sign of the dot product (a - p)·(b - p): negative when p sees ab at an obtuse angle.
int diametral_sign(const Point& a, const Point& b, const Point& p);

}  // namespace flatnorm
