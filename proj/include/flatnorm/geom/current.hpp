#pragma once

#include "flatnorm/geom/point.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace flatnorm {

struct Segment {
    Point a, b;
    std::int64_t mult = 1;
};

// Piecewise-linear integral 1-current: a formal sum of oriented segments.
class PLCurrent {
public:
    PLCurrent() = default;
    explicit PLCurrent(std::vector<Segment> segs);

    // Open polyline through pts (closed adds the last-to-first segment).
    static PLCurrent polyline(const std::vector<Point>& pts, std::int64_t mult = 1,
                              bool closed = false);

    const std::vector<Segment>& segments() const { return segs_; }
    bool empty() const { return segs_.empty(); }
    std::size_t size() const { return segs_.size(); }

    void add(const Point& a, const Point& b, std::int64_t mult);
    void append(const PLCurrent& other, std::int64_t scale = 1);

    // Total |mult|·length of the canonical form (overlaps are summed first).
    double mass() const;
    // Sum over the raw segment list, ignoring cancellation.
    double raw_mass() const;

    // Canonical form: collinear overlapping pieces summed, zero pieces dropped,
    // adjacent pieces with equal multiplicity merged. Each segment runs from the
    // lexicographically smaller endpoint; sign carried by the multiplicity.
    PLCurrent canonical() const;

    PLCurrent scaled(std::int64_t k) const;
    PLCurrent operator-() const { return scaled(-1); }
    friend PLCurrent operator+(const PLCurrent& a, const PLCurrent& b);
    friend PLCurrent operator-(const PLCurrent& a, const PLCurrent& b);

private:
    std::vector<Segment> segs_;
};

struct Polygon {
    std::vector<Point> vertices;  // counter-clockwise after construction
    std::int64_t mult = 1;
};

// Piecewise-linear integral 2-current: simple polygons with multiplicities.
class PLRegion {
public:
    PLRegion() = default;
    // Polygons are validated as simple; clockwise input is flipped with its
    // multiplicity negated. Repeated consecutive vertices are dropped.
    explicit PLRegion(std::vector<Polygon> polys, bool validate = true);

    static PLRegion polygon(const std::vector<Point>& pts, std::int64_t mult = 1);

    const std::vector<Polygon>& polygons() const { return polys_; }
    bool empty() const { return polys_.empty(); }

    void add(Polygon p, bool validate = true);
    void append(const PLRegion& other, std::int64_t scale = 1);

    // Σ |mult|·area. Exact current mass when the polygons have disjoint interiors.
    Rational mass_exact() const;
    double mass() const { return mass_exact().get_d(); }
    // Σ mult·area.
    Rational signed_area() const;

    PLRegion scaled(std::int64_t k) const;

private:
    std::vector<Polygon> polys_;
};

using PointMasses = std::map<Point, std::int64_t>;

PointMasses pl_boundary(const PLCurrent& c);
PLCurrent region_boundary(const PLRegion& r);

PLCurrent dilate(const PLCurrent& c, const Rational& factor);
PLRegion dilate(const PLRegion& r, const Rational& factor);

// Twice the signed area of a closed vertex loop.
Rational polygon_area2(const std::vector<Point>& pts);
bool polygon_is_simple(const std::vector<Point>& pts);
// Winding number of the loop around p; p must not lie on the loop.
int winding_number(const std::vector<Point>& loop, const Point& p);
bool point_on_loop(const std::vector<Point>& loop, const Point& p);

}  // namespace flatnorm
