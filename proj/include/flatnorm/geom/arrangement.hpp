#pragma once

#include "flatnorm/geom/current.hpp"

#include <utility>
#include <vector>

namespace flatnorm {

// The unique compactly supported 2-current R with ∂R = cycle, as vertical-slab
// trapezoids weighted by winding number. Throws if cycle has a boundary.
PLRegion filling_region(const PLCurrent& cycle);

// Region R with ∂R = a - b; requires pl_boundary(a) == pl_boundary(b).
PLRegion filler_region(const PLCurrent& a, const PLCurrent& b);
Rational filler_area_bound(const PLCurrent& a, const PLCurrent& b);

struct NodedSegment {
    std::size_t a = 0, b = 0;  // vertex ids, a < b in point order
    // (input index, +1 if the input runs a -> b else -1)
    std::vector<std::pair<std::size_t, int>> sources;
};

struct Noding {
    std::vector<Point> vertices;
    std::vector<NodedSegment> segments;
};

// Splits segments at all mutual intersections and at the extra points lying on
// them; collinear overlaps collapse into shared pieces.
Noding node_segments(const std::vector<std::pair<Point, Point>>& segs,
                     const std::vector<Point>& extra_points = {});

}  // namespace flatnorm
