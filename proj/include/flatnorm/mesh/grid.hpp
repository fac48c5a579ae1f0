#pragma once

#include "flatnorm/mesh/pslg.hpp"

namespace flatnorm {

struct GridSpec {
    double cell_diameter = 0;  // δ_g
    double rotation = 0;       // radians
    Point origin;
};

struct GridGeometry {
    Rational side;      // cell side, dyadic, side·√2 <= δ_g
    Rational cos, sin;  // exact rotation (rational point on the unit circle)
    Rational u0, v0;    // origin in rotated coordinates
    double cell_diameter = 0;
    std::size_t lines = 0;
    int origin_shifts = 0;
};

struct GridResult {
    PSLG pslg;
    GridGeometry geometry;
};

// Overlays the rotated square grid, clipped to the convex hull of g, and nodes
// it with g. The hull edges are part of the result. The grid origin is moved by
// a deterministic sub-cell offset while a grid line passes through a vertex or
// a grid node lies on a segment.
GridResult superimpose_grid(const PSLG& g, const GridSpec& spec);

}  // namespace flatnorm
