#pragma once

#include "flatnorm/geom/current.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace flatnorm {

struct PSLGSegment {
    std::size_t a = 0, b = 0;
    std::int64_t mult = 0;  // chain multiplicity along a -> b; 0 for structural segments
};

// Planar straight line graph.
struct PSLG {
    std::vector<Point> vertices;
    std::vector<PSLGSegment> segments;

    std::size_t add_vertex(const Point& p);
    void add_segment(std::size_t a, std::size_t b, std::int64_t mult = 0);

    // Throws GeometryError unless segments meet only at shared endpoints,
    // no vertex lies inside a segment, and there are no duplicates.
    void validate() const;

    double total_length() const;
    // Smallest angle between two segments sharing an endpoint, in degrees
    // (360 when no vertex has two segments).
    double min_input_angle_deg() const;
    // The segments as a 1-current (multiplicity 1 on every segment).
    PLCurrent skeleton() const;
};

// Nodes arbitrary segments (with multiplicities) into a valid PSLG; collinear
// overlaps are merged and their multiplicities summed. Extra points become
// vertices, splitting segments they lie on.
PSLG pslg_from_segments(const std::vector<Segment>& segs, const std::vector<Point>& extra = {});

// Adds the edges of the convex hull of the vertices. Existing segment indices
// are kept. When the hull is degenerate, an enclosing box is added instead.
PSLG with_convex_hull(const PSLG& g);

// Convex hull (counter-clockwise, collinear boundary points kept).
std::vector<std::size_t> convex_hull(const std::vector<Point>& pts);

// Text format: "V S" header, "v id x y", "s id v1 v2 [mult]".
void write_pslg(std::ostream& os, const PSLG& g);
PSLG read_pslg(std::istream& is);
void save_pslg(const std::string& path, const PSLG& g);
PSLG load_pslg(const std::string& path);

struct AngleSet {
    std::vector<double> E;  // sorted segment directions and their +90° turns, radians in [0, π)
    std::size_t eta = 0;
    double guard = 0;  // π/(2η)
};

AngleSet forbidden_angles(const PSLG& g);

// Midpoint of the largest gap of E modulo π/2, in [0, π/2).
double choose_rotation(const AngleSet& angles);
// Smallest crossing angle between grid lines at `rotation` and a direction in E.
double crossing_angle(const AngleSet& angles, double rotation);

}  // namespace flatnorm
