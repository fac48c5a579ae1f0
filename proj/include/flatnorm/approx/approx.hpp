#pragma once

#include "flatnorm/geom/current.hpp"

#include <string>

namespace flatnorm {

// Circular arc from angle start to angle end (radians, end < start runs clockwise).
// |end - start| = 2π gives a closed circle.
struct ArcSpec {
    Point center;
    double radius = 1;
    double start = 0, end = 0;
    std::int64_t mult = 1;
};

struct CurveSpec {
    enum class Kind { polyline, arc };
    Kind kind = Kind::polyline;
    PLCurrent polyline;
    ArcSpec arc;

    static CurveSpec from_polyline(PLCurrent c);
    static CurveSpec from_arc(const ArcSpec& a);
};

// {"type": "polyline", "points": [[x, y], ...], "mult": 1, "closed": false} or
// {"type": "arc", "center": [x, y], "radius": r, "start": a, "end": b, "mult": 1}.
// Coordinates may be numbers or rational strings such as "1/3".
CurveSpec parse_curve_json(const std::string& text);
CurveSpec load_curve(const std::string& path);

struct ApproxCertificate {
    double rho = 0;
    std::size_t chords = 0;
    double mass = 0;           // M(T), exact arc length for arcs
    double pushed_mass = 0;    // M(P)
    double boundary_mass = 0;  // M(∂T)
    double pushed_boundary_mass = 0;
    double segment_area = 0;  // Σ r²(φ - sin φ)/2 over chords, times |mult|
    Rational filler_area = 0;  // area of the filler between P and the dense reference
    double reference_mass = 0;
    bool certified = false;  // segment_area ≤ ρ, filler_area ≤ ρ, M(P) ≤ M(reference), ∂P = ∂T
};

struct Approximation {
    PLCurrent P;
    PLCurrent reference;  // dense chord polyline standing in for the arc
    PLRegion filler;      // ∂filler = P - reference
    ApproxCertificate certificate;
};

// Vertices of the arc at k uniform parameter steps, rounded to dyadic rationals.
std::vector<Point> arc_vertices(const ArcSpec& a, std::size_t k);

// Chord subdivision of the curve with total circular-segment area at most rho.
// Chord counts double from the fewest that keep each chord under a half turn.
Approximation approximate_curve(const CurveSpec& curve, double rho);

}  // namespace flatnorm
