#pragma once

#include "flatnorm/approx/approx.hpp"
#include "flatnorm/pipeline/embed.hpp"

namespace flatnorm {

// Strip of n diamonds, each two equilateral triangles sharing a vertical edge,
// along the x-axis from A = (0, 0) to B = (n·side·√3, 0). √3 is rounded to 52 bits.
struct Strip {
    Complex2 K;
    Chain P;      // the top zigzag from A to B
    PLCurrent T;  // the straight segment A → B
    Point A, B;
};

Strip gen_strip(std::size_t n, const Rational& side);

struct NgonDisk {
    Embedding embedding;
    PLCurrent polygon;  // counter-clockwise, vertices on the circle
    Chain t;
};

// Inscribed n-gon of the circle of radius r about the origin, meshed with
// localize(eps). Without options the grid is off.
NgonDisk gen_ngon_disk(std::size_t n, double radius, double eps);
NgonDisk gen_ngon_disk(std::size_t n, double radius, double eps, const LocalizeOptions& options);

// Closed k-gon inscribed in the circle, the dense stand-in for the circle itself.
PLCurrent circle_proxy(double radius, std::size_t k);

}  // namespace flatnorm
