#pragma once

#include "flatnorm/complex/complex.hpp"
#include "flatnorm/geom/current.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace flatnorm {

struct DeformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using TriangleGeometry = std::array<Point, 3>;

// Projection centers: a point per triangle and, per edge, a parameter in
// [1/4, 3/4] along the stored edge direction.
struct CenterChoice {
    std::vector<Point> triangle;
    std::vector<Rational> edge;
};

struct CenterSelection {
    Point center;
    std::size_t candidates = 0;  // candidates drawn, the accepted one included
    double theta = 0;            // ϑ_σ
    // measured expansion of each curve, then of each region (0 when empty)
    std::vector<double> expansions;
};

// Picks a center in the disk of radius inradius/2 about the incenter whose
// radial projection expands every curve piece set and region by at most
// factor·ϑ_σ. Candidates come from a low-discrepancy sequence offset by seed;
// centers on a curve, a region boundary or one of the avoid points are
// skipped. Curves must lie in the triangle.
CenterSelection select_center(const TriangleGeometry& tri, const std::vector<PLCurrent>& curves,
                              const std::vector<std::vector<Polygon>>& regions, double factor,
                              std::uint64_t seed, const std::vector<Point>& avoid = {});

struct TriangleProjection {
    PLCurrent image;  // on the triangle boundary
    // Swept region: current - image = ∂filler - (radial paths of ∂current).
    PLRegion filler;
};

// Radial projection from center onto the boundary of a counter-clockwise
// triangle. Segments must lie in the triangle and miss the center.
TriangleProjection project_in_triangle(const PLCurrent& current, const TriangleGeometry& tri, const Point& center);

struct SimplexExpansion {
    int dim = 2;  // 2 for a triangle, 1 for an edge
    std::size_t simplex = 0;
    std::size_t current = 0;  // curves first, then region boundaries, then regions
    double ratio = 0;         // image mass / mass inside the simplex
    double theta = 0;         // ϑ of the simplex (8 for edges)
};

struct CurveCertificate {
    double mass = 0, boundary_mass = 0;
    double pushed_mass = 0, pushed_boundary_mass = 0;
    double q_mass = 0, r_mass = 0;
    double theta = 8;  // largest ϑ met along the trajectory, at least the edge value
    double mass_bound = 0, boundary_bound = 0, flat_bound = 0;
    bool bounds_hold = false;
    bool boundary_commutes = false;
    PLCurrent Q;
    PLRegion R;
};

struct RegionCertificate {
    double mass = 0, boundary_mass = 0;
    double pushed_mass = 0, pushed_boundary_mass = 0;
    double r_mass = 0;  // S - O = R
    double theta = 8;
    double mass_bound = 0, boundary_bound = 0, flat_bound = 0;
    bool bounds_hold = false;
    bool boundary_commutes = false;
    PLRegion R;
};

struct DeformCertificate {
    std::size_t m = 0, n = 0;
    double eps = 1, factor = 0;  // factor = 2m + 2n + eps
    double delta = 0;            // largest simplex diameter
    double theta_K = 0;
    std::vector<CurveCertificate> curves;
    std::vector<RegionCertificate> regions;
    std::vector<SimplexExpansion> expansions;
    double worst_ratio = 0;  // max of ratio / (factor·theta)
    std::size_t candidates = 0;
    CenterChoice centers;
};

struct DeformResult {
    std::vector<Chain> P;  // 1-chains, one per curve
    std::vector<Chain> O;  // 2-chains, one per region
    DeformCertificate certificate;
};

// Pushes the curves and regions onto K with shared centers chosen by
// select_center. Currents must lie in |K|. The seed offsets every candidate sequence.
DeformResult deform_currents(const std::vector<PLCurrent>& curves, const std::vector<PLRegion>& regions,
                             const Complex2& K, double eps = 1, std::uint64_t seed = 0);

// Same push with given centers (no selection, expansions still measured).
// Throws DeformError when a center lies on one of the currents.
DeformResult push_with_centers(const std::vector<PLCurrent>& curves, const std::vector<PLRegion>& regions,
                               const Complex2& K, const CenterChoice& centers, double eps = 1);

// The current as a 1-chain; it must lie on the edges of K with constant
// multiplicity along each edge (DeformError otherwise).
Chain edge_chain(const PLCurrent& current, const Complex2& K);
// The region as a 2-chain, by winding numbers at triangle centroids. Its
// boundary must lie on the edges of K (DeformError otherwise).
Chain triangle_chain(const PLRegion& region, const Complex2& K);

// The pushed 0-current as a vertex chain.
Chain push_points(const PointMasses& points, const Complex2& K, const CenterChoice& centers);

}  // namespace flatnorm
