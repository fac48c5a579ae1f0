#pragma once

#include "flatnorm/complex/regularity.hpp"
#include "flatnorm/mesh/grid.hpp"
#include "flatnorm/mesh/refine.hpp"

namespace flatnorm {

struct LocalizeOptions {
    double target_angle_deg = 26;
    double outer_angle_deg = 30;
    std::size_t size_cap = 50000;
    // The grid cell is doubled from δ until the hull holds at most this many cells.
    std::size_t grid_max_cells = 2048;
    bool use_grid = true;
    double max_edge = 0;
};

struct LocalizeReport {
    double eps = 0, delta = 0, tube_radius = 0, tube_area_bound = 0, skeleton_length = 0;
    AngleSet angles;
    double rotation_deg = 0, crossing_angle_deg = 0;
    GridGeometry grid;
    bool grid_coarsened = false;
    double theta_M = 0;        // ϑ over the whole mesh
    double theta_M_prime = 0;  // ϑ over the triangles not inside the tube
    double beta = 0;
    double min_angle_deg = 0, min_angle_outside_deg = 60;
    std::size_t triangles = 0, outside_triangles = 0, small_angles = 0;
    bool small_angles_in_tube = true;
};

struct Localized {
    MeshResult mesh;
    std::vector<std::size_t> m_prime;  // triangle ids of M'
    AngleAudit audit;
    LocalizeReport report;
};

// 4(2+√3)(24+12√3+π)/π, the regularity bound for angles of at least 30°.
double beta_constant();
// Area bound of the tube of radius 3δ: 6δ·length + 9πδ² per vertex.
double tube_area_bound(double length, std::size_t vertices, double delta);
// Largest power of 1/2 whose tube bound is below eps.
double select_delta(double length, std::size_t vertices, double eps);

Localized localize(const PSLG& pslg, double eps, const LocalizeOptions& options = {});

}  // namespace flatnorm
