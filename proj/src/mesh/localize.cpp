#include "flatnorm/mesh/localize.hpp"

#include <cmath>

namespace flatnorm {

double beta_constant() {
    const double s3 = std::sqrt(3.0);
    return 4 * (2 + s3) * (24 + 12 * s3 + M_PI) / M_PI;
}

double tube_area_bound(double length, std::size_t vertices, double delta) {
    return 6 * delta * length + 9 * M_PI * delta * delta * static_cast<double>(vertices);
}

double select_delta(double length, std::size_t vertices, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    double d = 1;
    while (tube_area_bound(length, vertices, d) >= eps) d /= 2;
    return d;
}

Localized localize(const PSLG& pslg, double eps, const LocalizeOptions& options) {
    pslg.validate();
    PSLG H = with_convex_hull(pslg);
    Localized out;
    auto& rep = out.report;
    rep.eps = eps;
    rep.skeleton_length = H.total_length();
    rep.delta = select_delta(rep.skeleton_length, H.vertices.size(), eps);
    rep.tube_radius = 3 * rep.delta;
    rep.tube_area_bound = tube_area_bound(rep.skeleton_length, H.vertices.size(), rep.delta);
    rep.angles = forbidden_angles(H);
    double rot = choose_rotation(rep.angles);
    rep.rotation_deg = rot * 180 / M_PI;
    rep.crossing_angle_deg = crossing_angle(rep.angles, rot) * 180 / M_PI;
    rep.beta = beta_constant();
    PLCurrent skeleton = H.skeleton();

    PSLG G = H;
    if (options.use_grid) {
        auto hull = convex_hull(H.vertices);
        std::vector<Point> loop;
        for (auto i : hull) loop.push_back(H.vertices[i]);
        double area = std::fabs(polygon_area2(loop).get_d()) / 2;
        GridSpec spec;
        spec.cell_diameter = rep.delta;
        spec.rotation = rot;
        while (area / (spec.cell_diameter * spec.cell_diameter / 2) > static_cast<double>(options.grid_max_cells)) {
            spec.cell_diameter *= 2;
            rep.grid_coarsened = true;
        }
        auto gr = superimpose_grid(H, spec);
        G = std::move(gr.pslg);
        rep.grid = gr.geometry;
    }

    RefineOptions ro;
    ro.target_angle_deg = options.target_angle_deg;
    ro.outer_angle_deg = options.outer_angle_deg;
    ro.size_cap = options.size_cap;
    ro.max_edge = options.max_edge;
    ro.apex_radius = rep.delta;
    ro.tube_radius = rep.tube_radius;
    ro.tube_skeleton = skeleton;
    out.mesh = refine(G, ro);

    const auto& K = out.mesh.complex;
    out.audit = small_angle_locations(K, skeleton, rep.tube_radius);
    out.m_prime = out.audit.outside;
    auto full = regularity(K);
    rep.theta_M = full.theta_K;
    rep.min_angle_deg = full.min_angle_deg;
    rep.theta_M_prime = out.audit.theta_outside;
    rep.min_angle_outside_deg = out.audit.min_angle_outside;
    rep.triangles = K.num_triangles();
    rep.outside_triangles = out.m_prime.size();
    rep.small_angles = out.audit.small.size();
    rep.small_angles_in_tube = out.audit.all_in_tube;
    return out;
}

}  // namespace flatnorm
