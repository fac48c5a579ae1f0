#pragma once

#include "flatnorm/complex/complex.hpp"
#include "flatnorm/mesh/pslg.hpp"

#include <stdexcept>

namespace flatnorm {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RefineOptions {
    double target_angle_deg = 25;
    std::size_t size_cap = 50000;
    double max_edge = 0;  // longest allowed triangle edge; 0 = no cap
    // Subsegments at small-angle apices are split down to this length first (0 = off).
    double apex_radius = 0;
    // Triangles not inside the tube of this radius around tube_skeleton (the
    // PSLG segments when empty) must reach outer_angle_deg instead of the
    // target (tube_radius 0 = off).
    double tube_radius = 0;
    PLCurrent tube_skeleton;
    double outer_angle_deg = 30;
    bool validate_output = false;
};

struct RefineStats {
    std::size_t circumcenters = 0;
    std::size_t segment_splits = 0;
    std::size_t cluster_splits = 0;
    std::size_t rejected_splits = 0;  // cluster splits refused for a skinny triangle
    std::size_t kept_skinny = 0;      // skinny triangles left at small input angles
    double input_min_angle_deg = 360;
    double guarantee_deg = 0;  // min(target, arcsin(√3/2·sin(θ_in/2)))
    double min_angle_deg = 60;
    double seconds = 0;
};

struct MeshResult {
    PSLG pslg;  // the input with its convex hull
    Complex2 complex;
    // For every PSLG segment, its mesh edges from a to b with the orientation
    // of each edge relative to the segment.
    std::vector<std::vector<std::pair<std::size_t, int>>> segment_edges;
    RefineStats stats;
};

// arcsin((√3/2)·sin(θ/2)) in degrees.
double terminator_bound_deg(double input_angle_deg);

// Delaunay refinement of the convex hull of the PSLG.
MeshResult refine(const PSLG& pslg, const RefineOptions& options = {});

}  // namespace flatnorm
