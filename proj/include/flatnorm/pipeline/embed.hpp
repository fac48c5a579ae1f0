#pragma once

#include "flatnorm/mesh/localize.hpp"

#include <vector>

namespace flatnorm {

struct Embedding {
    Localized mesh;
    std::vector<Chain> curves;   // 1-chains, one per input curve
    std::vector<Chain> regions;  // 2-chains, one per input region
    const Complex2& complex() const { return mesh.mesh.complex; }
};

// Meshes the curves, the region boundaries and their convex hull with
// localize(eps) and re-expresses every input exactly as a chain.
Embedding embed_chains(const std::vector<PLCurrent>& curves, const std::vector<PLRegion>& regions, double eps,
                       const LocalizeOptions& options = {});

// The complex with every vertex scaled by factor about the origin.
Complex2 dilate_complex(const Complex2& K, const Rational& factor);

}  // namespace flatnorm
