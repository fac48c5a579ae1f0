#include "flatnorm/pipeline/embed.hpp"

#include "flatnorm/deform/deform.hpp"

#include <stdexcept>

namespace flatnorm {

Embedding embed_chains(const std::vector<PLCurrent>& curves, const std::vector<PLRegion>& regions, double eps,
                       const LocalizeOptions& options) {
    std::vector<Segment> segs;
    auto take = [&](const PLCurrent& c) {
        PLCurrent k = c.canonical();
        for (const auto& s : k.segments()) segs.push_back({s.a, s.b, 1});
    };
    for (const auto& c : curves) take(c);
    for (const auto& r : regions) take(region_boundary(r));
    if (segs.empty()) throw std::invalid_argument("nothing to embed");
    Embedding out;
    out.mesh = localize(pslg_from_segments(segs), eps, options);
    const Complex2& K = out.complex();
    for (const auto& c : curves) out.curves.push_back(edge_chain(c, K));
    for (const auto& r : regions) out.regions.push_back(triangle_chain(r, K));
    return out;
}

Complex2 dilate_complex(const Complex2& K, const Rational& factor) {
    if (factor <= 0) throw std::invalid_argument("dilation factor must be positive");
    std::vector<Point> v;
    v.reserve(K.num_vertices());
    for (const auto& p : K.vertices()) v.push_back(factor * p);
    return build_complex(std::move(v), K.triangles(), false, K.edges());
}

}  // namespace flatnorm
