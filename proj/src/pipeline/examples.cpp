#include "flatnorm/pipeline/examples.hpp"

#include "flatnorm/deform/deform.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flatnorm {

Strip gen_strip(std::size_t n, const Rational& side) {
    if (n < 1) throw std::invalid_argument("strip needs at least one diamond");
    if (side <= 0) throw std::invalid_argument("side must be positive");
    const Rational sqrt3 = round_dyadic(std::numbers::sqrt3, 52);
    const Rational h = side * sqrt3 / 2, half = side / 2;
    // axis vertices 0..n, then top and bottom of diamond i at n+1+2i, n+2+2i
    std::vector<Point> v;
    for (std::size_t i = 0; i <= n; ++i) v.emplace_back(2 * h * Rational(i), Rational(0));
    std::vector<Tri> tris;
    for (std::size_t i = 0; i < n; ++i) {
        Rational x = 2 * h * Rational(i) + h;
        std::size_t top = v.size();
        v.emplace_back(x, half);
        v.emplace_back(x, -half);
        tris.push_back({i, top + 1, top});
        tris.push_back({top, top + 1, i + 1});
    }
    Strip s;
    s.K = build_complex(v, tris);
    s.A = v[0], s.B = v[n];
    s.T.add(s.A, s.B, 1);
    PLCurrent top;
    for (std::size_t i = 0; i < n; ++i) {
        top.add(v[i], v[n + 1 + 2 * i], 1);
        top.add(v[n + 1 + 2 * i], v[i + 1], 1);
    }
    s.P = edge_chain(top, s.K);
    return s;
}

PLCurrent circle_proxy(double radius, std::size_t k) {
    ArcSpec a;
    a.center = Point(Rational(0), Rational(0));
    a.radius = radius;
    a.end = 2 * std::numbers::pi;
    return PLCurrent::polyline(arc_vertices(a, k));
}

NgonDisk gen_ngon_disk(std::size_t n, double radius, double eps) {
    LocalizeOptions o;
    o.use_grid = false;
    return gen_ngon_disk(n, radius, eps, o);
}

NgonDisk gen_ngon_disk(std::size_t n, double radius, double eps, const LocalizeOptions& options) {
    if (n < 3) throw std::invalid_argument("n-gon needs n >= 3");
    if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
    NgonDisk d;
    d.polygon = circle_proxy(radius, n);
    d.embedding = embed_chains({d.polygon}, {}, eps, options);
    d.t = d.embedding.curves[0];
    return d;
}

}  // namespace flatnorm
