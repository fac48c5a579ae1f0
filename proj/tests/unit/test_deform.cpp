#include <doctest.h>

#include "flatnorm/complex/regularity.hpp"
#include "flatnorm/deform/deform.hpp"
#include "flatnorm/geom/polyform.hpp"
#include "flatnorm/geom/predicates.hpp"
#include "flatnorm/mesh/refine.hpp"

#include <cmath>
#include <random>

using namespace flatnorm;

namespace {

Point P(long x, long y) { return {Rational(x), Rational(y)}; }
Point Pq(long xn, long xd, long yn, long yd) { return {Rational(xn, xd), Rational(yn, yd)}; }

Complex2 unit_square() { return build_complex({P(0, 0), P(1, 0), P(1, 1), P(0, 1)}, {{{0, 1, 2}}, {{0, 2, 3}}}); }

// Delaunay mesh of the square [0, s]^2 with edges at most h long.
Complex2 square_mesh(long s, double h) {
    PSLG g;
    for (long i = 0; i < 4; ++i) g.add_vertex(P(i == 1 || i == 2 ? s : 0, i >= 2 ? s : 0));
    for (std::size_t i = 0; i < 4; ++i) g.add_segment(i, (i + 1) % 4);
    RefineOptions o;
    o.max_edge = h;
    return refine(g, o).complex;
}

Point rand_point(std::mt19937_64& rng, long s) {
    std::uniform_int_distribution<long> d(1, 1023);
    return Pq(d(rng) * s, 1024, d(rng) * s, 1024);
}

PLCurrent random_polyline(std::mt19937_64& rng, long s, int n) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back(rand_point(rng, s));
    PLCurrent c;
    for (int i = 0; i + 1 < n; ++i)
        if (pts[i] != pts[i + 1]) c.add(pts[i], pts[i + 1], 1);
    return c;
}

// ⟨T - P - Q, φ⟩ - ⟨R, dφ⟩ over random forms; zero when T - P = Q + ∂R.
Rational stokes_residual(const PLCurrent& T, const PLCurrent& Pc, const PLCurrent& Q, const PLRegion& R,
                         std::mt19937_64& rng) {
    Rational worst = 0;
    for (int k = 0; k < 20; ++k) {
        auto w = random_form(1, 3, rng);
        Rational r = pair(T, w) - pair(Pc, w) - pair(Q, w) - pair(R, exterior_derivative(w));
        worst = std::max(worst, Rational(abs(r)));
    }
    return worst;
}

}  // namespace

TEST_CASE("radial projection in a triangle") {
    TriangleGeometry T{P(0, 0), P(2, 0), P(0, 2)};
    Point a = Pq(1, 2, 1, 2);
    PLCurrent s;
    s.add(Pq(1, 1, 1, 2), Pq(1, 2, 1, 1), 1);
    auto pr = project_in_triangle(s, T, a);
    REQUIRE(pr.image.size() == 1);
    CHECK(pr.image.segments()[0].a == Pq(3, 2, 1, 2));
    CHECK(pr.image.segments()[0].b == Pq(1, 2, 3, 2));
    CHECK(pr.image.mass() / s.mass() == doctest::Approx(2));
    CHECK(pr.filler.mass_exact() == Rational(3, 8));

    PLCurrent edge;
    edge.add(P(0, 0), P(2, 0), 1);
    auto id = project_in_triangle(edge, T, a);
    CHECK(id.image.canonical().segments().size() == 1);
    CHECK(id.image.mass() == doctest::Approx(2));
    CHECK(id.filler.empty());

    auto tri = project_in_triangle(s.scaled(3), T, a);
    CHECK(tri.image.segments()[0].mult == 3);
    CHECK(tri.filler.signed_area() == 3 * pr.filler.signed_area());
    CHECK(std::llabs(tri.filler.polygons()[0].mult) == 3);

    // clockwise segments wrap the other way round
    PLCurrent back;
    back.add(Pq(1, 2, 1, 1), Pq(1, 1, 1, 2), 1);
    auto b = project_in_triangle(back, T, a);
    CHECK((b.image + pr.image).canonical().empty());

    // a segment crossing a corner direction picks up the corner
    PLCurrent wide;
    wide.add(Pq(1, 1, 1, 4), Pq(1, 4, 1, 1), 1);
    auto w = project_in_triangle(wide, T, Pq(1, 4, 1, 4));
    CHECK(w.image.mass() > 0);
    CHECK_THROWS_AS(project_in_triangle(s, T, Pq(3, 4, 3, 4)), DeformError);
}

TEST_CASE("center selection") {
    TriangleGeometry T{P(0, 0), P(2, 0), P(0, 2)};
    auto th = simplex_regularity(T[0], T[1], T[2]).theta;
    auto none = select_center(T, {PLCurrent{}}, {}, 3, 7);
    CHECK(none.candidates == 1);
    CHECK(none.expansions[0] == 0);

    PLCurrent s;
    s.add(Pq(1, 4, 1, 3), Pq(3, 2, 1, 3), 1);
    auto one = select_center(T, {s}, {}, 3, 7);
    CHECK(one.expansions[0] <= 5 * th);
    CHECK(one.expansions[0] <= 3 * th);
    CHECK_FALSE(on_segment(s.segments()[0].a, s.segments()[0].b, one.center));

    // the incenter is rejected when the current passes through it
    auto inc = select_center(T, {PLCurrent{}}, {}, 3, 0).center;
    PLCurrent through;
    through.add(P(0, 0), Point(2 * inc.x(), 2 * inc.y()), 1);
    auto r = select_center(T, {through}, {}, 3, 0);
    CHECK(r.candidates > 1);

    std::mt19937_64 rng(3);
    std::vector<PLCurrent> curves;
    for (int i = 0; i < 2; ++i) {
        PLCurrent c;
        for (int k = 0; k < 3; ++k) {
            Point p = Pq(1 + k + 3 * i, 16, 2 + k, 16), q = Pq(20 - k, 16, 3 + 2 * k + i, 16);
            c.add(p, q, 1);
        }
        curves.push_back(c);
    }
    std::vector<std::vector<Polygon>> regions(3);
    for (int j = 0; j < 3; ++j) {
        long o = 2 + 3 * j;
        regions[j].push_back({{Pq(o, 32, o, 32), Pq(o + 8, 32, o, 32), Pq(o, 32, o + 8, 32)}, 1});
    }
    auto five = select_center(T, curves, regions, 11, 5);
    for (double e : five.expansions) CHECK(e <= 11 * th);
}

TEST_CASE("chains push to themselves") {
    auto K = square_mesh(2, 0.7);
    std::mt19937_64 rng(11);
    Chain c(1);
    for (std::size_t e = 0; e < K.num_edges(); e += 3) c.add(e, static_cast<std::int64_t>(e % 5) - 2);
    auto T = to_current(K, c);
    auto res = deform_currents({T}, {}, K);
    CHECK(res.P[0] == c);
    CHECK(res.certificate.curves[0].Q.empty());
    CHECK(res.certificate.curves[0].R.empty());
    CHECK(res.certificate.curves[0].boundary_commutes);

    Chain f(2);
    for (std::size_t t = 0; t < K.num_triangles(); t += 2) f.add(t, 1 + static_cast<std::int64_t>(t % 3));
    auto S = to_region(K, f);
    auto rr = deform_currents({}, {S}, K);
    CHECK(rr.O[0] == f);
    CHECK(rr.certificate.regions[0].r_mass == 0);
}

TEST_CASE("diagonal across the unit square") {
    auto K = unit_square();
    PLCurrent T;
    T.add(P(1, 0), P(0, 1), 1);
    auto res = deform_currents({T}, {}, K);
    const auto& cc = res.certificate.curves[0];
    // each triangle sends its half one way round; the halves agree or leave the diagonal behind
    bool agree = std::fabs(cc.pushed_mass - 2) < 1e-12, apart = std::fabs(cc.pushed_mass - 2 - std::sqrt(2.0)) < 1e-12;
    CHECK((agree || apart));
    CHECK(cc.boundary_commutes);
    CHECK(cc.bounds_hold);
    CHECK(apply_boundary(K, res.P[0]) == point_masses_to_chain(K, pl_boundary(T)));
    std::mt19937_64 rng(5);
    CHECK(stokes_residual(T, to_current(K, res.P[0]), cc.Q, cc.R, rng) == 0);

    // both centers on the origin side of the segment: the path through (1, 1)
    CenterChoice c;
    c.triangle = {Pq(65, 100, 28, 100), Pq(28, 100, 65, 100)};
    c.edge.assign(K.num_edges(), Rational(1, 2));
    c.edge[*K.find_edge(0, 2)] = Rational(3, 8);
    auto same = push_with_centers({T}, {}, K, c);
    CHECK(same.certificate.curves[0].pushed_mass == doctest::Approx(2));
    CHECK(to_current(K, same.P[0]).canonical().mass() == doctest::Approx(2));
    Chain path(1);
    path.add(*K.find_edge(1, 2), 1);
    path.add(*K.find_edge(2, 3), 1);
    CHECK(same.P[0] == path);
    CHECK(stokes_residual(T, to_current(K, same.P[0]), same.certificate.curves[0].Q, same.certificate.curves[0].R, rng) == 0);
}

TEST_CASE("open curves with interior endpoints") {
    auto K = square_mesh(4, 1.1);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 6; ++trial) {
        auto T = random_polyline(rng, 4, 5);
        auto res = deform_currents({T}, {}, K);
        const auto& cc = res.certificate.curves[0];
        CAPTURE(trial);
        CHECK(cc.boundary_commutes);
        CHECK(cc.bounds_hold);
        CHECK(res.certificate.worst_ratio <= 1 + 1e-9);
        CHECK(stokes_residual(T, to_current(K, res.P[0]), cc.Q, cc.R, rng) == 0);
    }
}

TEST_CASE("regions push by density") {
    auto K = square_mesh(4, 1.1);
    auto S = PLRegion::polygon({Pq(3, 10, 2, 10), Pq(33, 10, 5, 10), Pq(21, 10, 37, 10), Pq(4, 10, 25, 10)});
    auto res = deform_currents({}, {S}, K);
    const auto& rc = res.certificate.regions[0];
    CHECK(rc.boundary_commutes);
    CHECK(rc.bounds_hold);
    std::mt19937_64 rng(9);
    for (int k = 0; k < 20; ++k) {
        auto w = random_form(2, 3, rng);
        CHECK(pair(S, w) - pair(to_region(K, res.O[0]), w) == pair(rc.R, w));
    }
}

TEST_CASE("shared centers act linearly") {
    auto K = square_mesh(4, 1.1);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        auto T1 = random_polyline(rng, 4, 4), T2 = random_polyline(rng, 4, 4);
        auto S = PLRegion::polygon({rand_point(rng, 2), Point(rand_point(rng, 2).x() + 2, Rational(1, 3)),
                                    Point(Rational(5, 2), Rational(7, 2))});
        auto res = deform_currents({T1, T2}, {S}, K);
        auto comb = T1.scaled(2) + T2.scaled(-1);
        auto lin = push_with_centers({comb}, {S.scaled(3)}, K, res.certificate.centers);
        CHECK(lin.P[0] == 2 * res.P[0] - res.P[1]);
        CHECK(lin.O[0] == 3 * res.O[0]);
        for (const auto& cc : res.certificate.curves) CHECK(cc.boundary_commutes);
        CHECK(res.certificate.regions[0].boundary_commutes);
        CHECK(res.certificate.factor == doctest::Approx(2 * 2 + 2 * 1 + 1));
        CHECK(res.certificate.worst_ratio <= 1 + 1e-9);
    }
}

TEST_CASE("given centers are checked") {
    auto K = unit_square();
    PLCurrent T;
    T.add(P(1, 0), P(0, 1), 1);
    auto res = deform_currents({T}, {}, K);
    auto bad = res.certificate.centers;
    bad.triangle[0] = Pq(1, 2, 1, 2);
    CHECK_THROWS_AS(push_with_centers({T}, {}, K, bad), DeformError);
    PLCurrent outside;
    outside.add(P(0, 0), P(2, 0), 1);
    CHECK_THROWS_AS(deform_currents({outside}, {}, K), DeformError);
}

TEST_CASE("point push follows the centers") {
    auto K = unit_square();
    CenterChoice c;
    c.triangle = {Pq(3, 4, 1, 4), Pq(1, 4, 3, 4)};
    c.edge.assign(K.num_edges(), Rational(1, 2));
    PointMasses pm{{P(1, 1), 2}, {Pq(7, 8, 1, 8), -1}};
    auto ch = push_points(pm, K, c);
    CHECK(ch.get(*K.find_vertex(P(1, 1))) == 2);
    // (7/8, 1/8) leaves through the corner (1, 0)
    CHECK(ch.get(*K.find_vertex(P(1, 0))) == -1);
}
