#include <doctest.h>

#include "flatnorm/geom/arrangement.hpp"
#include "flatnorm/geom/polyform.hpp"
#include "flatnorm/geom/predicates.hpp"

#include <cmath>
#include <random>

using namespace flatnorm;

namespace {

Point P(long x, long y) { return {Rational(x), Rational(y)}; }

Point Pd(double x, double y) { return Point::from_doubles(x, y); }

std::vector<Point> circle_poly(int n) {
    std::vector<Point> v;
    for (int i = 0; i < n; ++i) {
        double a = (2 * M_PI * i) / n;
        v.push_back(Pd(std::cos(a), std::sin(a)));
    }
    return v;
}

}  // namespace

TEST_CASE("rational parsing is exact") {
    CHECK(parse_rational("0.1") == Rational(1, 10));
    CHECK(parse_rational("-3/6") == Rational(-1, 2));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("2.5E1") == Rational(25));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
    CHECK(to_string(Rational(3, 4)) == "3/4");
    CHECK(round_dyadic(Rational(1, 3), 2) == Rational(1, 4));
    CHECK(round_dyadic(Rational(-3, 8), 2) == Rational(-1, 2));
}

TEST_CASE("predicates agree with exact arithmetic near degeneracy") {
    Point a = P(0, 0), b = P(1, 1);
    Point on{Rational(1, 3), Rational(1, 3)};
    Point above{Rational(1, 3), Rational(1, 3) + pow2(-90)};
    CHECK(orient2d(a, b, on) == 0);
    CHECK(orient2d(a, b, above) == 1);
    CHECK(orient2d(b, a, above) == -1);
    CHECK(incircle(P(0, 0), P(1, 0), P(0, 1), P(1, 1)) == 0);
    CHECK(incircle(P(0, 0), P(1, 0), P(0, 1), Point{Rational(1), Rational(1) - pow2(-80)}) == 1);
    CHECK(circumcenter(P(0, 0), P(2, 0), P(0, 2)) == P(1, 1));
    CHECK(segment_relation(P(0, 0), P(2, 2), P(0, 2), P(2, 0)) == SegmentRelation::proper);
    CHECK(segment_relation(P(0, 0), P(2, 0), P(1, 0), P(3, 0)) == SegmentRelation::overlapping);
    CHECK(segment_relation(P(0, 0), P(2, 0), P(2, 0), P(3, 1)) == SegmentRelation::touching);
    CHECK(segment_relation(P(0, 0), P(1, 0), P(2, 0), P(3, 0)) == SegmentRelation::disjoint);
}

TEST_CASE("pairing of elementary currents") {
    PLCurrent seg({{P(0, 0), P(1, 0), 1}});
    CHECK(pair(seg, PolyForm::one_form(Poly::constant(1), {})) == 1);
    auto square = PLRegion::polygon({P(0, 0), P(1, 0), P(1, 1), P(0, 1)});
    CHECK(pair(square, PolyForm::two_form(Poly::constant(1))) == 1);
    // ∫ x dA over the unit square is 1/2
    CHECK(pair(square, PolyForm::two_form(Poly::monomial(1, 1, 0))) == Rational(1, 2));
    // ∫ x^2 y dA over the triangle (0,0),(1,0),(0,1) is 1/60
    auto tri = PLRegion::polygon({P(0, 0), P(1, 0), P(0, 1)});
    CHECK(pair(tri, PolyForm::two_form(Poly::monomial(1, 2, 1))) == Rational(1, 60));
    CHECK_THROWS_AS(pair(seg, PolyForm::two_form(Poly::constant(1))), DimensionError);
    CHECK_THROWS_AS(pair(square, PolyForm::one_form(Poly::constant(1), {})), DimensionError);
}

TEST_CASE("Stokes identity holds exactly on random regions") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coord(-20, 20);
    for (int trial = 0; trial < 20; ++trial) {
        // random star-shaped polygon around the origin
        int k = 3 + trial % 6;
        std::vector<Point> v;
        for (int i = 0; i < k; ++i) {
            double a = 2 * M_PI * (i + 0.3 * (rng() % 100) / 100.0) / k;
            double r = 1 + (rng() % 100) / 50.0;
            v.push_back({round_dyadic(r * std::cos(a), 10), round_dyadic(r * std::sin(a), 10)});
        }
        auto region = PLRegion::polygon(v, static_cast<std::int64_t>(trial % 3) - 1 == 0 ? 2 : -3);
        for (int f = 0; f < 5; ++f) {
            auto psi = random_form(1, 3, rng);
            CHECK(pair(region_boundary(region), psi) == pair(region, exterior_derivative(psi)));
        }
    }
}

TEST_CASE("pairing is linear in multiplicity and form") {
    std::mt19937_64 rng(3);
    PLCurrent c({{P(0, 0), P(2, 1), 1}, {P(2, 1), P(-1, 3), 2}});
    auto w1 = random_form(1, 3, rng), w2 = random_form(1, 3, rng);
    PolyForm sum = PolyForm::one_form(w1.f + w2.f, w1.g + w2.g);
    CHECK(pair(c, sum) == pair(c, w1) + pair(c, w2));
    CHECK(pair(c.scaled(-3), w1) == -3 * pair(c, w1));
}

TEST_CASE("pl_boundary") {
    Point A = P(0, 0), B = P(1, 0), C = P(1, 1);
    auto b1 = pl_boundary(PLCurrent({{A, B, 1}}));
    CHECK(b1.size() == 2);
    CHECK(b1[A] == -1);
    CHECK(b1[B] == 1);
    CHECK(pl_boundary(PLCurrent::polyline({A, B, C}, 1, true)).empty());
    auto b3 = pl_boundary(PLCurrent({{A, B, 2}, {B, C, 2}}));
    CHECK(b3.size() == 2);
    CHECK(b3[A] == -2);
    CHECK(b3[C] == 2);
}

TEST_CASE("region boundary") {
    auto square = PLRegion::polygon({P(0, 0), P(1, 0), P(1, 1), P(0, 1)});
    auto bd = region_boundary(square);
    CHECK(bd.size() == 4);
    CHECK(bd.mass() == doctest::Approx(4));
    CHECK(pl_boundary(bd).empty());
    auto neg = PLRegion::polygon({P(0, 0), P(1, 0), P(1, 1), P(0, 1)}, -2);
    CHECK(region_boundary(neg).mass() == doctest::Approx(8));
    CHECK(neg.mass() == doctest::Approx(2));

    PLRegion two;
    two.add({{P(0, 0), P(1, 0), P(1, 1), P(0, 1)}, 1});
    two.add({{P(1, 0), P(2, 0), P(2, 1), P(1, 1)}, 1});
    auto bd2 = region_boundary(two);
    // shared edge cancels in the canonical form: perimeter 6
    CHECK(bd2.raw_mass() == doctest::Approx(8));
    CHECK(bd2.mass() == doctest::Approx(6));
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10; ++i) {
        auto psi = random_form(1, 3, rng);
        CHECK(pair(bd2, psi) == pair(two, exterior_derivative(psi)));
    }
    // clockwise input is normalised with negated multiplicity
    auto cw = PLRegion::polygon({P(0, 0), P(0, 1), P(1, 1), P(1, 0)});
    CHECK(cw.polygons()[0].mult == -1);
    CHECK_THROWS(PLRegion::polygon({P(0, 0), P(1, 1), P(1, 0), P(0, 1)}));
}

TEST_CASE("canonical form merges and cancels") {
    PLCurrent c({{P(0, 0), P(1, 0), 1}, {P(1, 0), P(3, 0), 1}, {P(2, 0), P(1, 0), 1}});
    auto k = c.canonical();
    // [0,1]:1, [1,2]:0, [2,3]:1
    CHECK(k.size() == 2);
    CHECK(k.mass() == doctest::Approx(2));
    PLCurrent d({{P(0, 0), P(1, 1), 2}, {P(1, 1), P(2, 2), 2}});
    CHECK(d.canonical().size() == 1);
    CHECK(d.mass() == doctest::Approx(4 * std::sqrt(2.0)));
}

TEST_CASE("dilation scales mass homogeneously") {
    PLCurrent seg({{P(0, 0), P(1, 0), 1}});
    CHECK(dilate(seg, 2).mass() == doctest::Approx(2));
    auto square = PLRegion::polygon({P(0, 0), P(1, 0), P(1, 1), P(0, 1)});
    CHECK(dilate(square, 3).mass_exact() == 9);
    auto tri = PLRegion::polygon({P(0, 0), P(3, 1), P(1, 2)}, 2);
    CHECK(dilate(tri, Rational(1, 3)).mass_exact() == tri.mass_exact() / 9);
    CHECK_THROWS(dilate(seg, 0));
    CHECK_THROWS(dilate(seg, -1));
}

TEST_CASE("filler area bound") {
    PLCurrent a({{P(0, 0), P(1, 2), 1}});
    CHECK(filler_area_bound(a, a) == 0);

    auto big = circle_poly(4096);
    std::vector<Point> oct;
    for (int j = 0; j < 8; ++j) oct.push_back(big[512 * j]);
    auto A = PLCurrent::polyline(oct, 1, true);
    auto B = PLCurrent::polyline(big, 1, true);
    double expected = 0.5 * 4096 * std::sin(2 * M_PI / 4096) - 4 * std::sin(2 * M_PI / 8);
    double got = filler_area_bound(A, B).get_d();
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::fabs(got - (M_PI - 2 * std::sqrt(2.0))) < 1e-3);

    // zigzag over a straight diagonal with the two triangles on the same side
    double s3 = std::sqrt(3.0);
    std::vector<Point> zig{Pd(0, 0), Pd(s3, 1), Pd(2 * s3, 0), Pd(3 * s3, 1), Pd(4 * s3, 0)};
    auto Z = PLCurrent::polyline(zig);
    PLCurrent T({{zig.front(), zig.back(), 1}});
    CHECK(filler_area_bound(Z, T).get_d() == doctest::Approx(2 * s3).epsilon(1e-12));

    // a zigzag crossing the diagonal: winding changes sign, mass still sums areas
    std::vector<Point> cross{P(0, 0), P(1, 1), P(2, -1), P(3, 0)};
    auto X = PLCurrent::polyline(cross);
    PLCurrent D({{P(0, 0), P(3, 0), 1}});
    auto R = filler_region(X, D);
    // triangles (0,0),(1,1),(1.5,0) and (1.5,0),(2,-1),(3,0): areas 3/4 + 3/4
    CHECK(R.mass_exact() == Rational(3, 2));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 5; ++i) {
        auto psi = random_form(1, 3, rng);
        CHECK(pair(X - D, psi) == pair(R, exterior_derivative(psi)));
    }
    CHECK_THROWS(filler_area_bound(X, PLCurrent({{P(0, 0), P(4, 0), 1}})));
}

TEST_CASE("noding splits at crossings and overlaps") {
    std::vector<std::pair<Point, Point>> segs{{P(0, 0), P(2, 2)}, {P(0, 2), P(2, 0)}, {P(0, 0), P(4, 0)},
                                              {P(1, 0), P(3, 0)}};
    auto nd = node_segments(segs, {P(5, 5)});
    // crossing point (1,1); the horizontal splits at 1, 2 and 3
    CHECK(nd.vertices.size() == 9);
    CHECK(nd.segments.size() == 8);
    std::size_t shared = 0;
    for (const auto& s : nd.segments)
        if (s.sources.size() == 2) ++shared;
    CHECK(shared == 2);
}
