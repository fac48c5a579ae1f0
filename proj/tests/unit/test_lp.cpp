#include <doctest.h>

#include "common/oracles.hpp"
#include "flatnorm/complex/tu.hpp"
#include "flatnorm/lp/flatnorm.hpp"

#include <cmath>

using namespace flatnorm;

namespace {

Point P(long x, long y) { return {Rational(x), Rational(y)}; }

const Rational& sqrt3() {
    static const Rational r = round_dyadic(std::sqrt(3.0), 52);
    return r;
}

Complex2 equilateral() {
    return build_complex({P(0, 0), P(1, 0), Point(Rational(1, 2), sqrt3() / 2)}, {{{0, 1, 2}}});
}

Chain boundary_of_all(const Complex2& K) {
    Chain s(2);
    for (std::size_t f = 0; f < K.num_triangles(); ++f) s.add(f, 1);
    return apply_boundary(K, s);
}

Complex2 strip2() {
    const Rational h = sqrt3();
    std::vector<Point> v = {P(0, 0),           Point(h, Rational(1)),     Point(h, Rational(-1)), Point(2 * h, Rational(0)),
                            Point(3 * h, Rational(1)), Point(3 * h, Rational(-1)), Point(4 * h, Rational(0))};
    return build_complex(v, {{{0, 1, 2}}, {{1, 2, 3}}, {{3, 4, 5}}, {{4, 5, 6}}});
}

Chain strip_top(const Complex2& K) {
    Chain p(1);
    std::size_t path[] = {0, 1, 3, 4, 6};
    for (int i = 0; i < 4; ++i) {
        auto e = *K.find_edge(path[i], path[i + 1]);
        p.add(e, K.edges()[e][0] == path[i] ? 1 : -1);
    }
    return p;
}

// Unit square split by the diagonal 0-2.
Complex2 unit_square() { return build_complex({P(0, 0), P(1, 0), P(1, 1), P(0, 1)}, {{{0, 1, 2}}, {{0, 2, 3}}}); }

}  // namespace

TEST_CASE("best rational approximation") {
    CHECK(best_rational(Rational(3, 7)) == Rational(3, 7));
    auto pi = best_rational(from_double(M_PI), 1000);
    CHECK(pi == Rational(355, 113));
    auto r = best_rational(from_double(4 * std::sqrt(3.0)));
    CHECK(std::fabs(r.get_d() - 4 * std::sqrt(3.0)) < 1e-15);
}

TEST_CASE("formulation sizes") {
    auto K = equilateral();
    auto P1 = formulate(boundary_of_all(K), K, 1);
    CHECK(P1.num_constraints() == 3);
    CHECK(P1.num_variables() == 8);
    auto S = strip2();
    auto P2 = formulate(strip_top(S), S, 1);
    CHECK(P2.num_constraints() == 10);
    CHECK(P2.num_variables() == 28);
    auto P0 = formulate(boundary_of_all(K), K, 0);
    for (auto c : P0.s_cost) CHECK(c == 0);
}

TEST_CASE("triangle boundary: fill or keep") {
    auto K = equilateral();
    auto t = boundary_of_all(K);
    auto a = flat_norm_decompose(t, K, 1);
    CHECK(a.integral);
    CHECK(a.residual_ok);
    CHECK(a.x.empty());
    CHECK(std::llabs(a.s.get(0)) == 1);
    CHECK(a.value == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-12));
    CHECK(a.objective.get_d() == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-12));

    auto b = flat_norm_decompose(t, K, 10);
    CHECK(b.s.empty());
    CHECK(b.x == t);
    CHECK(b.value == doctest::Approx(3).epsilon(1e-12));

    auto sw = sweep(t, K, {Rational(1), best_rational(from_double(4 * std::sqrt(3.0))), Rational(10)});
    REQUIRE(sw.thresholds.size() == 1);
    CHECK(sw.thresholds[0].lambda == doctest::Approx(4 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(sw.rows[0].mass_s > 0);
    CHECK(sw.rows[2].mass_s == 0);
    CHECK(sw.rows[1].value == doctest::Approx(3).epsilon(1e-12));
    CHECK(sw.value_nondecreasing);
    CHECK(sw.mass_s_nonincreasing);
    CHECK(sw.concave);
}

TEST_CASE("zero chain") {
    auto K = equilateral();
    auto r = flat_norm_decompose(Chain(1), K, 1);
    CHECK(r.value == 0);
    CHECK(r.x.empty());
    CHECK(r.s.empty());
    CHECK(r.integral);
}

TEST_CASE("strip top chain keeps its mass") {
    auto S = strip2();
    auto p = strip_top(S);
    CHECK(chain_mass(S, p) == doctest::Approx(8).epsilon(1e-14));
    auto r = flat_norm_decompose(p, S, 1);
    CHECK(r.value == doctest::Approx(8).epsilon(1e-12));
    CHECK(r.x == p);
    CHECK(r.s.empty());
    CHECK(r.value / (4 * std::sqrt(3.0)) == doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(oracle::brute_force_flat_norm(p, S, 1.0) == doctest::Approx(8).epsilon(1e-12));
    CHECK(tu_verify(S.boundary(2), 4).unimodular);
}

TEST_CASE("unit square threshold is exactly four") {
    auto K = unit_square();
    auto t = boundary_of_all(K);
    auto sw = sweep(t, K, {Rational(1, 10), Rational(1), Rational(100)});
    REQUIRE(sw.thresholds.size() == 1);
    CHECK(sw.thresholds[0].lambda_exact == 4);
    CHECK(sw.rows[0].x.empty());
    CHECK(sw.rows[2].x == t);
}

TEST_CASE("solver matches exhaustive search on small complexes") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto K = oracle::random_small_complex(rng, 7);
        auto t = oracle::random_chain(rng, K, 4, 1);
        if (trial % 3 == 0) t = t + apply_boundary(K, Chain::from_dense(2, std::vector<std::int64_t>(K.num_triangles(), 1)));
        for (double lam : {0.5, 1.0, 5.0}) {
            auto r = flat_norm_decompose(t, K, from_double(lam));
            CHECK(r.integral);
            CHECK(r.residual_ok);
            double bf = oracle::brute_force_flat_norm(t, K, lam);
            std::int64_t smax = 0;
            for (auto [i, v] : r.s.coef) smax = std::max<std::int64_t>(smax, std::llabs(v));
            CHECK(smax <= 2);
            CHECK(r.value == doctest::Approx(bf).epsilon(1e-9));
            if (lam >= 1) CHECK(r.mass_x + r.mass_s <= chain_mass(K, t) + 1e-9);
        }
    }
}

TEST_CASE("dilation correspondence") {
    std::vector<Point> v = {P(0, 0), P(2, 0), P(3, 2), P(1, 3), P(-1, 1), P(1, 1)};
    std::vector<Tri> tris = {{{0, 1, 5}}, {{1, 2, 5}}, {{2, 3, 5}}, {{3, 4, 5}}, {{4, 0, 5}}};
    auto K = build_complex(v, tris);
    auto t = boundary_of_all(K);
    for (Rational lam : {Rational(1, 2), Rational(2)}) {
        std::vector<Point> w;
        for (const auto& p : v) w.push_back(lam * p);
        auto L = build_complex(w, tris);
        double lhs = flat_norm_decompose(t, K, lam).value;
        double rhs = flat_norm_decompose(t, L, 1).value / lam.get_d();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("flat distance is a metric on samples") {
    std::mt19937_64 rng(11);
    auto K = oracle::random_small_complex(rng, 10);
    for (int i = 0; i < 10; ++i) {
        auto a = oracle::random_chain(rng, K, 3, 2), b = oracle::random_chain(rng, K, 3, 2),
             c = oracle::random_chain(rng, K, 3, 2);
        double ab = simplicial_flat_distance(a, b, K, 1).value, bc = simplicial_flat_distance(b, c, K, 1).value,
               ac = simplicial_flat_distance(a, c, K, 1).value;
        CHECK(ac <= ab + bc + 1e-9);
        CHECK(simplicial_flat_distance(a, a, K, 1).value == 0);
    }
}

TEST_CASE("flat norm of 0-chains") {
    auto K = build_complex({P(0, 0), P(3, 0), P(0, 4)}, {{{0, 1, 2}}});
    Chain t(0);
    t.add(0, -1);
    t.add(1, 1);
    // the two points are 3 apart: joining costs 3λ, keeping costs 2
    auto near = flat_norm_decompose(t, K, Rational(1, 2));
    CHECK(near.x.empty());
    CHECK(near.value == doctest::Approx(1.5));
    CHECK(near.residual_ok);
    auto far = flat_norm_decompose(t, K, 1);
    CHECK(far.x == t);
    CHECK(far.value == doctest::Approx(2));
}
