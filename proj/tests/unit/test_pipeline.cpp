#include <doctest.h>

#include "flatnorm/deform/deform.hpp"
#include "flatnorm/geom/arrangement.hpp"
#include "flatnorm/pipeline/converge.hpp"
#include "flatnorm/pipeline/examples.hpp"
#include "flatnorm/pipeline/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

using namespace flatnorm;

namespace {

Point P(long x, long y) { return {Rational(x), Rational(y)}; }

LocalizeOptions plain() {
    LocalizeOptions o;
    o.use_grid = false;
    return o;
}

PLCurrent unit_square() { return PLCurrent::polyline({P(0, 0), P(1, 0), P(1, 1), P(0, 1)}, 1, true); }

ExperimentConfig circle_config(std::vector<double> deltas) {
    ArcSpec a;
    a.center = P(0, 0);
    a.end = 2 * std::numbers::pi;
    ExperimentConfig c;
    c.input = CurveSpec::from_arc(a);
    c.known = Decomposition::fill;
    c.reference = std::numbers::pi;
    c.deltas = std::move(deltas);
    return c;
}

}  // namespace

TEST_CASE("embedding a segment keeps its mass") {
    auto seg = PLCurrent::polyline({P(0, 0), P(3, 1)});
    auto E = embed_chains({seg}, {}, 0.1, plain());
    const auto& K = E.complex();
    CHECK(E.curves[0].coef.size() > 1);
    CHECK((to_current(K, E.curves[0]) - seg).canonical().empty());
    CHECK(chain_mass(K, E.curves[0]) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
}

TEST_CASE("embedding a region gives its exact area") {
    auto S = PLRegion::polygon({P(0, 0), P(4, 0), P(5, 3), P(1, 2)});
    auto T = PLCurrent::polyline({P(0, 0), P(2, 5)});
    auto E = embed_chains({T}, {S}, 0.1, plain());
    const auto& K = E.complex();
    CHECK(chain_area(K, E.regions[0]) == S.signed_area());
    CHECK(apply_boundary(K, E.regions[0]) == edge_chain(region_boundary(S), K));
}

TEST_CASE("crossing inputs are noded") {
    auto a = PLCurrent::polyline({P(0, 0), P(2, 2)}, 2);
    auto b = PLCurrent::polyline({P(0, 2), P(2, 0)}, -1);
    auto E = embed_chains({a, b}, {}, 0.1, plain());
    const auto& K = E.complex();
    CHECK(K.find_vertex(P(1, 1)).has_value());
    CHECK((to_current(K, E.curves[0]) - a).canonical().empty());
    CHECK((to_current(K, E.curves[1]) - b).canonical().empty());
    CHECK(chain_mass(K, E.curves[0]) == doctest::Approx(4 * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("strip of diamonds") {
    auto s = gen_strip(2, Rational(2));
    CHECK(s.K.num_triangles() == 4);
    CHECK(s.K.num_vertices() == 7);
    CHECK(chain_mass(s.K, s.P) == doctest::Approx(8).epsilon(1e-15));
    CHECK(s.T.mass() == doctest::Approx(4 * std::numbers::sqrt3).epsilon(1e-15));
    CHECK(apply_boundary(s.K, s.P) == point_masses_to_chain(s.K, pl_boundary(s.T)));
    auto F = flat_norm_decompose(s.P, s.K, Rational(1));
    CHECK(F.integral);
    CHECK(F.residual_ok);
    CHECK(F.x == s.P);
    CHECK(F.s.empty());
    CHECK(F.value / s.T.mass() == doctest::Approx(2 / std::numbers::sqrt3).epsilon(1e-12));
}

TEST_CASE("strip filler area shrinks with fixed length") {
    double prev = INFINITY;
    for (std::size_t n : {1, 2, 4, 8, 16}) {
        Rational side = Rational(1) / Rational(n);
        auto s = gen_strip(n, side);
        double tri = std::sqrt(3.0) / 4 / double(n * n);
        double area = filler_area_bound(s.T, to_current(s.K, s.P)).get_d();
        CHECK(area == doctest::Approx(double(n) * tri).epsilon(1e-12));
        CHECK(area < prev);
        prev = area;
    }
}

TEST_CASE("octagon on a disk mesh") {
    auto d = gen_ngon_disk(8, 1, 0.1);
    const auto& K = d.embedding.complex();
    CHECK(chain_mass(K, d.t) == doctest::Approx(16 * std::sin(std::numbers::pi / 8)).epsilon(1e-13));
    auto circle = circle_proxy(1, 4096);
    double filler = filler_area_bound(d.polygon, circle).get_d();
    CHECK(filler == doctest::Approx(std::numbers::pi - 2 * std::numbers::sqrt2).epsilon(1e-5));
    CHECK(circle_proxy(1, 512).mass() + circle.mass() == doctest::Approx(4 * std::numbers::pi).epsilon(1e-4 / (4 * std::numbers::pi)));
}

TEST_CASE("segment convergence is exact") {
    ExperimentConfig c;
    c.input = CurveSpec::from_polyline(PLCurrent::polyline({P(0, 0), P(1, 0)}));
    c.reference = 1;
    c.deltas = {0.1, 0.05};
    auto r = converge_experiment(c);
    REQUIRE(r.rows.size() == 2);
    for (const auto& row : r.rows) {
        CHECK(row.error.empty());
        CHECK(row.value == 1);
        CHECK(row.integral);
        CHECK(row.identity_ok);
        CHECK(row.candidate_ok);
        CHECK(row.cap_met == (row.Delta <= row.delta_cap));
    }
    CHECK(r.verdict);
}

TEST_CASE("circle convergence follows the polygon areas") {
    auto r = converge_experiment(circle_config({0.1, 0.05}));
    REQUIRE(r.rows.size() == 2);
    // fill wins at λ = 1; the k-gon has area (k/2)·sin(2π/k)
    CHECK(r.rows[0].chords == 16);
    CHECK(r.rows[1].chords == 32);
    for (const auto& row : r.rows) {
        double k = double(row.chords);
        CHECK(row.error.empty());
        CHECK(row.value == doctest::Approx(k / 2 * std::sin(2 * std::numbers::pi / k)).epsilon(1e-9));
        CHECK(row.mass_x == 0);
        CHECK(row.integral);
        CHECK(row.residual_ok);
        CHECK(row.identity_ok);
        CHECK(row.candidate_ok);
        CHECK(row.deform_ok);
        CHECK(row.gap <= row.delta);
    }
    CHECK(r.gaps_nonincreasing);
    CHECK(r.bounded);
    CHECK(r.C_measured <= r.C_theory);
}

TEST_CASE("experiment config is checked") {
    auto c = circle_config({0.05, 0.1});
    CHECK_THROWS(converge_experiment(c));
    c.deltas = {0.1, -0.1};
    CHECK_THROWS(converge_experiment(c));
}

TEST_CASE("unit square spans below λ = 4") {
    auto E = embed_chains({unit_square()}, {}, 0.1, plain());
    const auto& K = E.complex();
    auto r = spanning_experiment(E.curves[0], K, {Rational(1, 10), Rational(1), Rational(100)});
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].x_zero);
    CHECK(r.rows[0].mass_s == doctest::Approx(1));
    CHECK(r.rows[1].x_zero);
    CHECK(r.rows[2].x_is_t);
    REQUIRE(r.thresholds.size() == 1);
    CHECK(r.thresholds[0].lambda_exact == 4);
    CHECK(r.lambda0 == 100);
    CHECK(r.verdict);
}

TEST_CASE("dilation correspondence") {
    auto d = gen_ngon_disk(12, 1, 0.1);
    const auto& K = d.embedding.complex();
    std::mt19937_64 rng(5);
    Chain t = d.t;
    for (int k = 0; k < 5; ++k) t.add(rng() % K.num_edges(), 1);
    for (auto lam : {Rational(1, 2), Rational(2)}) {
        auto c = dilation_check(t, K, lam);
        CHECK(c.rel_error < 1e-9);
    }
}

TEST_CASE("report files") {
    ConvergenceReport rep;
    ConvergenceRow row;
    row.delta = 0.1, row.value = 3, row.triangles = 10, row.integral = row.residual_ok = true;
    rep.rows = {row, row};
    auto csv = convergence_csv(rep);
    CHECK(csv.rfind("delta,mass_P,value,gap,integral,triangles,min_angle,theta_K,seconds\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    auto dir = std::filesystem::temp_directory_path() / "flatnorm_io_test";
    std::filesystem::remove_all(dir);
    write_convergence(dir.string(), rep);
    std::ifstream is(dir / "converge.json");
    auto j = json::parse(is);
    CHECK(j["rows"].size() == 2);
    CHECK(j["rows"][0]["triangles"] == 10);
    CHECK(!std::filesystem::exists(dir / "converge.json.tmp"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("current and region files round-trip") {
    PLCurrent c;
    c.add(Point(Rational(1, 3), Rational(-2)), Point(Rational(5, 7), Rational(1, 2)), -3);
    c.add(P(0, 0), P(1, 1), 1);
    std::stringstream ss;
    write_plc(ss, c);
    auto c2 = read_plc(ss);
    CHECK((c2 - c).canonical().empty());

    PLRegion r;
    r.add({{P(0, 0), P(2, 0), Point(Rational(1, 2), Rational(3, 2))}, 2});
    r.add({{P(3, 3), P(4, 3), P(4, 4), P(3, 4)}, -1});
    std::stringstream rs;
    write_plr(rs, r);
    auto r2 = read_plr(rs);
    CHECK(r2.signed_area() == r.signed_area());
    CHECK(r2.polygons().size() == 2);

    std::stringstream bad("0 0 1 1\n");
    CHECK_THROWS(read_plc(bad));
    std::stringstream bad2("1 0 0 1 0\n");
    CHECK_THROWS(read_plr(bad2));
    std::stringstream comment("# a comment\n0 0 1/2 0.25 2  # trailing\n");
    auto c3 = read_plc(comment);
    REQUIRE(c3.size() == 1);
    CHECK(c3.segments()[0].b.y() == Rational(1, 4));
}
