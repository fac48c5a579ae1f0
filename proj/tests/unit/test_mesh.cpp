#include <doctest.h>

#include "common/oracles.hpp"
#include "flatnorm/complex/io.hpp"
#include "flatnorm/mesh/cdt.hpp"
#include "flatnorm/mesh/localize.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace flatnorm;

namespace {

Point P(long x, long y) { return {Rational(x), Rational(y)}; }

double deg(double rad) { return rad * 180 / M_PI; }

PSLG unit_square() {
    PSLG g;
    for (auto p : {P(0, 0), P(1, 0), P(1, 1), P(0, 1)}) g.add_vertex(p);
    for (std::size_t i = 0; i < 4; ++i) g.add_segment(i, (i + 1) % 4);
    return g;
}

// Two segments of length `len` from the origin, `angle_deg` apart.
PSLG wedge(double angle_deg, double len) {
    PSLG g;
    double a = angle_deg * M_PI / 180;
    g.add_vertex(P(0, 0));
    g.add_vertex(Point(from_double(len), Rational(0)));
    g.add_vertex(Point::from_doubles(len * std::cos(a), len * std::sin(a)));
    g.add_segment(0, 1);
    g.add_segment(0, 2);
    return g;
}

// Every PSLG segment is the union of its mesh edges, walked from a to b.
void check_conformity(const MeshResult& r) {
    const auto& K = r.complex;
    REQUIRE(r.segment_edges.size() == r.pslg.segments.size());
    for (std::size_t s = 0; s < r.pslg.segments.size(); ++s) {
        const auto& seg = r.pslg.segments[s];
        const Point &a = r.pslg.vertices[seg.a], &b = r.pslg.vertices[seg.b];
        auto cur = K.find_vertex(a);
        REQUIRE(cur);
        std::size_t v = *cur;
        double len = 0;
        for (auto [e, sign] : r.segment_edges[s]) {
            const auto& E = K.edges()[e];
            std::size_t from = sign > 0 ? E[0] : E[1], to = sign > 0 ? E[1] : E[0];
            CHECK(from == v);
            CHECK(orient2d(a, b, K.vertices()[to]) == 0);
            v = to;
            len += K.edge_length(e);
        }
        CHECK(K.vertices()[v] == b);
        CHECK(len == doctest::Approx(distance(a, b)).epsilon(1e-12));
    }
}

void check_lemma33(const Complex2& K) {
    auto R = regularity(K);
    CHECK(R.theta_K <= angle_regularity_bound(R.min_angle_deg) * (1 + 1e-12));
}

}  // namespace

TEST_CASE("forbidden angles and rotation") {
    PSLG seg;
    seg.add_vertex(P(0, 0));
    seg.add_vertex(P(1, 0));
    seg.add_segment(0, 1);
    auto E = forbidden_angles(seg);
    REQUIRE(E.eta == 2);
    CHECK(E.E[0] == 0);
    CHECK(E.E[1] == doctest::Approx(M_PI / 2));
    CHECK(deg(choose_rotation(E)) == doctest::Approx(45));
    CHECK(deg(crossing_angle(E, choose_rotation(E))) == doctest::Approx(45));

    auto empty = forbidden_angles(PSLG{});
    CHECK(empty.eta == 0);
    CHECK(choose_rotation(empty) == 0);

    CHECK(forbidden_angles(unit_square()).eta == 2);

    PSLG two;
    two.add_vertex(P(0, 0));
    two.add_vertex(P(4, 0));
    two.add_vertex(Point::from_doubles(4 * std::cos(M_PI / 6), 4 * std::sin(M_PI / 6)));
    two.add_segment(0, 1);
    two.add_segment(0, 2);
    auto E4 = forbidden_angles(two);
    CHECK(E4.eta == 4);
    CHECK(E4.guard == doctest::Approx(M_PI / 8));
    CHECK(crossing_angle(E4, choose_rotation(E4)) >= E4.guard);
}

TEST_CASE("pslg validation and noding") {
    PSLG g;
    for (auto p : {P(0, 0), P(2, 2), P(0, 2), P(2, 0)}) g.add_vertex(p);
    g.add_segment(0, 1);
    g.add_segment(2, 3);
    CHECK_THROWS_AS(g.validate(), GeometryError);

    PSLG h;
    for (auto p : {P(0, 0), P(2, 0), P(1, 0)}) h.add_vertex(p);
    h.add_segment(0, 1);
    CHECK_THROWS_AS(h.validate(), GeometryError);

    PSLG d = unit_square();
    d.add_segment(1, 0);
    CHECK_THROWS_AS(d.validate(), GeometryError);

    // crossing segments get a shared vertex, multiplicities travel with the pieces
    auto n = pslg_from_segments({{P(0, 0), P(2, 2), 3}, {P(0, 2), P(2, 0), -1}});
    n.validate();
    CHECK(n.vertices.size() == 5);
    CHECK(n.segments.size() == 4);
    std::int64_t m3 = 0, m1 = 0;
    for (const auto& s : n.segments) {
        CHECK((s.a == 4 || s.b == 4 || n.vertices[s.a] == P(1, 1) || n.vertices[s.b] == P(1, 1)));
        if (std::abs(s.mult) == 3) ++m3;
        if (std::abs(s.mult) == 1) ++m1;
    }
    CHECK(m3 == 2);
    CHECK(m1 == 2);

    // collinear overlap merges and sums
    auto o = pslg_from_segments({{P(0, 0), P(2, 0), 1}, {P(1, 0), P(3, 0), 2}});
    Rational total = 0;
    for (const auto& s : o.segments) {
        std::int64_t m = s.mult;
        if (o.vertices[s.b] < o.vertices[s.a]) m = -m;
        Rational x0 = o.vertices[s.a].x(), x1 = o.vertices[s.b].x();
        total += Rational(m) * (x0 < x1 ? Rational(x1 - x0) : Rational(x0 - x1));
        if (std::min(x0, x1) == 1 && std::max(x0, x1) == 2) CHECK(std::abs(s.mult) == 3);
    }
    CHECK(total == 2 * 1 + 2 * 2);
}

TEST_CASE("pslg file round trip and errors") {
    PSLG g = unit_square();
    g.add_vertex(Point(Rational(1, 3), Rational(1, 2)));
    g.add_vertex(Point(Rational(2, 3), Rational(1, 2)));
    g.add_segment(4, 5, -2);
    std::stringstream ss;
    write_pslg(ss, g);
    PSLG r = read_pslg(ss);
    CHECK(r.vertices == g.vertices);
    REQUIRE(r.segments.size() == g.segments.size());
    for (std::size_t i = 0; i < g.segments.size(); ++i) {
        CHECK(r.segments[i].a == g.segments[i].a);
        CHECK(r.segments[i].b == g.segments[i].b);
        CHECK(r.segments[i].mult == g.segments[i].mult);
    }
    std::istringstream bad_header("x y\n");
    CHECK_THROWS_AS(read_pslg(bad_header), FormatError);
    std::istringstream bad_index("2 1\nv 0 0 0\nv 1 1 0\ns 0 0 7\n");
    CHECK_THROWS_AS(read_pslg(bad_index), FormatError);
    std::istringstream crossing("4 2\nv 0 0 0\nv 1 2 2\nv 2 0 2\nv 3 2 0\ns 0 0 1\ns 1 2 3\n");
    CHECK_THROWS(read_pslg(crossing));
}

TEST_CASE("grid superposition on a unit segment") {
    PSLG g;
    g.add_vertex(P(0, 0));
    g.add_vertex(P(1, 0));
    g.add_segment(0, 1, 2);
    GridSpec spec;
    spec.cell_diameter = 0.2;
    spec.rotation = M_PI / 4;
    auto res = superimpose_grid(g, spec);
    res.pslg.validate();
    CHECK(res.geometry.lines > 0);
    CHECK(res.geometry.cell_diameter <= 0.2);
    Rational total = 0;
    std::size_t pieces = 0;
    for (const auto& s : res.pslg.segments) {
        const Point &a = res.pslg.vertices[s.a], &b = res.pslg.vertices[s.b];
        if (s.mult != 0) {
            CHECK(a.y() == 0);
            CHECK(b.y() == 0);
            CHECK(std::abs(s.mult) == 2);
            CHECK(distance(a, b) < 0.2);
            std::int64_t m = b.x() > a.x() ? s.mult : -s.mult;
            total += Rational(m) * (b.x() > a.x() ? Rational(b.x() - a.x()) : Rational(a.x() - b.x()));
            ++pieces;
        } else if (a.y() != b.y() || a.x() == b.x()) {
            // grid line piece: about 45° to the input
            double ang = deg(std::atan2(std::fabs(b.dy() - a.dy()), std::fabs(b.dx() - a.dx())));
            if (ang > 1e-9 && ang < 90 - 1e-9) CHECK(ang == doctest::Approx(45).epsilon(1e-6));
        }
    }
    CHECK(pieces >= 6);
    CHECK(total == 2);
}

TEST_CASE("grid away from the input leaves it unchanged") {
    PSLG g = unit_square();
    GridSpec spec;
    spec.cell_diameter = 1000 * std::sqrt(2.0);
    spec.origin = Point(Rational(-5003, 10), Rational(-5003, 10));
    auto res = superimpose_grid(g, spec);
    CHECK(res.geometry.lines == 0);
    auto h = with_convex_hull(g);
    CHECK(res.pslg.vertices == h.vertices);
    CHECK(res.pslg.segments.size() == h.segments.size());
}

TEST_CASE("delaunay triangulation of random points") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> c(0, 1000);
    Triangulation T(P(0, 0), P(1000, 1000));
    std::set<Point> seen;
    for (int i = 0; i < 300; ++i) {
        Point p = P(c(rng), c(rng));
        if (!seen.insert(p).second) continue;
        T.insert(p, T.locate(p, T.last_created()));
    }
    std::size_t alive = 0;
    for (Triangulation::Id t = 0; t < T.num_tris(); ++t) {
        const auto& tr = T.tri(t);
        if (!tr.alive) continue;
        ++alive;
        CHECK(orient2d(T.point(tr.v[0]), T.point(tr.v[1]), T.point(tr.v[2])) > 0);
        for (Triangulation::Id v = 3; v < T.num_points(); ++v)
            CHECK(incircle(T.point(tr.v[0]), T.point(tr.v[1]), T.point(tr.v[2]), T.point(v)) <= 0);
    }
    CHECK(alive == T.alive_count());
    // Euler: 2n + 1 triangles for n points inside the enclosing triangle
    CHECK(alive == 2 * seen.size() + 1);
}

TEST_CASE("unit square refines to 25 degrees") {
    RefineOptions o;
    o.target_angle_deg = 25;
    o.validate_output = true;
    auto r = refine(unit_square(), o);
    CHECK(r.stats.min_angle_deg >= 25);
    check_conformity(r);
    check_lemma33(r.complex);
    Rational area = 0;
    for (std::size_t t = 0; t < r.complex.num_triangles(); ++t) area += r.complex.triangle_area(t);
    CHECK(area == 1);
}

TEST_CASE("refinement is deterministic") {
    std::mt19937_64 rng(5);
    auto g = oracle::random_pslg(rng, 12, 40, 60);
    RefineOptions o;
    o.target_angle_deg = 26;
    auto a = refine(g, o), b = refine(g, o);
    CHECK(a.complex.vertices() == b.complex.vertices());
    CHECK(a.complex.triangles() == b.complex.triangles());
}

TEST_CASE("terminator bound") {
    CHECK(terminator_bound_deg(60) == doctest::Approx(25.6589).epsilon(1e-5));
    CHECK(terminator_bound_deg(10) == doctest::Approx(4.3288).epsilon(1e-4));
}

TEST_CASE("10 degree wedge") {
    RefineOptions o;
    o.target_angle_deg = 25;
    o.validate_output = true;
    auto g = wedge(10, 1);
    auto r = refine(g, o);
    CHECK(r.stats.input_min_angle_deg == doctest::Approx(10).epsilon(1e-9));
    CHECK(r.stats.min_angle_deg >= terminator_bound_deg(10) - 1e-9);
    check_conformity(r);
    check_lemma33(r.complex);
    // every angle below 30° sits in a triangle touching a wedge segment
    const auto& K = r.complex;
    for (std::size_t t = 0; t < K.num_triangles(); ++t) {
        const auto& tr = K.triangles()[t];
        if (!triangle_has_angle_below(K.vertices()[tr[0]], K.vertices()[tr[1]], K.vertices()[tr[2]], 30)) continue;
        bool touches = false;
        for (auto v : tr)
            for (std::size_t s = 0; s < 2; ++s)
                touches = touches || orient2d(g.vertices[0], g.vertices[s + 1], K.vertices()[v]) == 0;
        CHECK(touches);
    }
}

TEST_CASE("random PSLGs with large input angles") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 8; ++i) {
        auto g = oracle::random_pslg(rng, 14, 60, 60);
        RefineOptions o;
        o.target_angle_deg = 26;
        o.validate_output = true;
        auto r = refine(g, o);
        CHECK(r.stats.input_min_angle_deg >= 60 - 1e-9);
        CHECK(r.stats.min_angle_deg >= terminator_bound_deg(60) - 1e-9);
        check_conformity(r);
        check_lemma33(r.complex);
    }
}

TEST_CASE("size cap stops refinement") {
    RefineOptions o;
    o.target_angle_deg = 25;
    o.max_edge = 0.01;
    o.size_cap = 100;
    CHECK_THROWS_AS(refine(unit_square(), o), MeshError);
    o.target_angle_deg = 40;
    CHECK_THROWS_AS(refine(unit_square(), o), std::invalid_argument);
}

TEST_CASE("max edge option") {
    RefineOptions o;
    o.max_edge = 0.25;
    auto r = refine(unit_square(), o);
    for (std::size_t e = 0; e < r.complex.num_edges(); ++e) CHECK(r.complex.edge_length(e) <= 0.25);
}

TEST_CASE("delta selection") {
    CHECK(beta_constant() == doctest::Approx(227.75).epsilon(1e-4));
    CHECK(beta_constant() == doctest::Approx(angle_regularity_bound(30)));
    for (double eps : {0.1, 0.01, 0.001}) {
        double d = select_delta(4, 4, eps);
        CHECK(tube_area_bound(4, 4, d) < eps);
        CHECK(tube_area_bound(4, 4, 2 * d) >= eps);
        CHECK(std::log2(d) == std::round(std::log2(d)));
    }
    CHECK_THROWS(select_delta(1, 2, 0));
}

TEST_CASE("localize a 10 degree wedge") {
    auto g = wedge(10, 0.25);
    std::vector<double> theta;
    for (double eps : {0.1, 0.01, 0.001}) {
        auto L = localize(g, eps);
        const auto& rep = L.report;
        CHECK(rep.tube_area_bound < eps);
        CHECK(rep.tube_radius == 3 * rep.delta);
        CHECK(rep.small_angles_in_tube);
        CHECK(rep.small_angles > 0);
        CHECK(rep.theta_M_prime <= 227.75);
        CHECK(rep.min_angle_outside_deg >= 30 - 1e-9);
        CHECK(rep.min_angle_deg >= terminator_bound_deg(10) - 1e-9);
        CHECK(rep.crossing_angle_deg >= deg(rep.angles.guard) - 1e-9);
        check_conformity(L.mesh);
        check_lemma33(L.mesh.complex);
        theta.push_back(rep.theta_M);
    }
    for (double t : theta) CHECK(std::fabs(t - theta[0]) <= 0.05 * theta[0]);
}

TEST_CASE("localize with large input angles") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 3; ++i) {
        auto g = oracle::random_pslg(rng, 10, 30, 60);
        for (auto& v : g.vertices) v = Point(v.x() / 24, v.y() / 24);
        for (double eps : {1.0, 0.1}) {
            auto L = localize(g, eps);
            CHECK(L.report.tube_area_bound < eps);
            CHECK(L.report.small_angles_in_tube);
            CHECK(L.report.theta_M_prime <= 227.75);
            check_conformity(L.mesh);
            check_lemma33(L.mesh.complex);
        }
    }
}
