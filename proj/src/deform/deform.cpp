#include "flatnorm/deform/deform.hpp"

#include "flatnorm/complex/regularity.hpp"
#include "flatnorm/geom/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>

namespace flatnorm {
namespace {

constexpr double kEdgeTheta = 8;
constexpr std::size_t kMaxCandidates = 10000;
constexpr double kSlack = 1e-9;
constexpr double kGolden = 0.6180339887498949;
constexpr double kR2a = 0.7548776662466927, kR2b = 0.5698402909980532;

double frac(double v) { return v - std::floor(v); }

TriangleGeometry tri_of(const Complex2& K, std::size_t t) {
    const auto& v = K.triangles()[t];
    return {K.vertices()[v[0]], K.vertices()[v[1]], K.vertices()[v[2]]};
}

bool strictly_inside(const TriangleGeometry& T, const Point& p) {
    for (int j = 0; j < 3; ++j)
        if (orient2d(T[j], T[(j + 1) % 3], p) <= 0) return false;
    return true;
}

// Bucket grid over triangle bounding boxes.
class Locator {
public:
    explicit Locator(const Complex2& K) : K_(K) {
        const auto& V = K.vertices();
        if (V.empty()) return;
        x0_ = x1_ = V[0].dx();
        y0_ = y1_ = V[0].dy();
        for (const auto& p : V) {
            x0_ = std::min(x0_, p.dx()), x1_ = std::max(x1_, p.dx());
            y0_ = std::min(y0_, p.dy()), y1_ = std::max(y1_, p.dy());
        }
        pad_ = 1e-9 * std::max({1.0, x1_ - x0_, y1_ - y0_});
        n_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(K.num_triangles()))));
        w_ = std::max((x1_ - x0_) / n_, 1e-300);
        h_ = std::max((y1_ - y0_) / n_, 1e-300);
        cells_.resize(n_ * n_);
        for (std::size_t t = 0; t < K.num_triangles(); ++t) {
            auto T = tri_of(K, t);
            double a0 = std::min({T[0].dx(), T[1].dx(), T[2].dx()}), a1 = std::max({T[0].dx(), T[1].dx(), T[2].dx()});
            double b0 = std::min({T[0].dy(), T[1].dy(), T[2].dy()}), b1 = std::max({T[0].dy(), T[1].dy(), T[2].dy()});
            auto [i0, j0, i1, j1] = range(a0, b0, a1, b1);
            for (std::size_t i = i0; i <= i1; ++i)
                for (std::size_t j = j0; j <= j1; ++j) cells_[i * n_ + j].push_back(t);
        }
    }

    std::vector<std::size_t> query(double a0, double b0, double a1, double b1) const {
        std::vector<std::size_t> out;
        if (cells_.empty()) return out;
        auto [i0, j0, i1, j1] = range(a0, b0, a1, b1);
        for (std::size_t i = i0; i <= i1; ++i)
            for (std::size_t j = j0; j <= j1; ++j)
                out.insert(out.end(), cells_[i * n_ + j].begin(), cells_[i * n_ + j].end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    enum class Kind { vertex, edge, face };
    struct Where {
        Kind kind;
        std::size_t id;
    };

    Where locate(const Point& p) const {
        if (auto v = K_.find_vertex(p)) return {Kind::vertex, *v};
        for (auto t : query(p.dx(), p.dy(), p.dx(), p.dy())) {
            auto T = tri_of(K_, t);
            int zeros = 0, slot = 0;
            bool out = false;
            for (int j = 0; j < 3 && !out; ++j) {
                int o = orient2d(T[j], T[(j + 1) % 3], p);
                if (o < 0) out = true;
                if (o == 0) ++zeros, slot = j;
            }
            if (out) continue;
            if (zeros == 0) return {Kind::face, t};
            if (zeros == 1) return {Kind::edge, K_.triangle_edges(t)[slot]};
        }
        throw DeformError("point outside the complex");
    }

private:
    std::array<std::size_t, 4> range(double a0, double b0, double a1, double b1) const {
        auto cx = [&](double x) {
            double c = std::floor((x - x0_) / w_);
            return static_cast<std::size_t>(std::clamp(c, 0.0, double(n_ - 1)));
        };
        auto cy = [&](double y) {
            double c = std::floor((y - y0_) / h_);
            return static_cast<std::size_t>(std::clamp(c, 0.0, double(n_ - 1)));
        };
        return {cx(a0 - pad_), cy(b0 - pad_), cx(a1 + pad_), cy(b1 + pad_)};
    }

    const Complex2& K_;
    double x0_ = 0, x1_ = 0, y0_ = 0, y1_ = 0, w_ = 1, h_ = 1, pad_ = 0;
    std::size_t n_ = 0;
    std::vector<std::vector<std::size_t>> cells_;
};

// Position on the boundary of a triangle: slot j runs from vertex j to j+1, u in [0, 1).
struct BPos {
    int slot;
    Rational u;
    Point p;
};

BPos exit_point(const TriangleGeometry& T, const Point& a, const Point& x) {
    for (int j = 0; j < 3; ++j) {
        const Point &v0 = T[j], &v1 = T[(j + 1) % 3];
        auto u = line_intersection_param(v0, v1, a, x);
        if (!u || *u < 0 || *u > 1) continue;
        Point q = lerp(v0, v1, *u);
        if (dot(q - a, x - a) <= 0) continue;
        if (*u == 1) return {(j + 1) % 3, Rational(0), q};
        return {j, *u, q};
    }
    throw DeformError("radial projection found no exit point");
}

// Counter-clockwise walk along the boundary from p to q.
std::vector<Point> ccw_path(const TriangleGeometry& T, const BPos& p, const BPos& q) {
    std::vector<Point> pts{p.p};
    int slot = p.slot;
    Rational u = p.u;
    for (int guard = 0; guard < 5; ++guard) {
        if (slot == q.slot && u <= q.u) {
            if (u < q.u) pts.push_back(q.p);
            return pts;
        }
        pts.push_back(T[(slot + 1) % 3]);
        slot = (slot + 1) % 3;
        u = 0;
    }
    throw DeformError("boundary walk did not close");
}

struct DPos {
    int slot;
    double u;
};

DPos exit_point_d(const TriangleGeometry& T, double ax, double ay, double x, double y) {
    double dx = x - ax, dy = y - ay;
    DPos best{0, 0};
    double err = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 3; ++j) {
        double v0x = T[j].dx(), v0y = T[j].dy();
        double ex = T[(j + 1) % 3].dx() - v0x, ey = T[(j + 1) % 3].dy() - v0y;
        double den = dx * ey - dy * ex;
        if (den == 0) continue;
        double wx = v0x - ax, wy = v0y - ay;
        double s = (wx * ey - wy * ex) / den;
        double u = (wx * dy - wy * dx) / den;
        if (s <= 0) continue;
        double e = u < 0 ? -u : u > 1 ? u - 1 : 0;
        if (e < err) err = e, best = {j, std::clamp(u, 0.0, 1.0)};
    }
    if (best.u >= 1) best = {(best.slot + 1) % 3, 0};
    return best;
}

double ccw_length(const std::array<double, 3>& len, DPos p, DPos q) {
    if (p.slot == q.slot && q.u >= p.u) return (q.u - p.u) * len[p.slot];
    double L = (1 - p.u) * len[p.slot];
    for (int s = (p.slot + 1) % 3; s != q.slot; s = (s + 1) % 3) L += len[s];
    return L + q.u * len[q.slot];
}

Point incenter(const TriangleGeometry& T, const SimplexRegularity& s) {
    double la = distance(T[1], T[2]), lb = distance(T[0], T[2]), lc = distance(T[0], T[1]);
    double x = (la * T[0].dx() + lb * T[1].dx() + lc * T[2].dx()) / s.perimeter;
    double y = (la * T[0].dy() + lb * T[1].dy() + lc * T[2].dy()) / s.perimeter;
    return Point::from_doubles(x, y);
}

std::vector<Point> clip_polygon(const std::vector<Point>& poly, const TriangleGeometry& T) {
    std::vector<Point> out = poly;
    for (int j = 0; j < 3 && !out.empty(); ++j) {
        const Point &a = T[j], &b = T[(j + 1) % 3];
        std::vector<Point> in;
        in.swap(out);
        for (std::size_t i = 0, n = in.size(); i < n; ++i) {
            const Point &P = in[i], &Q = in[(i + 1) % n];
            int oP = orient2d(a, b, P), oQ = orient2d(a, b, Q);
            if (oP >= 0) out.push_back(P);
            if ((oP > 0 && oQ < 0) || (oP < 0 && oQ > 0)) out.push_back(lerp(P, Q, *line_intersection_param(P, Q, a, b)));
        }
    }
    std::vector<Point> v;
    for (auto& q : out)
        if (v.empty() || !(v.back() == q)) v.push_back(q);
    while (v.size() > 1 && v.front() == v.back()) v.pop_back();
    return v;
}

struct FacePiece {
    std::size_t cur;
    Segment s;
};
struct FacePoint {
    std::size_t cur;
    Point p;
    std::int64_t mu;
};
struct RegionPart {
    std::size_t reg;
    Polygon poly;
};
struct Interval {
    std::size_t cur;
    Rational t0, t1;  // t0 < t1 along the stored edge direction
    std::int64_t k;
};

Interval make_interval(const Complex2& K, std::size_t e, std::size_t cur, const Point& a, const Point& b,
                       std::int64_t k) {
    const Point& E0 = K.vertices()[K.edges()[e][0]];
    const Point& E1 = K.vertices()[K.edges()[e][1]];
    Rational ta = project_param(E0, E1, a), tb = project_param(E0, E1, b);
    if (ta < tb) return {cur, ta, tb, k};
    return {cur, tb, ta, -k};
}

// Splits the current at the complex's edges and files each piece.
void clip_current(const Complex2& K, const Locator& loc, const PLCurrent& c, std::size_t cur,
                  std::vector<std::vector<FacePiece>>& faces, std::vector<std::vector<Interval>>& edges) {
    for (const auto& s : c.segments()) {
        std::vector<Rational> ts{Rational(0), Rational(1)};
        for (auto t : loc.query(std::min(s.a.dx(), s.b.dx()), std::min(s.a.dy(), s.b.dy()),
                                std::max(s.a.dx(), s.b.dx()), std::max(s.a.dy(), s.b.dy()))) {
            auto T = tri_of(K, t);
            for (int j = 0; j < 3; ++j) {
                const Point &c0 = T[j], &c1 = T[(j + 1) % 3];
                auto rel = segment_relation(s.a, s.b, c0, c1);
                if (rel == SegmentRelation::disjoint) continue;
                if (rel == SegmentRelation::overlapping || (orient2d(s.a, s.b, c0) == 0 && orient2d(s.a, s.b, c1) == 0)) {
                    ts.push_back(project_param(s.a, s.b, c0));
                    ts.push_back(project_param(s.a, s.b, c1));
                } else if (auto u = line_intersection_param(s.a, s.b, c0, c1)) {
                    ts.push_back(*u);
                }
            }
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        std::vector<Rational> cut;
        for (auto& t : ts)
            if (t >= 0 && t <= 1) cut.push_back(t);
        for (std::size_t i = 0; i + 1 < cut.size(); ++i) {
            Point p = lerp(s.a, s.b, cut[i]), q = lerp(s.a, s.b, cut[i + 1]);
            auto w = loc.locate(lerp(s.a, s.b, (cut[i] + cut[i + 1]) / 2));
            if (w.kind == Locator::Kind::face)
                faces[w.id].push_back({cur, {p, q, s.mult}});
            else if (w.kind == Locator::Kind::edge)
                edges[w.id].push_back(make_interval(K, w.id, cur, p, q, s.mult));
            else
                throw DeformError("segment piece located at a vertex");
        }
    }
}

// Double-precision image length of the pieces under center a.
double image_length_d(const TriangleGeometry& T, const std::array<double, 3>& len, const Point& a,
                      const Segment& s) {
    int o = orient2d(a, s.a, s.b);
    if (o == 0) return 0;
    DPos px = exit_point_d(T, a.dx(), a.dy(), s.a.dx(), s.a.dy());
    DPos py = exit_point_d(T, a.dx(), a.dy(), s.b.dx(), s.b.dy());
    return o > 0 ? ccw_length(len, px, py) : ccw_length(len, py, px);
}

double region_density(const std::vector<Polygon>& polys, const Point& a) {
    double d = 0;
    for (const auto& p : polys) d += double(p.mult) * winding_number(p.vertices, a);
    return d;
}

double region_pre(const std::vector<Polygon>& polys) {
    double m = 0;
    for (const auto& p : polys) m += std::fabs(double(p.mult)) * std::fabs(polygon_area2(p.vertices).get_d()) / 2;
    return m;
}

// Ratios of each curve and region under center a; empty when a is not admissible.
std::optional<std::vector<double>> expansions_at(const TriangleGeometry& T, const Point& a,
                                                 const std::vector<PLCurrent>& curves,
                                                 const std::vector<std::vector<Polygon>>& regions,
                                                 const std::vector<Point>& avoid) {
    if (!strictly_inside(T, a)) return std::nullopt;
    for (const auto& p : avoid)
        if (p == a) return std::nullopt;
    std::array<double, 3> len{distance(T[0], T[1]), distance(T[1], T[2]), distance(T[2], T[0])};
    std::vector<double> out;
    for (const auto& c : curves) {
        double pre = 0, img = 0;
        for (const auto& s : c.segments()) {
            if (on_segment(s.a, s.b, a)) return std::nullopt;
            double k = std::fabs(double(s.mult));
            pre += k * distance(s.a, s.b);
            img += k * image_length_d(T, len, a, s);
        }
        out.push_back(pre > 0 ? img / pre : 0);
    }
    double area = std::fabs(area2(T[0], T[1], T[2]).get_d()) / 2;
    for (const auto& r : regions) {
        for (const auto& p : r)
            if (point_on_loop(p.vertices, a)) return std::nullopt;
        double pre = region_pre(r);
        out.push_back(pre > 0 ? std::fabs(region_density(r, a)) * area / pre : 0);
    }
    return out;
}

struct Content {
    std::vector<std::vector<FacePiece>> faces;
    std::vector<std::vector<FacePoint>> face_points;
    std::vector<std::vector<RegionPart>> parts;
    std::vector<std::vector<Interval>> edges;
    std::vector<PointMasses> boundaries;  // of the 1-currents
};

Content gather(const Complex2& K, const Locator& loc, const std::vector<PLCurrent>& ones,
               const std::vector<PLRegion>& regions) {
    Content C;
    C.faces.resize(K.num_triangles());
    C.face_points.resize(K.num_triangles());
    C.parts.resize(K.num_triangles());
    C.edges.resize(K.num_edges());
    for (std::size_t i = 0; i < ones.size(); ++i) {
        clip_current(K, loc, ones[i], i, C.faces, C.edges);
        C.boundaries.push_back(pl_boundary(ones[i]));
        for (auto [p, mu] : C.boundaries.back()) {
            auto w = loc.locate(p);
            if (w.kind == Locator::Kind::face) C.face_points[w.id].push_back({i, p, mu});
        }
    }
    for (std::size_t j = 0; j < regions.size(); ++j) {
        for (const auto& poly : regions[j].polygons()) {
            double a0 = poly.vertices[0].dx(), a1 = a0, b0 = poly.vertices[0].dy(), b1 = b0;
            for (const auto& p : poly.vertices) {
                a0 = std::min(a0, p.dx()), a1 = std::max(a1, p.dx());
                b0 = std::min(b0, p.dy()), b1 = std::max(b1, p.dy());
            }
            Rational covered = 0;
            for (auto t : loc.query(a0, b0, a1, b1)) {
                auto v = clip_polygon(poly.vertices, tri_of(K, t));
                if (v.size() < 3) continue;
                Rational A = polygon_area2(v);
                if (A == 0) continue;
                covered += A;
                C.parts[t].push_back({j, {std::move(v), poly.mult}});
            }
            if (covered != polygon_area2(poly.vertices)) throw DeformError("region leaves the complex");
        }
    }
    return C;
}

DeformResult run(const std::vector<PLCurrent>& curves_in, const std::vector<PLRegion>& regions, const Complex2& K,
                 const CenterChoice* given, double eps, std::uint64_t seed) {
    const std::size_t m = curves_in.size(), n = regions.size(), N1 = m + n;
    if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
    Locator loc(K);
    std::vector<PLCurrent> ones;
    for (const auto& c : curves_in) ones.push_back(c.canonical());
    for (const auto& r : regions) ones.push_back(region_boundary(r).canonical());
    Content C = gather(K, loc, ones, regions);

    DeformResult res;
    auto& cert = res.certificate;
    cert.m = m, cert.n = n, cert.eps = eps;
    cert.factor = 2.0 * m + 2.0 * n + eps;
    cert.delta = K.max_diameter();
    cert.theta_K = regularity(K).theta_K;
    const double factor = cert.factor;

    std::vector<double> traj(N1 + n, kEdgeTheta);
    std::vector<PLCurrent> image(N1), Q(N1);
    std::vector<PLRegion> R(N1);
    res.O.assign(n, Chain(2));
    cert.centers.triangle.resize(K.num_triangles());
    cert.centers.edge.resize(K.num_edges());
    if (given) {
        if (given->triangle.size() != K.num_triangles() || given->edge.size() != K.num_edges())
            throw std::invalid_argument("center choice does not match the complex");
    }

    for (std::size_t t = 0; t < K.num_triangles(); ++t) {
        auto T = tri_of(K, t);
        const auto& pieces = C.faces[t];
        const auto& parts = C.parts[t];
        std::vector<PLCurrent> cs(N1);
        std::vector<std::vector<Polygon>> rs(n);
        for (const auto& fp : pieces) cs[fp.cur].add(fp.s.a, fp.s.b, fp.s.mult);
        for (const auto& rp : parts) rs[rp.reg].push_back(rp.poly);
        std::vector<Point> avoid;
        for (const auto& q : C.face_points[t]) avoid.push_back(q.p);
        Point a;
        std::vector<double> ex;
        double theta = 0;
        if (given) {
            a = given->triangle[t];
            auto e = expansions_at(T, a, cs, rs, avoid);
            if (!e) throw DeformError("triangle center " + std::to_string(t) + " is not admissible");
            ex = *e;
            ++cert.candidates;
            theta = simplex_regularity(T[0], T[1], T[2]).theta;
        } else {
            auto sel = select_center(T, cs, rs, factor, seed + t, avoid);
            a = sel.center, ex = sel.expansions, theta = sel.theta;
            cert.candidates += sel.candidates;
        }
        cert.centers.triangle[t] = a;
        bool any = !pieces.empty() || !parts.empty() || !C.face_points[t].empty();
        if (!any) continue;

        for (std::size_t i = 0; i < N1; ++i) {
            if (cs[i].empty()) continue;
            auto pr = project_in_triangle(cs[i], T, a);
            ex[i] = pr.image.raw_mass() / cs[i].raw_mass();
            image[i].append(pr.image);
            R[i].append(pr.filler);
        }
        for (std::size_t i = 0; i < N1 + n; ++i) {
            bool has = i < N1 ? !cs[i].empty() : !rs[i - N1].empty();
            if (i < N1)
                for (const auto& q : C.face_points[t]) has = has || q.cur == i;
            if (!has) continue;
            traj[i] = std::max(traj[i], theta);
            if (ex[i] > 0) cert.expansions.push_back({2, t, i, ex[i], theta});
        }
        for (const auto& q : C.face_points[t]) {
            Point pq = exit_point(T, a, q.p).p;
            Q[q.cur].add(q.p, pq, -q.mu);
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (rs[j].empty()) continue;
            std::int64_t d = 0;
            for (const auto& p : rs[j]) d += p.mult * winding_number(p.vertices, a);
            if (d) res.O[j].add(t, d);
        }
    }
    // file the images on the edges
    for (std::size_t i = 0; i < N1; ++i) {
        if (image[i].empty()) continue;
        for (const auto& s : image[i].segments()) {
            auto w = loc.locate(lerp(s.a, s.b, Rational(1, 2)));
            if (w.kind != Locator::Kind::edge) throw DeformError("projected piece is not on an edge");
            C.edges[w.id].push_back(make_interval(K, w.id, i, s.a, s.b, s.mult));
        }
    }

    std::vector<Chain> P(N1, Chain(1));
    for (std::size_t e = 0; e < K.num_edges(); ++e) {
        const auto& iv = C.edges[e];
        const Point& E0 = K.vertices()[K.edges()[e][0]];
        const Point& E1 = K.vertices()[K.edges()[e][1]];
        std::vector<Rational> ends;
        std::vector<Rational> before(N1, Rational(0));
        std::vector<char> present(N1, 0);
        for (const auto& v : iv) ends.push_back(v.t0), ends.push_back(v.t1), present[v.cur] = 1;
        std::sort(ends.begin(), ends.end());
        ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
        if (!iv.empty()) {
            for (std::size_t i = 0; i < N1; ++i) {
                if (!present[i]) continue;
                std::map<Rational, std::int64_t> jumps;
                for (const auto& v : iv)
                    if (v.cur == i) jumps[v.t0] += v.k, jumps[v.t1] -= v.k;
                std::int64_t run = 0;
                Rational prev = 0;
                for (auto& [t, d] : jumps) {
                    before[i] += abs(Rational(run)) * (t - prev);
                    run += d;
                    prev = t;
                }
            }
        }
        auto mult_at = [&](std::size_t i, const Rational& c) {
            std::int64_t s = 0;
            for (const auto& v : iv)
                if (v.cur == i && v.t0 < c && c < v.t1) s += v.k;
            return s;
        };
        auto admissible = [&](const Rational& c) {
            return !std::binary_search(ends.begin(), ends.end(), c);
        };
        auto worst = [&](const Rational& c) {
            double w = 0;
            for (std::size_t i = 0; i < N1; ++i)
                if (present[i] && before[i] > 0) w = std::max(w, std::fabs(double(mult_at(i, c))) / before[i].get_d());
            return w;
        };
        Rational c;
        if (given) {
            c = given->edge[e];
            if (!(c > 0 && c < 1) || !admissible(c)) throw DeformError("edge center " + std::to_string(e) + " is not admissible");
            ++cert.candidates;
        } else {
            bool ok = false;
            double off = frac(double(seed + e) * kGolden);
            for (std::size_t k = 0; k < kMaxCandidates && !ok; ++k) {
                double u = k == 0 ? 0.5 : 0.25 + 0.5 * frac(off + double(k) * kGolden);
                c = round_dyadic(u, 40);
                ++cert.candidates;
                ok = admissible(c) && worst(c) <= factor * kEdgeTheta * (1 + kSlack);
            }
            if (!ok) throw DeformError("no admissible edge center on edge " + std::to_string(e));
        }
        cert.centers.edge[e] = c;
        if (iv.empty()) continue;
        for (std::size_t i = 0; i < N1; ++i) {
            if (!present[i]) continue;
            std::int64_t mc = mult_at(i, c);
            if (mc) P[i].add(e, mc);
            if (before[i] > 0) cert.expansions.push_back({1, e, i, std::fabs(double(mc)) / before[i].get_d(), kEdgeTheta});
            std::map<Rational, std::int64_t> bd;
            for (const auto& v : iv)
                if (v.cur == i) bd[v.t1] += v.k, bd[v.t0] -= v.k;
            for (auto& [t, mu] : bd) {
                if (mu == 0 || t <= 0 || t >= 1) continue;
                Q[i].add(lerp(E0, E1, t), t < c ? E0 : E1, -mu);
            }
        }
    }

    for (const auto& x : cert.expansions)
        cert.worst_ratio = std::max(cert.worst_ratio, x.ratio / (factor * x.theta));

    const double D = cert.delta;
    auto le = [](double a, double b) { return a <= b * (1 + kSlack) + kSlack; };
    for (std::size_t i = 0; i < m; ++i) {
        CurveCertificate cc;
        cc.mass = ones[i].mass();
        for (auto [p, mu] : C.boundaries[i]) cc.boundary_mass += std::fabs(double(mu));
        cc.pushed_mass = chain_mass(K, P[i]);
        Chain dP = apply_boundary(K, P[i]);
        cc.pushed_boundary_mass = chain_mass(K, dP);
        cc.Q = Q[i].canonical();
        cc.R = std::move(R[i]);
        cc.q_mass = cc.Q.mass();
        cc.r_mass = cc.R.mass();
        cc.theta = traj[i];
        double cL = factor * cc.theta;
        cc.mass_bound = cL * cc.mass + D * cL * cL * cc.boundary_mass;
        cc.boundary_bound = cL * cL * cc.boundary_mass;
        cc.flat_bound = D * cL * (cc.mass + (1 + cL) * cc.boundary_mass);
        cc.bounds_hold = le(cc.pushed_mass, cc.mass_bound) && le(cc.pushed_boundary_mass, cc.boundary_bound) &&
                         le(cc.q_mass + cc.r_mass, cc.flat_bound);
        cc.boundary_commutes = dP == push_points(C.boundaries[i], K, cert.centers);
        cert.curves.push_back(std::move(cc));
        res.P.push_back(P[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        RegionCertificate rc;
        rc.mass = regions[j].mass();
        rc.boundary_mass = ones[m + j].mass();
        rc.pushed_mass = chain_mass(K, res.O[j]);
        Chain dO = apply_boundary(K, res.O[j]);
        rc.pushed_boundary_mass = chain_mass(K, dO);
        rc.R = std::move(R[m + j]);
        rc.r_mass = rc.R.mass();
        rc.theta = std::max(traj[m + j], traj[N1 + j]);
        double cL = factor * rc.theta;
        rc.mass_bound = rc.mass + D * cL * rc.boundary_mass;
        rc.boundary_bound = cL * rc.boundary_mass;
        rc.flat_bound = D * (rc.mass + (1 + cL) * rc.boundary_mass);
        rc.bounds_hold = le(rc.pushed_mass, rc.mass_bound) && le(rc.pushed_boundary_mass, rc.boundary_bound) &&
                         le(rc.r_mass, rc.flat_bound);
        rc.boundary_commutes = dO == P[m + j];
        cert.regions.push_back(std::move(rc));
    }
    return res;
}

}  // namespace

CenterSelection select_center(const TriangleGeometry& tri, const std::vector<PLCurrent>& curves,
                              const std::vector<std::vector<Polygon>>& regions, double factor, std::uint64_t seed,
                              const std::vector<Point>& avoid) {
    auto s = simplex_regularity(tri[0], tri[1], tri[2]);
    if (orient2d(tri[0], tri[1], tri[2]) <= 0) throw std::invalid_argument("triangle must be counter-clockwise");
    Point I = incenter(tri, s);
    double rho = s.inradius / 2 * (1 - 1e-6);
    int bits = 40 - std::ilogb(s.inradius);
    double s1 = frac(double(seed) * kGolden), s2 = frac(double(seed) * kR2b + 0.5);
    CenterSelection out;
    out.theta = s.theta;
    const double limit = factor * s.theta * (1 + kSlack);
    for (std::size_t k = 0; k < kMaxCandidates; ++k) {
        Point a;
        if (k == 0) {
            a = Point(round_dyadic(I.x(), bits), round_dyadic(I.y(), bits));
        } else {
            double u = frac(s1 + double(k) * kR2a), v = frac(s2 + double(k) * kR2b);
            double r = rho * std::sqrt(u), ang = 2 * std::numbers::pi * v;
            a = Point(round_dyadic(I.dx() + r * std::cos(ang), bits), round_dyadic(I.dy() + r * std::sin(ang), bits));
        }
        ++out.candidates;
        auto e = expansions_at(tri, a, curves, regions, avoid);
        if (!e) continue;
        if (std::all_of(e->begin(), e->end(), [&](double x) { return x <= limit; })) {
            out.center = a;
            out.expansions = std::move(*e);
            return out;
        }
    }
    throw DeformError("no admissible projection center found");
}

TriangleProjection project_in_triangle(const PLCurrent& current, const TriangleGeometry& tri, const Point& center) {
    if (!strictly_inside(tri, center)) throw DeformError("center must lie inside the triangle");
    TriangleProjection out;
    for (const auto& s : current.segments()) {
        if (s.mult == 0 || s.a == s.b) continue;
        if (on_segment(s.a, s.b, center)) throw DeformError("segment passes through the center");
        int o = orient2d(center, s.a, s.b);
        if (o == 0) continue;
        BPos px = exit_point(tri, center, s.a), py = exit_point(tri, center, s.b);
        std::vector<Point> loop{s.a, s.b};
        if (o > 0) {
            auto L = ccw_path(tri, px, py);
            for (std::size_t i = 0; i + 1 < L.size(); ++i) out.image.add(L[i], L[i + 1], s.mult);
            loop.insert(loop.end(), L.rbegin(), L.rend());
        } else {
            auto L = ccw_path(tri, py, px);
            for (std::size_t i = 0; i + 1 < L.size(); ++i) out.image.add(L[i], L[i + 1], -s.mult);
            loop.insert(loop.end(), L.begin(), L.end());
        }
        std::vector<Point> v;
        for (auto& q : loop)
            if (v.empty() || !(v.back() == q)) v.push_back(q);
        while (v.size() > 1 && v.front() == v.back()) v.pop_back();
        if (v.size() >= 3 && polygon_area2(v) != 0) out.filler.add({std::move(v), s.mult}, false);
    }
    return out;
}

DeformResult deform_currents(const std::vector<PLCurrent>& curves, const std::vector<PLRegion>& regions,
                             const Complex2& K, double eps, std::uint64_t seed) {
    return run(curves, regions, K, nullptr, eps, seed);
}

DeformResult push_with_centers(const std::vector<PLCurrent>& curves, const std::vector<PLRegion>& regions,
                               const Complex2& K, const CenterChoice& centers, double eps) {
    return run(curves, regions, K, &centers, eps, 0);
}

Chain edge_chain(const PLCurrent& current, const Complex2& K) {
    Locator loc(K);
    std::vector<std::vector<FacePiece>> faces(K.num_triangles());
    std::vector<std::vector<Interval>> edges(K.num_edges());
    clip_current(K, loc, current.canonical(), 0, faces, edges);
    for (const auto& f : faces)
        if (!f.empty()) throw DeformError("current does not lie on the edges of the complex");
    Chain out(1);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].empty()) continue;
        std::map<Rational, std::int64_t> jumps;
        for (const auto& v : edges[e]) jumps[v.t0] += v.k, jumps[v.t1] -= v.k;
        for (auto& [t, d] : jumps)
            if (d != 0 && t != 0 && t != 1) throw DeformError("multiplicity changes inside an edge");
        if (auto it = jumps.find(Rational(0)); it != jumps.end() && it->second != 0) out.add(e, it->second);
    }
    return out;
}

Chain triangle_chain(const PLRegion& region, const Complex2& K) {
    Chain out(2);
    for (std::size_t t = 0; t < K.num_triangles(); ++t) {
        auto T = tri_of(K, t);
        Point c((T[0].x() + T[1].x() + T[2].x()) / 3, (T[0].y() + T[1].y() + T[2].y()) / 3);
        std::int64_t d = 0;
        for (const auto& p : region.polygons()) {
            double x0 = p.vertices[0].dx(), x1 = x0, y0 = p.vertices[0].dy(), y1 = y0;
            for (const auto& q : p.vertices) {
                x0 = std::min(x0, q.dx()), x1 = std::max(x1, q.dx());
                y0 = std::min(y0, q.dy()), y1 = std::max(y1, q.dy());
            }
            if (c.dx() < x0 - 1e-9 * (1 + std::fabs(x0)) || c.dx() > x1 + 1e-9 * (1 + std::fabs(x1)) ||
                c.dy() < y0 - 1e-9 * (1 + std::fabs(y0)) || c.dy() > y1 + 1e-9 * (1 + std::fabs(y1)))
                continue;
            d += p.mult * winding_number(p.vertices, c);
        }
        if (d) out.add(t, d);
    }
    if (apply_boundary(K, out) != edge_chain(region_boundary(region), K))
        throw DeformError("region boundary does not lie on the edges of the complex");
    return out;
}

Chain push_points(const PointMasses& points, const Complex2& K, const CenterChoice& centers) {
    Locator loc(K);
    Chain out(0);
    auto side = [&](std::size_t e, const Point& p) {
        const Point& E0 = K.vertices()[K.edges()[e][0]];
        const Point& E1 = K.vertices()[K.edges()[e][1]];
        Rational t = project_param(E0, E1, p);
        if (t == centers.edge.at(e)) throw DeformError("point sits on an edge center");
        return t < centers.edge[e] ? K.edges()[e][0] : K.edges()[e][1];
    };
    for (auto [p, mu] : points) {
        if (mu == 0) continue;
        auto w = loc.locate(p);
        if (w.kind == Locator::Kind::vertex) {
            out.add(w.id, mu);
        } else if (w.kind == Locator::Kind::edge) {
            out.add(side(w.id, p), mu);
        } else {
            auto T = tri_of(K, w.id);
            const Point& a = centers.triangle.at(w.id);
            if (p == a) throw DeformError("point sits on a triangle center");
            BPos b = exit_point(T, a, p);
            if (b.u == 0)
                out.add(K.triangles()[w.id][b.slot], mu);
            else
                out.add(side(K.triangle_edges(w.id)[b.slot], b.p), mu);
        }
    }
    return out;
}

}  // namespace flatnorm
