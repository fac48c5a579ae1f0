#include "flatnorm/mesh/pslg.hpp"

#include "flatnorm/complex/io.hpp"
#include "flatnorm/geom/arrangement.hpp"
#include "flatnorm/geom/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace flatnorm {

std::size_t PSLG::add_vertex(const Point& p) {
    vertices.push_back(p);
    return vertices.size() - 1;
}

void PSLG::add_segment(std::size_t a, std::size_t b, std::int64_t mult) { segments.push_back({a, b, mult}); }

void PSLG::validate() const {
    const std::size_t n = segments.size();
    {
        std::set<Point> seen;
        for (const auto& p : vertices)
            if (!seen.insert(p).second) throw GeometryError("duplicate PSLG vertex");
    }
    std::set<std::pair<std::size_t, std::size_t>> keys;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = segments[i];
        if (s.a >= vertices.size() || s.b >= vertices.size()) throw GeometryError("segment " + std::to_string(i) + " has a bad vertex id");
        if (s.a == s.b) throw GeometryError("segment " + std::to_string(i) + " has zero length");
        if (!keys.insert(std::minmax(s.a, s.b)).second) throw GeometryError("duplicate segment " + std::to_string(i));
    }
    auto lo = [&](std::size_t i) { return std::min(vertices[segments[i].a].dx(), vertices[segments[i].b].dx()); };
    auto hi = [&](std::size_t i) { return std::max(vertices[segments[i].a].dx(), vertices[segments[i].b].dx()); };
    auto ylo = [&](std::size_t i) { return std::min(vertices[segments[i].a].dy(), vertices[segments[i].b].dy()); };
    auto yhi = [&](std::size_t i) { return std::max(vertices[segments[i].a].dy(), vertices[segments[i].b].dy()); };
    auto slack = [](double v) { return 1e-9 * (1 + std::fabs(v)); };
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return lo(a) < lo(b); });
    for (std::size_t oi = 0; oi < n; ++oi) {
        std::size_t i = order[oi];
        for (std::size_t oj = oi + 1; oj < n && lo(order[oj]) <= hi(i) + slack(hi(i)); ++oj) {
            std::size_t j = order[oj];
            if (ylo(j) > yhi(i) + slack(yhi(i)) || ylo(i) > yhi(j) + slack(yhi(j))) continue;
            const auto &s = segments[i], &t = segments[j];
            auto rel = segment_relation(vertices[s.a], vertices[s.b], vertices[t.a], vertices[t.b]);
            if (rel == SegmentRelation::disjoint) continue;
            bool shared = s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b;
            if (rel == SegmentRelation::touching && shared) continue;
            throw GeometryError("segments " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
        }
    }
    std::vector<std::size_t> vorder(vertices.size());
    std::iota(vorder.begin(), vorder.end(), 0);
    std::sort(vorder.begin(), vorder.end(), [&](auto a, auto b) { return vertices[a].dx() < vertices[b].dx(); });
    for (std::size_t i = 0; i < n; ++i) {
        auto first = std::lower_bound(vorder.begin(), vorder.end(), lo(i) - slack(lo(i)),
                                      [&](std::size_t k, double v) { return vertices[k].dx() < v; });
        for (auto it = first; it != vorder.end() && vertices[*it].dx() <= hi(i) + slack(hi(i)); ++it)
            if (in_segment_interior(vertices[segments[i].a], vertices[segments[i].b], vertices[*it]))
                throw GeometryError("vertex " + std::to_string(*it) + " lies inside segment " + std::to_string(i));
    }
}

double PSLG::total_length() const {
    double L = 0;
    for (const auto& s : segments) L += distance(vertices[s.a], vertices[s.b]);
    return L;
}

double PSLG::min_input_angle_deg() const {
    std::vector<std::vector<double>> dirs(vertices.size());
    for (const auto& s : segments) {
        const auto &a = vertices[s.a], &b = vertices[s.b];
        dirs[s.a].push_back(std::atan2(b.dy() - a.dy(), b.dx() - a.dx()));
        dirs[s.b].push_back(std::atan2(a.dy() - b.dy(), a.dx() - b.dx()));
    }
    double best = 2 * M_PI;
    for (auto& d : dirs) {
        if (d.size() < 2) continue;
        std::sort(d.begin(), d.end());
        for (std::size_t i = 0; i + 1 < d.size(); ++i) best = std::min(best, d[i + 1] - d[i]);
        best = std::min(best, d.front() + 2 * M_PI - d.back());
    }
    return best * 180 / M_PI;
}

PLCurrent PSLG::skeleton() const {
    PLCurrent c;
    for (const auto& s : segments) c.add(vertices[s.a], vertices[s.b], 1);
    return c;
}

PSLG pslg_from_segments(const std::vector<Segment>& segs, const std::vector<Point>& extra) {
    std::vector<std::pair<Point, Point>> raw;
    for (const auto& s : segs) raw.emplace_back(s.a, s.b);
    auto nod = node_segments(raw, extra);
    PSLG g;
    g.vertices = std::move(nod.vertices);
    for (const auto& ns : nod.segments) {
        std::int64_t m = 0;
        for (auto [src, sign] : ns.sources) m += sign * segs[src].mult;
        g.add_segment(ns.a, ns.b, m);
    }
    return g;
}

std::vector<std::size_t> convex_hull(const std::vector<Point>& pts) {
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return pts[a] < pts[b]; });
    idx.erase(std::unique(idx.begin(), idx.end(), [&](auto a, auto b) { return pts[a] == pts[b]; }), idx.end());
    if (idx.size() < 3) return idx;
    std::vector<std::size_t> h;
    auto chain = [&](auto begin, auto end) {
        std::size_t base = h.size();
        for (auto it = begin; it != end; ++it) {
            while (h.size() >= base + 2 && orient2d(pts[h[h.size() - 2]], pts[h.back()], pts[*it]) < 0) h.pop_back();
            h.push_back(*it);
        }
        h.pop_back();
    };
    chain(idx.begin(), idx.end());
    chain(idx.rbegin(), idx.rend());
    return h;
}

PSLG with_convex_hull(const PSLG& g) {
    if (g.vertices.empty()) throw GeometryError("empty PSLG");
    PSLG out = g;
    bool degenerate = true;
    for (std::size_t i = 2; i < g.vertices.size() && degenerate; ++i)
        if (orient2d(g.vertices[0], g.vertices[1], g.vertices[i]) != 0) degenerate = false;
    if (degenerate) {
        Rational x0 = g.vertices[0].x(), x1 = x0, y0 = g.vertices[0].y(), y1 = y0;
        for (const auto& p : g.vertices) {
            x0 = std::min(x0, p.x());
            x1 = std::max(x1, p.x());
            y0 = std::min(y0, p.y());
            y1 = std::max(y1, p.y());
        }
        Rational m = std::max(Rational(x1 - x0), Rational(y1 - y0)) / 4;
        if (m == 0) m = 1;
        std::size_t base = out.vertices.size();
        out.add_vertex({x0 - m, y0 - m});
        out.add_vertex({x1 + m, y0 - m});
        out.add_vertex({x1 + m, y1 + m});
        out.add_vertex({x0 - m, y1 + m});
        for (std::size_t i = 0; i < 4; ++i) out.add_segment(base + i, base + (i + 1) % 4);
        return out;
    }
    std::set<std::pair<std::size_t, std::size_t>> have;
    for (const auto& s : g.segments) have.insert(std::minmax(s.a, s.b));
    auto hull = convex_hull(g.vertices);
    for (std::size_t i = 0; i < hull.size(); ++i) {
        std::size_t a = hull[i], b = hull[(i + 1) % hull.size()];
        if (!have.count(std::minmax(a, b))) out.add_segment(a, b);
    }
    return out;
}

namespace {

std::string next_data_line(std::istream& is, std::size_t& lineno) {
    std::string line;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
    }
    return {};
}

[[noreturn]] void fail(std::size_t lineno, const std::string& msg) {
    throw FormatError("line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

void write_pslg(std::ostream& os, const PSLG& g) {
    os << g.vertices.size() << ' ' << g.segments.size() << '\n';
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        os << "v " << i << ' ' << to_string(g.vertices[i].x()) << ' ' << to_string(g.vertices[i].y()) << '\n';
    for (std::size_t i = 0; i < g.segments.size(); ++i) {
        const auto& s = g.segments[i];
        os << "s " << i << ' ' << s.a << ' ' << s.b;
        if (s.mult != 0) os << ' ' << s.mult;
        os << '\n';
    }
}

PSLG read_pslg(std::istream& is) {
    std::size_t lineno = 0;
    std::istringstream head(next_data_line(is, lineno));
    std::size_t nv, ns;
    if (!(head >> nv >> ns)) fail(lineno, "expected 'V S' header");
    PSLG g;
    g.vertices.resize(nv);
    g.segments.resize(ns);
    std::vector<char> vseen(nv, 0), sseen(ns, 0);
    for (std::size_t k = 0; k < nv + ns; ++k) {
        std::string line = next_data_line(is, lineno);
        if (line.empty()) fail(lineno, "unexpected end of file");
        std::istringstream ls(line);
        std::string tag;
        std::size_t id;
        ls >> tag >> id;
        if (!ls) fail(lineno, "malformed record");
        if (tag == "v") {
            std::string x, y;
            if (!(ls >> x >> y) || id >= nv || vseen[id]) fail(lineno, "bad vertex record");
            try {
                g.vertices[id] = Point(parse_rational(x), parse_rational(y));
            } catch (const std::exception& e) {
                fail(lineno, e.what());
            }
            vseen[id] = 1;
        } else if (tag == "s") {
            std::size_t a, b;
            if (!(ls >> a >> b) || id >= ns || sseen[id] || a >= nv || b >= nv) fail(lineno, "bad segment record");
            std::int64_t m = 0;
            if (!(ls >> m)) m = 0;
            g.segments[id] = {a, b, m};
            sseen[id] = 1;
        } else {
            fail(lineno, "unknown record '" + tag + "'");
        }
    }
    g.validate();
    return g;
}

void save_pslg(const std::string& path, const PSLG& g) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    write_pslg(os, g);
}

PSLG load_pslg(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    return read_pslg(is);
}

AngleSet forbidden_angles(const PSLG& g) {
    std::vector<double> raw;
    for (const auto& s : g.segments) {
        const auto &a = g.vertices[s.a], &b = g.vertices[s.b];
        double phi = std::atan2(b.dy() - a.dy(), b.dx() - a.dx());
        for (double v : {phi, phi + M_PI / 2}) {
            v = std::fmod(v, M_PI);
            if (v < 0) v += M_PI;
            if (v >= M_PI - 1e-12) v = 0;
            raw.push_back(v);
        }
    }
    std::sort(raw.begin(), raw.end());
    AngleSet out;
    for (double v : raw)
        if (out.E.empty() || v - out.E.back() > 1e-12) out.E.push_back(v);
    if (out.E.size() > 1 && out.E.back() > M_PI - 1e-12) out.E.pop_back();
    out.eta = out.E.size();
    out.guard = out.eta ? M_PI / (2.0 * static_cast<double>(out.eta)) : 0;
    return out;
}

double choose_rotation(const AngleSet& angles) {
    const double q = M_PI / 2;
    std::vector<double> r;
    for (double v : angles.E) r.push_back(std::fmod(v, q));
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end(), [](double a, double b) { return b - a < 1e-12; }), r.end());
    if (r.empty()) return 0;
    double best = -1, mid = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        double next = i + 1 < r.size() ? r[i + 1] : r[0] + q;
        if (next - r[i] > best + 1e-15) {
            best = next - r[i];
            mid = r[i] + best / 2;
        }
    }
    return std::fmod(mid, q);
}

double crossing_angle(const AngleSet& angles, double rotation) {
    const double q = M_PI / 2;
    double best = q;
    for (double v : angles.E) {
        double d = std::fmod(std::fabs(v - rotation), q);
        best = std::min({best, d, q - d});
    }
    return best;
}

}  // namespace flatnorm
