#include "flatnorm/mesh/refine.hpp"

#include "flatnorm/complex/regularity.hpp"
#include "flatnorm/geom/predicates.hpp"
#include "flatnorm/mesh/cdt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <queue>
#include <tuple>
#include <unordered_map>

namespace flatnorm {

double terminator_bound_deg(double input_angle_deg) {
    double a = std::min(input_angle_deg, 180.0) * M_PI / 180;
    return std::asin(std::sqrt(3.0) / 2 * std::sin(a / 2)) * 180 / M_PI;
}

namespace {

using Id = Triangulation::Id;
constexpr Id none = Triangulation::none;

std::uint64_t key(Id a, Id b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct SubSeg {
    Id a, b;
    std::uint32_t seg;
    Rational ta, tb;  // parameters of a and b on the parent segment
};

struct Bad {
    int cls;    // 0 skinny, 1 too large
    double q;   // smallest angle, or minus the longest edge
    Id t;
    bool operator>(const Bad& o) const {
        if (cls != o.cls) return cls > o.cls;
        if (q != o.q) return q > o.q;
        return t > o.t;
    }
};

// Parameter on [tv, tw] at fraction f from tv, rounded to a dyadic grid fine
// relative to |tw - tv|.
Rational param_at(const Rational& tv, const Rational& tw, double f) {
    Rational span = tw - tv;
    int e = 0;
    std::frexp(std::fabs(span.get_d()), &e);
    Rational t = round_dyadic(Rational(tv + span * from_double(f)), 40 - e);
    if ((t - tv) * (tw - t) <= 0) t = (tv + tw) / 2;
    return t;
}

// The subsegment at one end of a segment: (end vertex, other vertex, its parameter).
std::tuple<Id, Id, Rational> end_piece(const std::map<Rational, Id>& pts, int end) {
    if (end == 0) return {pts.begin()->second, std::next(pts.begin())->second, std::next(pts.begin())->first};
    return {pts.rbegin()->second, std::next(pts.rbegin())->second, std::next(pts.rbegin())->first};
}

// Power of two in [L/3, 2L/3].
double shell_radius(double L) { return std::ldexp(1.0, static_cast<int>(std::floor(std::log2(2 * L / 3)))); }

class Refiner {
public:
    Refiner(PSLG H, const RefineOptions& opt) : H_(std::move(H)), opt_(opt), T_(lo_hi().first, lo_hi().second) {
        if (opt_.tube_radius > 0 && opt_.tube_skeleton.empty()) opt_.tube_skeleton = H_.skeleton();
        vseg_.assign(3, -1);
        vparam_.assign(3, Rational(0));
    }

    MeshResult run();

private:
    std::pair<Point, Point> lo_hi() const {
        Rational x0 = H_.vertices[0].x(), x1 = x0, y0 = H_.vertices[0].y(), y1 = y0;
        for (const auto& p : H_.vertices) {
            x0 = std::min(x0, p.x());
            x1 = std::max(x1, p.x());
            y0 = std::min(y0, p.y());
            y1 = std::max(y1, p.y());
        }
        return {Point(x0, y0), Point(x1, y1)};
    }

    const Point& P(Id v) const { return T_.point(v); }
    bool is_input(Id v) const { return v >= 3 && vseg_[v] < 0 && v < 3 + H_.vertices.size(); }

    void build_clusters();
    void insert_inputs();
    void recover_segments();
    void apex_refinement();
    void refine_loop();
    MeshResult extract();

    Id add_vertex(const Point& p, const Triangulation::Location& loc, int seg, const Rational& t);
    void after_insert();
    void consider(Id t);
    bool encroached(const SubSeg& s) const;
    // Splits subsegment k. dmin > 0 marks a split requested by a skinny
    // triangle with shortest edge dmin, which a small-angle cluster may refuse.
    bool split_subseg(std::uint64_t k, double dmin);
    void split_at(std::uint64_t k, const Rational& t);
    void handle_bad(const Bad& b);
    bool keep_at_apex(Id p, Id q) const;
    double required_angle(Id t) const;

    PSLG H_;
    RefineOptions opt_;
    Triangulation T_;
    std::vector<Id> vid_;  // PSLG vertex -> mesh vertex
    std::vector<int> vseg_;
    std::vector<Rational> vparam_;
    std::unordered_map<std::uint64_t, SubSeg> subs_;
    std::vector<std::map<Rational, Id>> seg_pts_;
    std::vector<std::array<int, 2>> cluster_;  // per segment end
    std::vector<char> cluster_small_;
    std::vector<std::vector<std::pair<std::uint32_t, int>>> cluster_members_;
    std::deque<std::uint64_t> encroached_;
    std::priority_queue<Bad, std::vector<Bad>, std::greater<>> bad_;
    std::vector<Id> created_;
    RefineStats stats_;
};

void Refiner::build_clusters() {
    const std::size_t n = H_.vertices.size();
    std::vector<std::vector<std::pair<double, std::pair<std::uint32_t, int>>>> inc(n);
    for (std::uint32_t s = 0; s < H_.segments.size(); ++s) {
        const auto& g = H_.segments[s];
        const Point &a = H_.vertices[g.a], &b = H_.vertices[g.b];
        inc[g.a].push_back({std::atan2(b.dy() - a.dy(), b.dx() - a.dx()), {s, 0}});
        inc[g.b].push_back({std::atan2(a.dy() - b.dy(), a.dx() - b.dx()), {s, 1}});
    }
    cluster_.assign(H_.segments.size(), {-1, -1});
    const double small = M_PI / 3 - 1e-12;
    for (auto& list : inc) {
        if (list.size() < 2) continue;
        std::sort(list.begin(), list.end());
        const std::size_t m = list.size();
        std::vector<char> joined(m);  // gap between i and i+1 is small
        bool all = true;
        for (std::size_t i = 0; i < m; ++i) {
            double gap = i + 1 < m ? list[i + 1].first - list[i].first : list[0].first + 2 * M_PI - list[i].first;
            joined[i] = gap < small;
            all = all && joined[i];
        }
        // start after a large gap so runs do not wrap
        std::size_t start = 0;
        if (!all)
            while (joined[(start + m - 1) % m]) ++start;
        int id = -1;
        for (std::size_t k = 0; k < m; ++k) {
            std::size_t i = (start + k) % m;
            if (k == 0 || (!all && !joined[(i + m - 1) % m])) {
                id = static_cast<int>(cluster_small_.size());
                cluster_small_.push_back(0);
                cluster_members_.emplace_back();
            }
            auto [s, e] = list[i].second;
            cluster_[s][e] = id;
            cluster_members_[id].push_back({s, e});
            if (cluster_members_[id].size() > 1) cluster_small_[id] = 1;
        }
    }
}

Id Refiner::add_vertex(const Point& p, const Triangulation::Location& loc, int seg, const Rational& t) {
    created_.clear();
    Id v = T_.insert(p, loc, &created_);
    if (v + 1 != T_.num_points()) throw MeshError("inserted point coincides with a vertex");
    vseg_.push_back(seg);
    vparam_.push_back(t);
    if (T_.alive_count() > opt_.size_cap)
        throw MeshError("size cap of " + std::to_string(opt_.size_cap) + " triangles exceeded (" +
                        std::to_string(stats_.circumcenters) + " circumcenters, " +
                        std::to_string(stats_.segment_splits) + " segment splits, " +
                        std::to_string(stats_.kept_skinny) + " skinny triangles kept)");
    return v;
}

void Refiner::insert_inputs() {
    const std::size_t n = H_.vertices.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return H_.vertices[a] < H_.vertices[b]; });
    vid_.assign(n, none);
    for (auto i : order) {
        auto loc = T_.locate(H_.vertices[i], T_.last_created());
        if (loc.where == Triangulation::Where::on_vertex) throw MeshError("duplicate PSLG vertex");
        vid_[i] = add_vertex(H_.vertices[i], loc, -1, Rational(0));
    }
}

void Refiner::recover_segments() {
    seg_pts_.resize(H_.segments.size());
    std::deque<SubSeg> work;
    for (std::uint32_t s = 0; s < H_.segments.size(); ++s) {
        Id a = vid_[H_.segments[s].a], b = vid_[H_.segments[s].b];
        seg_pts_[s][Rational(0)] = a;
        seg_pts_[s][Rational(1)] = b;
        work.push_back({a, b, s, Rational(0), Rational(1)});
    }
    while (!work.empty()) {
        SubSeg s = work.front();
        work.pop_front();
        if (T_.find_edge(s.a, s.b)) {
            T_.set_fixed(s.a, s.b, true);
            subs_[key(s.a, s.b)] = s;
            continue;
        }
        bool a_in = is_input(s.a), b_in = is_input(s.b);
        Rational t;
        if (a_in != b_in) {
            double L = distance(P(s.a), P(s.b));
            double f = shell_radius(L) / L;
            t = a_in ? param_at(s.ta, s.tb, f) : param_at(s.tb, s.ta, f);
        } else {
            t = (s.ta + s.tb) / 2;
        }
        const auto& g = H_.segments[s.seg];
        Point p = lerp(H_.vertices[g.a], H_.vertices[g.b], t);
        auto loc = T_.locate(p, T_.some_triangle(s.a));
        if (loc.where == Triangulation::Where::on_vertex) throw MeshError("a vertex lies on a segment");
        Id v = add_vertex(p, loc, static_cast<int>(s.seg), t);
        ++stats_.segment_splits;
        seg_pts_[s.seg][t] = v;
        work.push_back({s.a, v, s.seg, s.ta, t});
        work.push_back({v, s.b, s.seg, t, s.tb});
    }
}

double Refiner::required_angle(Id t) const {
    if (opt_.tube_radius <= 0) return opt_.target_angle_deg;
    const auto& v = T_.tri(t).v;
    if (triangle_in_tube(P(v[0]), P(v[1]), P(v[2]), opt_.tube_skeleton, opt_.tube_radius)) return opt_.target_angle_deg;
    return std::max(opt_.target_angle_deg, opt_.outer_angle_deg);
}

void Refiner::consider(Id t) {
    const auto& T = T_.tri(t);
    if (!T.alive) return;
    const Point &a = P(T.v[0]), &b = P(T.v[1]), &c = P(T.v[2]);
    double m = min_angle_deg(a, b, c);
    double lo = opt_.target_angle_deg, hi = opt_.tube_radius > 0 ? std::max(lo, opt_.outer_angle_deg) : lo;
    bool skinny;
    if (m < lo - 1e-7) {
        skinny = true;
    } else if (m > hi + 1e-7) {
        skinny = false;
    } else {
        double req = required_angle(t);
        skinny = std::fabs(m - req) > 1e-7 ? m < req : triangle_has_angle_below(a, b, c, req);
    }
    if (skinny) {
        bad_.push({0, m, t});
        return;
    }
    if (opt_.max_edge > 0) {
        double longest = std::max({distance(a, b), distance(b, c), distance(a, c)});
        if (longest > opt_.max_edge) bad_.push({1, -longest, t});
    }
}

bool Refiner::encroached(const SubSeg& s) const {
    auto e = T_.find_edge(s.a, s.b);
    if (!e) return false;
    auto [t, i] = *e;
    if (diametral_sign(P(s.a), P(s.b), P(T_.tri(t).v[i])) < 0) return true;
    Id nb = T_.tri(t).n[i];
    if (nb == none) return false;
    for (Id w : T_.tri(nb).v)
        if (w != s.a && w != s.b && diametral_sign(P(s.a), P(s.b), P(w)) < 0) return true;
    return false;
}

void Refiner::after_insert() {
    auto fresh = created_;
    for (Id t : fresh) {
        const auto& T = T_.tri(t);
        for (int i = 0; i < 3; ++i) {
            if (!T.fixed[i]) continue;
            Id a = T_.edge_a(t, i), b = T_.edge_b(t, i);
            if (diametral_sign(P(a), P(b), P(T.v[i])) < 0) encroached_.push_back(key(a, b));
        }
        consider(t);
    }
}

void Refiner::split_at(std::uint64_t k, const Rational& t) {
    SubSeg s = subs_.at(k);
    auto e = T_.find_edge(s.a, s.b);
    if (!e) throw MeshError("subsegment missing from the triangulation");
    const auto& g = H_.segments[s.seg];
    Point p = lerp(H_.vertices[g.a], H_.vertices[g.b], t);
    Triangulation::Location loc;
    loc.where = Triangulation::Where::on_edge;
    loc.tri = e->first;
    loc.slot = e->second;
    Id v = add_vertex(p, loc, static_cast<int>(s.seg), t);
    ++stats_.segment_splits;
    subs_.erase(k);
    subs_[key(s.a, v)] = {s.a, v, s.seg, s.ta, t};
    subs_[key(v, s.b)] = {v, s.b, s.seg, t, s.tb};
    seg_pts_[s.seg][t] = v;
    after_insert();
}

bool Refiner::split_subseg(std::uint64_t k, double dmin) {
    auto it = subs_.find(k);
    if (it == subs_.end()) return false;
    SubSeg s = it->second;
    bool a_in = is_input(s.a), b_in = is_input(s.b);
    if (a_in == b_in) {
        split_at(k, (s.ta + s.tb) / 2);
        return true;
    }
    Id apex = a_in ? s.a : s.b, far = a_in ? s.b : s.a;
    const Rational &tv = a_in ? s.ta : s.tb, &tw = a_in ? s.tb : s.ta;
    double L = distance(P(apex), P(far));
    double r = shell_radius(L);
    int end = tv == 0 ? 0 : 1;
    int cl = cluster_[s.seg][end];
    bool small = cl >= 0 && cluster_small_[cl];
    if (small && dmin > 0 && std::min(r, L - r) < dmin) {
        ++stats_.rejected_splits;
        return false;
    }
    split_at(k, param_at(tv, tw, r / L));
    if (!small) return true;
    for (auto [s2, e2] : cluster_members_[cl]) {
        if (s2 == s.seg) continue;
        const auto& pts = seg_pts_[s2];
        auto [v, w, tw2] = end_piece(pts, e2);
        double L2 = distance(P(v), P(w));
        if (L2 <= 1.5 * r) continue;
        Rational t2 = param_at(e2 == 0 ? Rational(0) : Rational(1), tw2, r / L2);
        split_at(key(v, w), t2);
        ++stats_.cluster_splits;
    }
    return true;
}

void Refiner::apex_refinement() {
    if (opt_.apex_radius <= 0) return;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t cl = 0; cl < cluster_members_.size(); ++cl) {
            if (!cluster_small_[cl]) continue;
            for (auto [s, e] : cluster_members_[cl]) {
                auto [v, w, tw] = end_piece(seg_pts_[s], e);
                if (distance(P(v), P(w)) > opt_.apex_radius) {
                    split_subseg(key(v, w), 0);
                    changed = true;
                }
            }
        }
    }
}

bool Refiner::keep_at_apex(Id p, Id q) const {
    if (p < 3 || q < 3 || vseg_[p] < 0 || vseg_[q] < 0 || vseg_[p] == vseg_[q]) return false;
    auto s1 = static_cast<std::uint32_t>(vseg_[p]), s2 = static_cast<std::uint32_t>(vseg_[q]);
    const auto &g1 = H_.segments[s1], &g2 = H_.segments[s2];
    for (int e1 = 0; e1 < 2; ++e1)
        for (int e2 = 0; e2 < 2; ++e2) {
            std::size_t a1 = e1 == 0 ? g1.a : g1.b, a2 = e2 == 0 ? g2.a : g2.b;
            if (a1 != a2) continue;
            int cl = cluster_[s1][e1];
            if (cl < 0 || cl != cluster_[s2][e2] || !cluster_small_[cl]) continue;
            const Point& apex = H_.vertices[a1];
            double dp = distance(apex, P(p)), dq = distance(apex, P(q));
            if (dp < 1.001 * dq && dq < 1.001 * dp) return true;
        }
    return false;
}

void Refiner::handle_bad(const Bad& b) {
    const auto& T = T_.tri(b.t);
    if (!T.alive) return;
    Id v0 = T.v[0], v1 = T.v[1], v2 = T.v[2];
    const Point &a = P(v0), &bb = P(v1), &c = P(v2);
    double l[3] = {distance(bb, c), distance(c, a), distance(a, bb)};
    int sh = static_cast<int>(std::min_element(l, l + 3) - l);
    double dmin = l[sh];
    // outside the tube the outer angle is required without exception
    if (b.cls == 0 && required_angle(b.t) <= opt_.target_angle_deg && keep_at_apex(T.v[(sh + 1) % 3], T.v[(sh + 2) % 3])) {
        ++stats_.kept_skinny;
        return;
    }
    double term = b.cls == 0 ? dmin : 0;

    // circumcenter, rounded to a dyadic grid far below the local edge length
    double bx = bb.dx() - a.dx(), by = bb.dy() - a.dy(), cx = c.dx() - a.dx(), cy = c.dy() - a.dy();
    double d = 2 * (bx * cy - by * cx);
    double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    double ux = a.dx() + (cy * b2 - by * c2) / d, uy = a.dy() + (bx * c2 - cx * b2) / d;
    int e = 0;
    std::frexp(dmin, &e);
    int bits = std::max(24, 30 - e);
    Point cc(round_dyadic(ux, bits), round_dyadic(uy, bits));

    auto loc = T_.locate(cc, b.t);
    auto reject = [&] { ++stats_.kept_skinny; };
    // a split may leave the triangle standing; it is then judged again
    auto retry = [&] {
        if (T_.tri(b.t).alive) consider(b.t);
    };
    if (loc.crossed_tri != none) {
        std::uint64_t k = key(T_.edge_a(loc.crossed_tri, loc.crossed_slot), T_.edge_b(loc.crossed_tri, loc.crossed_slot));
        if (!split_subseg(k, term)) reject();
        else retry();
        return;
    }
    if (loc.where == Triangulation::Where::on_vertex || loc.where == Triangulation::Where::outside) {
        reject();
        return;
    }
    if (loc.where == Triangulation::Where::on_edge && T_.is_fixed(loc.tri, loc.slot)) {
        if (!split_subseg(key(T_.edge_a(loc.tri, loc.slot), T_.edge_b(loc.tri, loc.slot)), term)) reject();
        else retry();
        return;
    }
    auto cav = T_.cavity(cc, loc);
    std::sort(cav.begin(), cav.end());
    std::vector<std::uint64_t> enc;
    for (Id t : cav)
        for (int i = 0; i < 3; ++i) {
            if (!T_.tri(t).fixed[i]) continue;
            Id nb = T_.tri(t).n[i];
            if (nb != none && std::binary_search(cav.begin(), cav.end(), nb)) continue;
            Id ea = T_.edge_a(t, i), eb = T_.edge_b(t, i);
            if (diametral_sign(P(ea), P(eb), cc) < 0) enc.push_back(key(ea, eb));
        }
    if (!enc.empty()) {
        bool any = false;
        for (auto k : enc) any = split_subseg(k, term) || any;
        if (!any) reject();
        else retry();
        return;
    }
    add_vertex(cc, loc, -1, Rational(0));
    ++stats_.circumcenters;
    after_insert();
}

void Refiner::refine_loop() {
    for (const auto& [k, s] : subs_)
        if (encroached(s)) encroached_.push_back(k);
    std::sort(encroached_.begin(), encroached_.end());
    for (Id t = 0; t < T_.num_tris(); ++t)
        if (T_.tri(t).alive) consider(t);
    for (;;) {
        if (!encroached_.empty()) {
            auto k = encroached_.front();
            encroached_.pop_front();
            auto it = subs_.find(k);
            if (it == subs_.end() || !encroached(it->second)) continue;
            split_subseg(k, 0);
            continue;
        }
        if (bad_.empty()) break;
        Bad b = bad_.top();
        bad_.pop();
        handle_bad(b);
    }
}

MeshResult Refiner::extract() {
    MeshResult out;
    std::vector<long> remap(T_.num_points(), -1);
    std::vector<char> used(T_.num_points(), 0);
    for (Id t = 0; t < T_.num_tris(); ++t)
        if (T_.tri(t).alive)
            for (Id v : T_.tri(t).v) used[v] = 1;
    std::vector<Point> verts;
    for (Id v = 0; v < T_.num_points(); ++v)
        if (used[v]) {
            remap[v] = static_cast<long>(verts.size());
            verts.push_back(P(v));
        }
    std::vector<Tri> tris;
    for (Id t = 0; t < T_.num_tris(); ++t) {
        if (!T_.tri(t).alive) continue;
        const auto& v = T_.tri(t).v;
        tris.push_back({static_cast<std::size_t>(remap[v[0]]), static_cast<std::size_t>(remap[v[1]]),
                        static_cast<std::size_t>(remap[v[2]])});
    }
    out.complex = build_complex(std::move(verts), tris, opt_.validate_output);
    const auto& K = out.complex;
    out.segment_edges.resize(H_.segments.size());
    for (std::size_t s = 0; s < H_.segments.size(); ++s) {
        const auto& pts = seg_pts_[s];
        for (auto it = pts.begin(); std::next(it) != pts.end(); ++it) {
            auto u = static_cast<std::size_t>(remap[it->second]), w = static_cast<std::size_t>(remap[std::next(it)->second]);
            auto e = K.find_edge(u, w);
            if (!e) throw MeshError("segment piece missing from the mesh");
            out.segment_edges[s].push_back({*e, K.edges()[*e][0] == u ? 1 : -1});
        }
    }
    stats_.min_angle_deg = 60;
    for (std::size_t t = 0; t < K.num_triangles(); ++t) {
        const auto& v = K.triangles()[t];
        stats_.min_angle_deg = std::min(stats_.min_angle_deg, min_angle_deg(K.vertices()[v[0]], K.vertices()[v[1]], K.vertices()[v[2]]));
    }
    out.pslg = H_;
    return out;
}

MeshResult Refiner::run() {
    auto t0 = std::chrono::steady_clock::now();
    stats_.input_min_angle_deg = H_.min_input_angle_deg();
    stats_.guarantee_deg = std::min(opt_.target_angle_deg, terminator_bound_deg(stats_.input_min_angle_deg));
    build_clusters();
    insert_inputs();
    recover_segments();
    T_.remove_exterior();
    apex_refinement();
    refine_loop();
    auto out = extract();
    stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.stats = stats_;
    return out;
}

}  // namespace

MeshResult refine(const PSLG& pslg, const RefineOptions& options) {
    if (!(options.target_angle_deg > 0) || options.target_angle_deg > 34)
        throw std::invalid_argument("target angle must lie in (0, 34] degrees");
    pslg.validate();
    Refiner r(with_convex_hull(pslg), options);
    return r.run();
}

}  // namespace flatnorm
