#include "flatnorm/mesh/cdt.hpp"

#include "flatnorm/geom/predicates.hpp"

#include <algorithm>
#include <unordered_map>

namespace flatnorm {

Triangulation::Triangulation(const Point& lo, const Point& hi) {
    Rational cx = (lo.x() + hi.x()) / 2, cy = (lo.y() + hi.y()) / 2;
    Rational d = std::max(Rational(hi.x() - lo.x()), Rational(hi.y() - lo.y()));
    if (d == 0) d = 1;
    d *= 64;
    pts_ = {Point(cx - 2 * d, cy - d), Point(cx + 2 * d, cy - d), Point(cx, cy + 2 * d)};
    vtri_ = {0, 0, 0};
    add_tri(0, 1, 2);
}

Triangulation::Id Triangulation::add_tri(Id a, Id b, Id c) {
    Tri t;
    t.v = {a, b, c};
    tris_.push_back(t);
    ++alive_;
    return static_cast<Id>(tris_.size() - 1);
}

Triangulation::Location Triangulation::locate(const Point& p, Id start) const {
    Location L;
    Id t = start;
    for (std::size_t steps = 0;; ++steps) {
        if (steps > 8 * tris_.size() + 64) throw GeometryError("point location did not terminate");
        const Tri& T = tris_[t];
        walk_state_ ^= walk_state_ << 13;
        walk_state_ ^= walk_state_ >> 7;
        walk_state_ ^= walk_state_ << 17;
        int first = static_cast<int>(walk_state_ % 3);
        int zeros = 0, zslot[3];
        bool moved = false;
        for (int k = 0; k < 3; ++k) {
            int i = (first + k) % 3;
            int o = orient2d(pts_[T.v[(i + 1) % 3]], pts_[T.v[(i + 2) % 3]], p);
            if (o < 0) {
                if (T.fixed[i] && L.crossed_tri == none) {
                    L.crossed_tri = t;
                    L.crossed_slot = i;
                }
                if (T.n[i] == none) {
                    L.where = Where::outside;
                    L.tri = t;
                    L.slot = i;
                    return L;
                }
                t = T.n[i];
                moved = true;
                break;
            }
            if (o == 0) zslot[zeros++] = i;
        }
        if (moved) continue;
        L.tri = t;
        if (zeros == 0) {
            L.where = Where::inside;
        } else if (zeros == 1) {
            L.where = Where::on_edge;
            L.slot = zslot[0];
        } else {
            L.where = Where::on_vertex;
            L.slot = 3 - zslot[0] - zslot[1];
        }
        return L;
    }
}

std::vector<Triangulation::Id> Triangulation::cavity(const Point& p, const Location& loc) const {
    std::vector<Id> out{loc.tri};
    if (loc.where == Where::on_edge) {
        Id nb = tris_[loc.tri].n[loc.slot];
        if (nb != none) out.push_back(nb);
    }
    for (std::size_t k = 0; k < out.size(); ++k) {
        const Tri& T = tris_[out[k]];
        for (int i = 0; i < 3; ++i) {
            Id nb = T.n[i];
            if (nb == none || T.fixed[i]) continue;
            if (std::find(out.begin(), out.end(), nb) != out.end()) continue;
            const Tri& U = tris_[nb];
            if (incircle(pts_[U.v[0]], pts_[U.v[1]], pts_[U.v[2]], p) > 0) out.push_back(nb);
        }
    }
    return out;
}

Triangulation::Id Triangulation::insert(const Point& p, const Location& loc, std::vector<Id>* created) {
    if (loc.where == Where::on_vertex) return tris_[loc.tri].v[loc.slot];
    if (loc.where == Where::outside) throw GeometryError("point outside the triangulation");
    auto cav = cavity(p, loc);
    Id sa = none, sb = none;
    if (loc.where == Where::on_edge && tris_[loc.tri].fixed[loc.slot]) {
        sa = edge_a(loc.tri, loc.slot);
        sb = edge_b(loc.tri, loc.slot);
    }
    std::sort(cav.begin(), cav.end());
    auto in_cav = [&](Id t) { return std::binary_search(cav.begin(), cav.end(), t); };

    const Id v = static_cast<Id>(pts_.size());
    pts_.push_back(p);
    vtri_.push_back(none);
    std::unordered_map<Id, Id> by_start, by_end;
    std::vector<Id> fresh;
    for (Id t : cav) {
        for (int i = 0; i < 3; ++i) {
            Id nb = tris_[t].n[i];
            if (nb != none && in_cav(nb)) continue;
            // a split boundary edge is replaced by its two halves
            if (nb == none && loc.where == Where::on_edge && t == loc.tri && i == loc.slot) continue;
            Id a = edge_a(t, i), b = edge_b(t, i);
            if (orient2d(pts_[a], pts_[b], p) <= 0) throw GeometryError("insertion cavity is not star-shaped");
            bool fx = tris_[t].fixed[i];
            Id nt = add_tri(a, b, v);
            Tri& N = tris_[nt];
            N.n[2] = nb;
            N.fixed[2] = fx;
            if (nb != none)
                for (int j = 0; j < 3; ++j)
                    if (tris_[nb].n[j] == t) tris_[nb].n[j] = nt;
            by_start[a] = nt;
            by_end[b] = nt;
            fresh.push_back(nt);
        }
    }
    for (Id nt : fresh) {
        Tri& N = tris_[nt];
        Id a = N.v[0], b = N.v[1];
        auto s0 = by_start.find(b), s1 = by_end.find(a);
        N.n[0] = s0 == by_start.end() ? none : s0->second;
        N.n[1] = s1 == by_end.end() ? none : s1->second;
        if (sa != none) {
            N.fixed[1] = (a == sa || a == sb);
            N.fixed[0] = (b == sa || b == sb);
        }
        vtri_[a] = nt;
        vtri_[b] = nt;
    }
    vtri_[v] = fresh.front();
    for (Id t : cav) tris_[t].alive = false;
    alive_ -= cav.size();
    if (created) created->insert(created->end(), fresh.begin(), fresh.end());
    return v;
}

std::optional<std::pair<Triangulation::Id, int>> Triangulation::find_edge(Id a, Id b) const {
    Id t0 = vtri_[a];
    if (t0 == none) return std::nullopt;
    auto slot_of = [&](Id t) {
        for (int i = 0; i < 3; ++i)
            if (tris_[t].v[i] == a) return i;
        throw GeometryError("vertex-triangle map is stale");
    };
    for (int dir = 0; dir < 2; ++dir) {
        Id t = t0;
        do {
            int i = slot_of(t);
            if (tris_[t].v[(i + 1) % 3] == b) return std::make_pair(t, (i + 2) % 3);
            if (tris_[t].v[(i + 2) % 3] == b) return std::make_pair(t, (i + 1) % 3);
            t = tris_[t].n[dir == 0 ? (i + 1) % 3 : (i + 2) % 3];
        } while (t != none && t != t0);
        if (t == t0) break;
    }
    return std::nullopt;
}

void Triangulation::set_fixed(Id a, Id b, bool fixed) {
    auto e = find_edge(a, b);
    if (!e) throw GeometryError("edge not in triangulation");
    auto [t, i] = *e;
    tris_[t].fixed[i] = fixed;
    Id nb = tris_[t].n[i];
    if (nb != none)
        for (int j = 0; j < 3; ++j)
            if (tris_[nb].n[j] == t) tris_[nb].fixed[j] = fixed;
}

void Triangulation::remove_exterior() {
    std::vector<char> dead(tris_.size(), 0);
    std::vector<Id> stack;
    for (Id t = 0; t < tris_.size(); ++t) {
        const Tri& T = tris_[t];
        if (T.alive && (T.v[0] < 3 || T.v[1] < 3 || T.v[2] < 3)) {
            dead[t] = 1;
            stack.push_back(t);
        }
    }
    while (!stack.empty()) {
        Id t = stack.back();
        stack.pop_back();
        for (int i = 0; i < 3; ++i) {
            Id nb = tris_[t].n[i];
            if (nb == none || tris_[t].fixed[i] || dead[nb]) continue;
            dead[nb] = 1;
            stack.push_back(nb);
        }
    }
    for (Id t = 0; t < tris_.size(); ++t) {
        if (!dead[t]) continue;
        tris_[t].alive = false;
        --alive_;
        for (int i = 0; i < 3; ++i) {
            Id nb = tris_[t].n[i];
            if (nb == none || dead[nb]) continue;
            for (int j = 0; j < 3; ++j)
                if (tris_[nb].n[j] == t) tris_[nb].n[j] = none;
        }
    }
    std::fill(vtri_.begin(), vtri_.end(), none);
    for (Id t = 0; t < tris_.size(); ++t)
        if (tris_[t].alive)
            for (Id v : tris_[t].v) vtri_[v] = t;
}

}  // namespace flatnorm
