#pragma once

#include "flatnorm/geom/point.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace flatnorm {

// Mutable constrained Delaunay triangulation with Bowyer-Watson insertion.
// Vertices 0..2 span an enclosing triangle until remove_exterior() is called.
// Edge slot i of a triangle is the edge opposite v[i].
class Triangulation {
public:
    using Id = std::uint32_t;
    static constexpr Id none = 0xffffffffu;

    struct Tri {
        std::array<Id, 3> v;
        std::array<Id, 3> n{none, none, none};
        std::array<bool, 3> fixed{false, false, false};
        bool alive = true;
    };

    enum class Where { inside, on_edge, on_vertex, outside };
    struct Location {
        Where where = Where::inside;
        Id tri = none;
        int slot = -1;  // edge for on_edge/outside, vertex slot for on_vertex
        // first constrained edge crossed by the walk
        Id crossed_tri = none;
        int crossed_slot = -1;
    };

    // Enclosing triangle around the box [lo, hi].
    Triangulation(const Point& lo, const Point& hi);

    const Point& point(Id v) const { return pts_[v]; }
    std::size_t num_points() const { return pts_.size(); }
    const Tri& tri(Id t) const { return tris_[t]; }
    std::size_t num_tris() const { return tris_.size(); }
    std::size_t alive_count() const { return alive_; }
    Id some_triangle(Id v) const { return vtri_[v]; }
    Id last_created() const { return tris_.empty() ? none : static_cast<Id>(tris_.size() - 1); }

    Location locate(const Point& p, Id start) const;
    // Triangles removed when inserting p at loc (the Bowyer-Watson cavity).
    std::vector<Id> cavity(const Point& p, const Location& loc) const;
    // Inserts p; when p lies on a constrained edge that edge is split and both
    // halves stay constrained. New triangles are appended to *created.
    Id insert(const Point& p, const Location& loc, std::vector<Id>* created = nullptr);

    // (triangle, slot) holding edge ab, any orientation.
    std::optional<std::pair<Id, int>> find_edge(Id a, Id b) const;
    void set_fixed(Id a, Id b, bool fixed);
    bool is_fixed(Id t, int slot) const { return tris_[t].fixed[slot]; }

    // Deletes triangles reachable from the enclosing vertices without crossing
    // a constrained edge.
    void remove_exterior();

    Id edge_a(Id t, int slot) const { return tris_[t].v[(slot + 1) % 3]; }
    Id edge_b(Id t, int slot) const { return tris_[t].v[(slot + 2) % 3]; }

private:
    Id add_tri(Id a, Id b, Id c);

    std::vector<Point> pts_;
    std::vector<Tri> tris_;
    std::vector<Id> vtri_;
    std::size_t alive_ = 0;
    mutable std::uint64_t walk_state_ = 0x9e3779b97f4a7c15ull;
};

}  // namespace flatnorm
