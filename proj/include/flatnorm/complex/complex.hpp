#pragma once

#include "flatnorm/geom/current.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace flatnorm {

struct ValidationError : std::runtime_error {
    ValidationError(const std::string& what, std::vector<std::string> offenders);
    std::vector<std::string> offenders;
};

// Sparse {-1,0,1} matrix in compressed-column form.
struct BoundaryMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::size_t> col_ptr{0};
    std::vector<std::size_t> row_idx;
    std::vector<std::int8_t> val;

    std::int64_t at(std::size_t r, std::size_t c) const;
    std::vector<std::int64_t> apply(const std::vector<std::int64_t>& x) const;
    BoundaryMatrix multiply(const BoundaryMatrix& rhs) const;  // dense-free product; entries may exceed 1
    std::vector<std::vector<std::int64_t>> dense() const;
    std::size_t nnz() const { return row_idx.size(); }
};

using Tri = std::array<std::size_t, 3>;
using Edge = std::array<std::size_t, 2>;

class Complex2 {
public:
    Complex2() = default;

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Tri>& triangles() const { return tris_; }

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_triangles() const { return tris_.size(); }

    // Edges of triangle t in loop order (v0v1, v1v2, v2v0), with +1 where the
    // stored edge direction agrees with the loop.
    const std::array<std::size_t, 3>& triangle_edges(std::size_t t) const { return tri_edges_[t]; }
    const std::array<int, 3>& triangle_edge_signs(std::size_t t) const { return tri_signs_[t]; }
    // Up to two triangles incident to edge e.
    const std::vector<std::size_t>& edge_triangles(std::size_t e) const { return edge_tris_[e]; }
    // Edges incident to vertex v.
    const std::vector<std::size_t>& vertex_edges(std::size_t v) const { return vertex_edges_[v]; }

    std::optional<std::size_t> find_edge(std::size_t u, std::size_t v) const;
    std::optional<std::size_t> find_vertex(const Point& p) const;

    double edge_length(std::size_t e) const;
    Rational triangle_area(std::size_t t) const;
    // Largest simplex diameter.
    double max_diameter() const;

    const BoundaryMatrix& boundary(int k) const;

    friend Complex2 build_complex(std::vector<Point> vertices, const std::vector<Tri>& triangles, bool validate,
                                  const std::vector<Edge>& edge_order);

private:
    std::vector<Point> vertices_;
    std::vector<Edge> edges_;
    std::vector<Tri> tris_;
    std::vector<std::array<std::size_t, 3>> tri_edges_;
    std::vector<std::array<int, 3>> tri_signs_;
    std::vector<std::vector<std::size_t>> edge_tris_;
    std::vector<std::vector<std::size_t>> vertex_edges_;
    std::unordered_map<std::uint64_t, std::size_t> edge_index_;
    std::map<Point, std::size_t> vertex_index_;
    BoundaryMatrix d1_, d2_;
};

// Triangles are reoriented counter-clockwise; edges run from lower to higher
// vertex index. With validate, rejects degenerate, duplicate, overlapping and
// improperly intersecting simplices. A non-empty edge_order fixes the edge
// numbering; it must list exactly the triangle edges.
Complex2 build_complex(std::vector<Point> vertices, const std::vector<Tri>& triangles, bool validate = true,
                       const std::vector<Edge>& edge_order = {});

// Integral chain over edges (dim 1) or triangles (dim 2), or vertices (dim 0).
struct Chain {
    int dim = 1;
    std::map<std::size_t, std::int64_t> coef;

    Chain() = default;
    explicit Chain(int d) : dim(d) {}

    std::int64_t get(std::size_t i) const;
    void add(std::size_t i, std::int64_t c);
    bool empty() const { return coef.empty(); }
    std::vector<std::int64_t> dense(std::size_t n) const;
    static Chain from_dense(int dim, const std::vector<std::int64_t>& v);

    friend bool operator==(const Chain& a, const Chain& b) { return a.dim == b.dim && a.coef == b.coef; }
    friend Chain operator+(const Chain& a, const Chain& b);
    friend Chain operator-(const Chain& a, const Chain& b);
    friend Chain operator*(std::int64_t k, const Chain& a);
};

Chain apply_boundary(const Complex2& K, const Chain& c);
double chain_mass(const Complex2& K, const Chain& c);
// Exact mass of a 2-chain (areas are rational).
Rational chain_area(const Complex2& K, const Chain& c);

PLCurrent to_current(const Complex2& K, const Chain& c);
PLRegion to_region(const Complex2& K, const Chain& c);

// Points to vertex ids, for a 0-chain.
Chain point_masses_to_chain(const Complex2& K, const PointMasses& m);

}  // namespace flatnorm
