#include "flatnorm/complex/complex.hpp"

#include "flatnorm/geom/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace flatnorm {

namespace {

std::uint64_t edge_key(std::size_t u, std::size_t v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

std::string tri_name(std::size_t t, const Tri& v) {
    std::ostringstream s;
    s << "triangle " << t << " (" << v[0] << "," << v[1] << "," << v[2] << ")";
    return s.str();
}

// Uniform bucket grid over bounding boxes.
class BucketGrid {
public:
    BucketGrid(double x0, double y0, double x1, double y1, std::size_t items) {
        x0_ = x0;
        y0_ = y0;
        double w = std::max(x1 - x0, 1e-300), h = std::max(y1 - y0, 1e-300);
        double cells = std::max<double>(1, static_cast<double>(items));
        cell_ = std::sqrt(w * h / cells);
        if (!(cell_ > 0)) cell_ = std::max(w, h);
        nx_ = std::min<std::size_t>(4096, static_cast<std::size_t>(w / cell_) + 1);
        ny_ = std::min<std::size_t>(4096, static_cast<std::size_t>(h / cell_) + 1);
        cell_x_ = w / static_cast<double>(nx_) * (1 + 1e-12);
        cell_y_ = h / static_cast<double>(ny_) * (1 + 1e-12);
        cells_.resize(nx_ * ny_);
    }
    std::size_t cx(double x) const {
        double c = std::floor((x - x0_) / cell_x_);
        return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(nx_ - 1)));
    }
    std::size_t cy(double y) const {
        double c = std::floor((y - y0_) / cell_y_);
        return static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(ny_ - 1)));
    }
    void insert(std::size_t id, double xa, double ya, double xb, double yb) {
        for (auto i = cx(xa); i <= cx(xb); ++i)
            for (auto j = cy(ya); j <= cy(yb); ++j) cells_[i * ny_ + j].push_back(id);
    }
    const std::vector<std::size_t>& at(std::size_t i, std::size_t j) const { return cells_[i * ny_ + j]; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }

private:
    double x0_, y0_, cell_ = 1, cell_x_ = 1, cell_y_ = 1;
    std::size_t nx_ = 1, ny_ = 1;
    std::vector<std::vector<std::size_t>> cells_;
};

void validate_geometry(const Complex2& K, std::vector<std::string>& bad) {
    const auto& V = K.vertices();
    const auto& T = K.triangles();
    const auto& E = K.edges();
    if (V.empty() || T.empty()) return;
    double x0 = V[0].dx(), x1 = x0, y0 = V[0].dy(), y1 = y0;
    for (const auto& p : V) {
        x0 = std::min(x0, p.dx());
        x1 = std::max(x1, p.dx());
        y0 = std::min(y0, p.dy());
        y1 = std::max(y1, p.dy());
    }
    double pad = 1e-9 * (1 + std::max({std::fabs(x0), std::fabs(x1), std::fabs(y0), std::fabs(y1)}));
    auto box = [&](std::initializer_list<std::size_t> ids, double& a, double& b, double& c, double& d) {
        a = c = INFINITY;
        b = d = -INFINITY;
        for (auto i : ids) {
            a = std::min(a, V[i].dx());
            b = std::max(b, V[i].dx());
            c = std::min(c, V[i].dy());
            d = std::max(d, V[i].dy());
        }
        a -= pad;
        c -= pad;
        b += pad;
        d += pad;
    };

    BucketGrid tg(x0, y0, x1, y1, T.size());
    for (std::size_t t = 0; t < T.size(); ++t) {
        double a, b, c, d;
        box({T[t][0], T[t][1], T[t][2]}, a, b, c, d);
        tg.insert(t, a, c, b, d);
    }
    for (std::size_t v = 0; v < V.size(); ++v) {
        const auto& cell = tg.at(tg.cx(V[v].dx()), tg.cy(V[v].dy()));
        for (auto t : cell) {
            const auto& tv = T[t];
            if (tv[0] == v || tv[1] == v || tv[2] == v) continue;
            int o0 = orient2d(V[tv[0]], V[tv[1]], V[v]);
            int o1 = orient2d(V[tv[1]], V[tv[2]], V[v]);
            int o2 = orient2d(V[tv[2]], V[tv[0]], V[v]);
            if (o0 >= 0 && o1 >= 0 && o2 >= 0) {
                bad.push_back("vertex " + std::to_string(v) + " lies in " + tri_name(t, tv));
                if (bad.size() > 20) return;
            }
        }
    }

    BucketGrid eg(x0, y0, x1, y1, E.size());
    std::vector<std::array<double, 4>> boxes(E.size());
    for (std::size_t e = 0; e < E.size(); ++e) {
        auto& bx = boxes[e];
        box({E[e][0], E[e][1]}, bx[0], bx[1], bx[2], bx[3]);
        eg.insert(e, bx[0], bx[2], bx[1], bx[3]);
    }
    for (std::size_t i = 0; i < eg.nx(); ++i)
        for (std::size_t j = 0; j < eg.ny(); ++j) {
            const auto& cell = eg.at(i, j);
            for (std::size_t p = 0; p < cell.size(); ++p)
                for (std::size_t q = p + 1; q < cell.size(); ++q) {
                    auto e = cell[p], f = cell[q];
                    const auto &be = boxes[e], &bf = boxes[f];
                    if (be[0] > bf[1] || bf[0] > be[1] || be[2] > bf[3] || bf[2] > be[3]) continue;
                    // visit each pair once: in the cell holding the overlap's lower corner
                    if (eg.cx(std::max(be[0], bf[0])) != i || eg.cy(std::max(be[2], bf[2])) != j) continue;
                    const auto &ea = E[e], &fa = E[f];
                    if (ea[0] == fa[0] || ea[0] == fa[1] || ea[1] == fa[0] || ea[1] == fa[1]) continue;
                    if (segment_relation(V[ea[0]], V[ea[1]], V[fa[0]], V[fa[1]]) == SegmentRelation::proper) {
                        bad.push_back("edges " + std::to_string(e) + " and " + std::to_string(f) + " cross");
                        if (bad.size() > 20) return;
                    }
                }
        }
}

}  // namespace

ValidationError::ValidationError(const std::string& what, std::vector<std::string> off)
    : std::runtime_error([&] {
          std::string s = what;
          for (std::size_t i = 0; i < off.size() && i < 10; ++i) s += "; " + off[i];
          return s;
      }()),
      offenders(std::move(off)) {}

std::int64_t BoundaryMatrix::at(std::size_t r, std::size_t c) const {
    for (auto k = col_ptr[c]; k < col_ptr[c + 1]; ++k)
        if (row_idx[k] == r) return val[k];
    return 0;
}

std::vector<std::int64_t> BoundaryMatrix::apply(const std::vector<std::int64_t>& x) const {
    if (x.size() != cols) throw std::invalid_argument("dimension mismatch in boundary product");
    std::vector<std::int64_t> y(rows, 0);
    for (std::size_t c = 0; c < cols; ++c) {
        if (x[c] == 0) continue;
        for (auto k = col_ptr[c]; k < col_ptr[c + 1]; ++k) y[row_idx[k]] += val[k] * x[c];
    }
    return y;
}

BoundaryMatrix BoundaryMatrix::multiply(const BoundaryMatrix& rhs) const {
    if (cols != rhs.rows) throw std::invalid_argument("dimension mismatch in matrix product");
    BoundaryMatrix out;
    out.rows = rows;
    out.cols = rhs.cols;
    for (std::size_t c = 0; c < rhs.cols; ++c) {
        std::map<std::size_t, std::int64_t> acc;
        for (auto k = rhs.col_ptr[c]; k < rhs.col_ptr[c + 1]; ++k) {
            auto mid = rhs.row_idx[k];
            for (auto l = col_ptr[mid]; l < col_ptr[mid + 1]; ++l) acc[row_idx[l]] += val[l] * rhs.val[k];
        }
        for (auto [r, v] : acc)
            if (v != 0) {
                out.row_idx.push_back(r);
                out.val.push_back(static_cast<std::int8_t>(v));
            }
        out.col_ptr.push_back(out.row_idx.size());
    }
    return out;
}

std::vector<std::vector<std::int64_t>> BoundaryMatrix::dense() const {
    std::vector<std::vector<std::int64_t>> m(rows, std::vector<std::int64_t>(cols, 0));
    for (std::size_t c = 0; c < cols; ++c)
        for (auto k = col_ptr[c]; k < col_ptr[c + 1]; ++k) m[row_idx[k]][c] = val[k];
    return m;
}

std::optional<std::size_t> Complex2::find_edge(std::size_t u, std::size_t v) const {
    auto it = edge_index_.find(edge_key(u, v));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Complex2::find_vertex(const Point& p) const {
    auto it = vertex_index_.find(p);
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
}

double Complex2::edge_length(std::size_t e) const { return distance(vertices_[edges_[e][0]], vertices_[edges_[e][1]]); }

Rational Complex2::triangle_area(std::size_t t) const {
    const auto& v = tris_[t];
    return area2(vertices_[v[0]], vertices_[v[1]], vertices_[v[2]]) / 2;
}

double Complex2::max_diameter() const {
    double d = 0;
    for (std::size_t e = 0; e < edges_.size(); ++e) d = std::max(d, edge_length(e));
    return d;
}

const BoundaryMatrix& Complex2::boundary(int k) const {
    if (k == 1) return d1_;
    if (k == 2) return d2_;
    throw std::invalid_argument("boundary matrix index must be 1 or 2");
}

Complex2 build_complex(std::vector<Point> vertices, const std::vector<Tri>& triangles, bool validate,
                       const std::vector<Edge>& edge_order) {
    Complex2 K;
    std::vector<std::string> bad;
    K.vertices_ = std::move(vertices);
    const auto nv = K.vertices_.size();
    if (nv >= (std::size_t(1) << 32)) throw std::invalid_argument("too many vertices");
    for (std::size_t i = 0; i < nv; ++i)
        if (!K.vertex_index_.emplace(K.vertices_[i], i).second)
            bad.push_back("vertex " + std::to_string(i) + " duplicates vertex " +
                          std::to_string(K.vertex_index_[K.vertices_[i]]));

    std::set<Tri> seen;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        Tri v = triangles[t];
        if (v[0] >= nv || v[1] >= nv || v[2] >= nv) throw std::out_of_range(tri_name(t, v) + " references a missing vertex");
        if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) {
            bad.push_back(tri_name(t, v) + " repeats a vertex");
            continue;
        }
        int o = orient2d(K.vertices_[v[0]], K.vertices_[v[1]], K.vertices_[v[2]]);
        if (o == 0) {
            bad.push_back(tri_name(t, v) + " is degenerate");
            continue;
        }
        if (o < 0) std::swap(v[1], v[2]);
        std::rotate(v.begin(), std::min_element(v.begin(), v.end()), v.end());
        if (!seen.insert(v).second) {
            bad.push_back(tri_name(t, v) + " is a duplicate");
            continue;
        }
        K.tris_.push_back(v);
    }

    K.vertex_edges_.resize(nv);
    for (const auto& e : edge_order) {
        if (e[0] >= nv || e[1] >= nv || e[0] == e[1]) throw std::out_of_range("bad edge in edge order");
        if (!K.edge_index_.emplace(edge_key(e[0], e[1]), K.edges_.size()).second)
            throw ValidationError("invalid simplicial complex", {"duplicate edge in edge order"});
        K.edges_.push_back({std::min(e[0], e[1]), std::max(e[0], e[1])});
        K.edge_tris_.emplace_back();
        K.vertex_edges_[e[0]].push_back(K.edges_.size() - 1);
        K.vertex_edges_[e[1]].push_back(K.edges_.size() - 1);
    }
    for (std::size_t t = 0; t < K.tris_.size(); ++t) {
        const auto& v = K.tris_[t];
        std::array<std::size_t, 3> te{};
        std::array<int, 3> ts{};
        for (int k = 0; k < 3; ++k) {
            std::size_t a = v[k], b = v[(k + 1) % 3];
            auto key = edge_key(a, b);
            auto [it, fresh] = K.edge_index_.emplace(key, K.edges_.size());
            if (fresh && !edge_order.empty()) bad.push_back("triangle edge missing from the edge list");
            if (fresh) {
                K.edges_.push_back({std::min(a, b), std::max(a, b)});
                K.edge_tris_.emplace_back();
                K.vertex_edges_[a].push_back(it->second);
                K.vertex_edges_[b].push_back(it->second);
            }
            te[k] = it->second;
            ts[k] = a < b ? 1 : -1;
            auto& inc = K.edge_tris_[it->second];
            for (auto other : inc) {
                // a second triangle must traverse the edge in the opposite direction
                const auto& ov = K.tris_[other];
                for (int j = 0; j < 3; ++j)
                    if (ov[j] == a && ov[(j + 1) % 3] == b)
                        bad.push_back(tri_name(t, v) + " overlaps " + tri_name(other, ov));
            }
            inc.push_back(t);
            if (inc.size() > 2) bad.push_back("edge (" + std::to_string(a) + "," + std::to_string(b) + ") has more than two triangles");
        }
        K.tri_edges_.push_back(te);
        K.tri_signs_.push_back(ts);
    }
    for (std::size_t e = 0; e < K.edges_.size(); ++e)
        if (K.edge_tris_[e].empty()) bad.push_back("edge " + std::to_string(e) + " belongs to no triangle");
    if (validate && bad.empty()) validate_geometry(K, bad);
    if (!bad.empty()) throw ValidationError("invalid simplicial complex", bad);

    K.d1_.rows = nv;
    K.d1_.cols = K.edges_.size();
    for (const auto& e : K.edges_) {
        K.d1_.row_idx.push_back(e[0]);
        K.d1_.val.push_back(-1);
        K.d1_.row_idx.push_back(e[1]);
        K.d1_.val.push_back(1);
        K.d1_.col_ptr.push_back(K.d1_.row_idx.size());
    }
    K.d2_.rows = K.edges_.size();
    K.d2_.cols = K.tris_.size();
    for (std::size_t t = 0; t < K.tris_.size(); ++t) {
        std::array<std::pair<std::size_t, int>, 3> col;
        for (int k = 0; k < 3; ++k) col[k] = {K.tri_edges_[t][k], K.tri_signs_[t][k]};
        std::sort(col.begin(), col.end());
        for (auto [e, s] : col) {
            K.d2_.row_idx.push_back(e);
            K.d2_.val.push_back(static_cast<std::int8_t>(s));
        }
        K.d2_.col_ptr.push_back(K.d2_.row_idx.size());
    }
    return K;
}

}  // namespace flatnorm
