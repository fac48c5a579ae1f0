#include "flatnorm/complex/complex.hpp"

#include <cmath>
#include <cstdlib>

namespace flatnorm {

std::int64_t Chain::get(std::size_t i) const {
    auto it = coef.find(i);
    return it == coef.end() ? 0 : it->second;
}

void Chain::add(std::size_t i, std::int64_t c) {
    if (c == 0) return;
    auto& v = coef[i];
    v += c;
    if (v == 0) coef.erase(i);
}

std::vector<std::int64_t> Chain::dense(std::size_t n) const {
    std::vector<std::int64_t> v(n, 0);
    for (auto [i, c] : coef) {
        if (i >= n) throw std::out_of_range("chain index " + std::to_string(i) + " outside the complex");
        v[i] = c;
    }
    return v;
}

Chain Chain::from_dense(int dim, const std::vector<std::int64_t>& v) {
    Chain c(dim);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) c.coef[i] = v[i];
    return c;
}

Chain operator+(const Chain& a, const Chain& b) {
    if (a.dim != b.dim) throw std::invalid_argument("adding chains of different dimension");
    Chain c = a;
    for (auto [i, v] : b.coef) c.add(i, v);
    return c;
}

Chain operator-(const Chain& a, const Chain& b) { return a + (-1) * b; }

Chain operator*(std::int64_t k, const Chain& a) {
    Chain c(a.dim);
    if (k == 0) return c;
    for (auto [i, v] : a.coef) c.coef[i] = k * v;
    return c;
}

Chain apply_boundary(const Complex2& K, const Chain& c) {
    if (c.dim < 1 || c.dim > 2) throw std::invalid_argument("boundary of a chain of dimension " + std::to_string(c.dim));
    const auto& M = K.boundary(c.dim);
    Chain out(c.dim - 1);
    for (auto [j, v] : c.coef) {
        if (j >= M.cols) throw std::out_of_range("chain index outside the complex");
        for (auto k = M.col_ptr[j]; k < M.col_ptr[j + 1]; ++k) out.add(M.row_idx[k], M.val[k] * v);
    }
    return out;
}

double chain_mass(const Complex2& K, const Chain& c) {
    double m = 0;
    for (auto [i, v] : c.coef) {
        double w = c.dim == 1 ? K.edge_length(i) : c.dim == 2 ? K.triangle_area(i).get_d() : 1.0;
        m += std::fabs(static_cast<double>(v)) * w;
    }
    return m;
}

Rational chain_area(const Complex2& K, const Chain& c) {
    if (c.dim != 2) throw std::invalid_argument("chain_area needs a 2-chain");
    Rational m = 0;
    for (auto [i, v] : c.coef) m += K.triangle_area(i) * from_int64(std::llabs(v));
    return m;
}

PLCurrent to_current(const Complex2& K, const Chain& c) {
    if (c.dim != 1) throw std::invalid_argument("to_current needs a 1-chain");
    PLCurrent out;
    for (auto [e, v] : c.coef) out.add(K.vertices()[K.edges()[e][0]], K.vertices()[K.edges()[e][1]], v);
    return out;
}

PLRegion to_region(const Complex2& K, const Chain& c) {
    if (c.dim != 2) throw std::invalid_argument("to_region needs a 2-chain");
    PLRegion out;
    for (auto [t, v] : c.coef) {
        const auto& tv = K.triangles()[t];
        out.add({{K.vertices()[tv[0]], K.vertices()[tv[1]], K.vertices()[tv[2]]}, v}, false);
    }
    return out;
}

Chain point_masses_to_chain(const Complex2& K, const PointMasses& m) {
    Chain c(0);
    for (const auto& [p, v] : m) {
        auto id = K.find_vertex(p);
        if (!id) throw std::invalid_argument("point mass not at a vertex of the complex");
        c.add(*id, v);
    }
    return c;
}

}  // namespace flatnorm
