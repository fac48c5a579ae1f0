#include "flatnorm/complex/tu.hpp"

#include <algorithm>
#include <cstdlib>

namespace flatnorm {

std::int64_t integer_determinant(std::vector<std::vector<std::int64_t>> m) {
    // Bareiss fraction-free elimination
    const std::size_t n = m.size();
    if (n == 0) return 1;
    std::int64_t sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

namespace {

struct Enumerator {
    std::size_t R, C, k;
    std::vector<std::vector<std::size_t>> adj;  // nodes: rows [0,R), cols [R,R+C)
    const std::vector<std::vector<std::int64_t>>* dense = nullptr;
    const BoundaryMatrix* sparse = nullptr;
    TUVerdict verdict;
    std::vector<std::size_t> set;
    std::vector<char> in_set, in_nbhd_count;
    std::vector<int> nbhd;  // how many set members are adjacent (or equal)
    std::size_t nrows = 0, ncols = 0;

    std::int64_t entry(std::size_t r, std::size_t c) const {
        return dense ? (*dense)[r][c] : sparse->at(r, c);
    }

    void check() {
        std::vector<std::size_t> rs, cs;
        for (auto v : set) (v < R ? rs : cs).push_back(v < R ? v : v - R);
        std::sort(rs.begin(), rs.end());
        std::sort(cs.begin(), cs.end());
        std::vector<std::vector<std::int64_t>> sub(rs.size(), std::vector<std::int64_t>(cs.size()));
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < cs.size(); ++j) sub[i][j] = entry(rs[i], cs[j]);
        ++verdict.submatrices_checked;
        auto d = integer_determinant(sub);
        if (std::llabs(d) > 1 && verdict.unimodular) {
            verdict.unimodular = false;
            verdict.rows = rs;
            verdict.cols = cs;
            verdict.det = d;
        }
    }

    void add(std::size_t w) {
        set.push_back(w);
        in_set[w] = 1;
        (w < R ? nrows : ncols)++;
        ++nbhd[w];
        for (auto u : adj[w]) ++nbhd[u];
    }
    void remove(std::size_t w) {
        set.pop_back();
        in_set[w] = 0;
        (w < R ? nrows : ncols)--;
        --nbhd[w];
        for (auto u : adj[w]) --nbhd[u];
    }

    void extend(std::vector<std::size_t> ext, std::size_t root) {
        if (!verdict.unimodular) return;
        if (nrows == ncols) check();
        while (!ext.empty()) {
            std::size_t w = ext.back();
            ext.pop_back();
            bool is_row = w < R;
            if ((is_row ? nrows : ncols) >= k) continue;
            // exclusive neighbours of w: not in the set and not adjacent to it
            std::vector<std::size_t> next = ext;
            for (auto u : adj[w])
                if (u > root && nbhd[u] == 0) next.push_back(u);
            add(w);
            extend(std::move(next), root);
            remove(w);
            if (!verdict.unimodular) return;
        }
    }

    void run() {
        const std::size_t N = R + C;
        in_set.assign(N, 0);
        nbhd.assign(N, 0);
        for (std::size_t v = 0; v < N; ++v) {
            add(v);
            std::vector<std::size_t> ext;
            for (auto u : adj[v])
                if (u > v) ext.push_back(u);
            extend(std::move(ext), v);
            remove(v);
            if (!verdict.unimodular) return;
        }
    }
};

}  // namespace

TUVerdict tu_verify(const std::vector<std::vector<std::int64_t>>& dense, std::size_t max_order) {
    if (max_order < 1) throw std::invalid_argument("max_order must be at least 1");
    Enumerator e;
    e.R = dense.size();
    e.C = e.R ? dense[0].size() : 0;
    e.k = max_order;
    e.dense = &dense;
    e.adj.resize(e.R + e.C);
    for (std::size_t r = 0; r < e.R; ++r)
        for (std::size_t c = 0; c < e.C; ++c)
            if (dense[r][c] != 0) {
                e.adj[r].push_back(e.R + c);
                e.adj[e.R + c].push_back(r);
            }
    e.verdict.max_order = max_order;
    e.run();
    return e.verdict;
}

TUVerdict tu_verify(const BoundaryMatrix& m, std::size_t max_order) {
    if (max_order < 1) throw std::invalid_argument("max_order must be at least 1");
    Enumerator e;
    e.R = m.rows;
    e.C = m.cols;
    e.k = max_order;
    e.sparse = &m;
    e.adj.resize(e.R + e.C);
    for (std::size_t c = 0; c < m.cols; ++c)
        for (auto k = m.col_ptr[c]; k < m.col_ptr[c + 1]; ++k) {
            e.adj[m.row_idx[k]].push_back(e.R + c);
            e.adj[e.R + c].push_back(m.row_idx[k]);
        }
    e.verdict.max_order = max_order;
    e.run();
    return e.verdict;
}

}  // namespace flatnorm
