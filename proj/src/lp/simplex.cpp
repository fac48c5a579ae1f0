#include "flatnorm/lp/simplex.hpp"

#include <algorithm>

namespace flatnorm {

std::string to_string(Wide v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

namespace {

struct Entry {
    std::size_t row;
    int val;
};

class FlatSimplex {
public:
    FlatSimplex(const BoundaryMatrix& D, const std::vector<std::int64_t>& t, const std::vector<Wide>& cx,
                const std::vector<Wide>& cs)
        : D_(D), t_(t), m_(D.rows), n_(D.cols) {
        cost_.reserve(2 * m_ + 2 * n_);
        for (int side = 0; side < 2; ++side)
            for (auto c : cx) cost_.push_back(c);
        for (int side = 0; side < 2; ++side)
            for (auto c : cs) cost_.push_back(c);
        for (auto c : cost_)
            if (c < 0) throw LPError("negative cost");
        basic_pos_.assign(cost_.size(), npos);
        head_.resize(m_);
        xb_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            head_[i] = t_[i] >= 0 ? i : m_ + i;
            xb_[i] = t_[i] >= 0 ? t_[i] : -t_[i];
            basic_pos_[head_[i]] = i;
        }
    }

    FlatLPSolution run(std::size_t max_pivots) {
        FlatLPSolution out;
        std::vector<std::int64_t> d;
        std::vector<Wide> y;
        for (;;) {
            if (etas_.size() >= kRefactor || !factored_) factor();
            btran(y);
            std::size_t enter = price(y);
            if (enter == npos) break;
            if (stats_.pivots >= max_pivots) throw LPError("simplex pivot limit reached");
            ftran(enter, d);
            // Bland: among tied ratios leave with the smallest variable index
            std::size_t leave = npos;
            std::int64_t best_num = 0, best_den = 1;
            for (std::size_t p = 0; p < m_; ++p) {
                if (d[p] <= 0) continue;
                if (leave == npos) {
                    leave = p;
                    best_num = xb_[p];
                    best_den = d[p];
                    continue;
                }
                Wide lhs = static_cast<Wide>(xb_[p]) * best_den, rhs = static_cast<Wide>(best_num) * d[p];
                if (lhs < rhs || (lhs == rhs && head_[p] < head_[leave])) {
                    leave = p;
                    best_num = xb_[p];
                    best_den = d[p];
                }
            }
            if (leave == npos) throw LPError("objective unbounded below");
            if (best_num % best_den != 0) stats_.unit_pivots = false;
            std::int64_t theta = best_num / best_den;
            if (theta == 0) ++stats_.degenerate_pivots;
            for (std::size_t p = 0; p < m_; ++p)
                if (d[p] != 0) xb_[p] -= theta * d[p];
            Eta eta{leave, d[leave], {}};
            for (std::size_t p = 0; p < m_; ++p)
                if (d[p] != 0 && p != leave) eta.d.push_back({p, d[p]});
            if (eta.pivot != 1 && eta.pivot != -1) stats_.unit_pivots = false;
            etas_.push_back(std::move(eta));
            basic_pos_[head_[leave]] = npos;
            head_[leave] = enter;
            basic_pos_[enter] = leave;
            xb_[leave] = theta;
            ++stats_.pivots;
        }
        out.x.assign(m_, 0);
        out.s.assign(n_, 0);
        for (std::size_t p = 0; p < m_; ++p) {
            std::size_t v = head_[p];
            std::int64_t val = xb_[p];
            if (val < 0) throw LPError("primal infeasibility in the final basis");
            if (v < m_) out.x[v] += val;
            else if (v < 2 * m_) out.x[v - m_] -= val;
            else if (v < 2 * m_ + n_) out.s[v - 2 * m_] += val;
            else out.s[v - 2 * m_ - n_] -= val;
            out.objective += cost_[v] * val;
        }
        out.stats = stats_;
        return out;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    static constexpr std::size_t kRefactor = 64;

    // Product-form update: the basis column at pos was replaced by one whose
    // representation in the previous basis is d (pivot entry d[pos]).
    struct Eta {
        std::size_t pos;
        std::int64_t pivot;
        std::vector<std::pair<std::size_t, std::int64_t>> d;
    };

    void column(std::size_t v, std::vector<Entry>& out) const {
        out.clear();
        if (v < m_) out.push_back({v, 1});
        else if (v < 2 * m_) out.push_back({v - m_, -1});
        else {
            std::size_t c = v < 2 * m_ + n_ ? v - 2 * m_ : v - 2 * m_ - n_;
            int sign = v < 2 * m_ + n_ ? 1 : -1;
            for (auto k = D_.col_ptr[c]; k < D_.col_ptr[c + 1]; ++k) out.push_back({D_.row_idx[k], sign * D_.val[k]});
        }
    }

    // Orders basis (row, position) pairs so the permuted basis is lower triangular.
    void factor() {
        factored_ = true;
        etas_.clear();
        cols_.resize(m_);
        for (std::size_t p = 0; p < m_; ++p) column(head_[p], cols_[p]);
        std::vector<std::vector<std::size_t>> rows(m_);
        std::vector<int> rcount(m_, 0), ccount(m_, 0);
        for (std::size_t p = 0; p < m_; ++p)
            for (const auto& e : cols_[p]) {
                rows[e.row].push_back(p);
                ++rcount[e.row];
                ++ccount[p];
            }
        std::vector<char> rdone(m_, 0), cdone(m_, 0);
        std::vector<std::size_t> rq, cq;
        for (std::size_t i = 0; i < m_; ++i) {
            if (rcount[i] == 1) rq.push_back(i);
            if (ccount[i] == 1) cq.push_back(i);
        }
        std::vector<std::pair<std::size_t, std::size_t>> front, back;
        auto remove = [&](std::size_t r, std::size_t p) {
            rdone[r] = cdone[p] = 1;
            for (auto q : rows[r])
                if (!cdone[q] && --ccount[q] == 1) cq.push_back(q);
            for (const auto& e : cols_[p])
                if (!rdone[e.row] && --rcount[e.row] == 1) rq.push_back(e.row);
        };
        std::size_t done = 0;
        while (done < m_) {
            bool progressed = false;
            while (!rq.empty()) {
                std::size_t r = rq.back();
                rq.pop_back();
                if (rdone[r] || rcount[r] != 1) continue;
                std::size_t p = npos;
                for (auto q : rows[r])
                    if (!cdone[q]) p = q;
                front.emplace_back(r, p);
                remove(r, p);
                ++done;
                progressed = true;
            }
            if (!cq.empty()) {
                std::size_t p = cq.back();
                cq.pop_back();
                if (cdone[p] || ccount[p] != 1) continue;
                std::size_t r = npos;
                for (const auto& e : cols_[p])
                    if (!rdone[e.row]) r = e.row;
                back.emplace_back(r, p);
                remove(r, p);
                ++done;
                progressed = true;
            }
            if (!progressed && done < m_) throw LPError("basis is not triangular; constraint matrix is not a planar boundary");
        }
        order_ = std::move(front);
        order_.insert(order_.end(), back.rbegin(), back.rend());
        pivot_.resize(m_);
        for (std::size_t k = 0; k < m_; ++k) {
            auto [r, p] = order_[k];
            int v = 0;
            for (const auto& e : cols_[p])
                if (e.row == r) v = e.val;
            if (v != 1 && v != -1) stats_.unit_pivots = false;
            pivot_[k] = v;
        }
    }

    void ftran(std::size_t var, std::vector<std::int64_t>& d) {
        std::vector<Entry> col;
        column(var, col);
        std::vector<std::int64_t> res(m_, 0);
        for (const auto& e : col) res[e.row] += e.val;
        d.assign(m_, 0);
        for (std::size_t k = 0; k < m_; ++k) {
            auto [r, p] = order_[k];
            if (res[r] == 0) continue;
            if (res[r] % pivot_[k] != 0) stats_.unit_pivots = false;
            std::int64_t v = res[r] / pivot_[k];
            d[p] = v;
            for (const auto& e : cols_[p]) res[e.row] -= e.val * v;
        }
        for (const auto& eta : etas_) {
            std::int64_t wp = d[eta.pos];
            if (wp == 0) continue;
            if (wp % eta.pivot != 0) stats_.unit_pivots = false;
            wp /= eta.pivot;
            d[eta.pos] = wp;
            for (const auto& [i, di] : eta.d) d[i] -= di * wp;
        }
    }

    // 128-bit division is slow; unit pivots are the rule.
    Wide divide(Wide a, std::int64_t p) {
        if (p == 1) return a;
        if (p == -1) return -a;
        if (a % p != 0) stats_.unit_pivots = false;
        return a / p;
    }

    void btran(std::vector<Wide>& y) {
        u_.resize(m_);
        for (std::size_t p = 0; p < m_; ++p) u_[p] = cost_[head_[p]];
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            Wide acc = u_[it->pos];
            for (const auto& [i, di] : it->d) acc -= u_[i] * di;
            u_[it->pos] = divide(acc, it->pivot);
        }
        y.assign(m_, 0);
        for (std::size_t k = m_; k-- > 0;) {
            auto [r, p] = order_[k];
            Wide acc = u_[p];
            for (const auto& e : cols_[p])
                if (e.row != r) acc -= e.val * y[e.row];
            y[r] = divide(acc, pivot_[k]);
        }
    }

    // Smallest-index nonbasic column with negative reduced cost.
    std::size_t price(const std::vector<Wide>& y) const {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basic_pos_[i] == npos && cost_[i] - y[i] < 0) return i;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (basic_pos_[m_ + i] == npos && cost_[m_ + i] + y[i] < 0) return m_ + i;
        }
        for (int side = 0; side < 2; ++side)
            for (std::size_t c = 0; c < n_; ++c) {
                std::size_t v = 2 * m_ + side * n_ + c;
                if (basic_pos_[v] != npos) continue;
                Wide dot = 0;
                for (auto k = D_.col_ptr[c]; k < D_.col_ptr[c + 1]; ++k) dot += D_.val[k] * y[D_.row_idx[k]];
                Wide rc = side == 0 ? cost_[v] - dot : cost_[v] + dot;
                if (rc < 0) return v;
            }
        return npos;
    }

    const BoundaryMatrix& D_;
    const std::vector<std::int64_t>& t_;
    std::size_t m_, n_;
    std::vector<Wide> cost_;
    std::vector<std::size_t> head_, basic_pos_;
    std::vector<std::int64_t> xb_;
    std::vector<std::vector<Entry>> cols_;
    std::vector<std::pair<std::size_t, std::size_t>> order_;
    std::vector<int> pivot_;
    std::vector<Eta> etas_;
    std::vector<Wide> u_;
    bool factored_ = false;
    SimplexStats stats_;
};

}  // namespace

FlatLPSolution solve_flat_lp(const BoundaryMatrix& D, const std::vector<std::int64_t>& t, const std::vector<Wide>& cx,
                             const std::vector<Wide>& cs, std::size_t max_pivots) {
    if (t.size() != D.rows || cx.size() != D.rows || cs.size() != D.cols)
        throw std::invalid_argument("LP dimension mismatch");
    FlatSimplex lp(D, t, cx, cs);
    return lp.run(max_pivots);
}

}  // namespace flatnorm
