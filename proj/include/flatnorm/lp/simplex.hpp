#pragma once

#include "flatnorm/complex/complex.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace flatnorm {

using Wide = __int128;

struct LPError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimplexStats {
    std::size_t pivots = 0;
    std::size_t degenerate_pivots = 0;
    // Every basis pivot was ±1, so all solves stayed in the integers.
    bool unit_pivots = true;
};

struct FlatLPSolution {
    std::vector<std::int64_t> x, s;
    Wide objective = 0;
    SimplexStats stats;
};

// minimize sum cx_i |x_i| + sum cs_j |s_j|  subject to  x + D s = t,
// with x and s split into nonnegative parts. Columns are ordered
// [x+, x-, s+, s-]; entering and leaving choices follow Bland's rule.
// The basis of [I | D] for a planar boundary matrix D is always triangular up
// to permutation, so every factorization is by singleton elimination.
FlatLPSolution solve_flat_lp(const BoundaryMatrix& D, const std::vector<std::int64_t>& t, const std::vector<Wide>& cx,
                             const std::vector<Wide>& cs, std::size_t max_pivots = 5'000'000);

std::string to_string(Wide v);

}  // namespace flatnorm
