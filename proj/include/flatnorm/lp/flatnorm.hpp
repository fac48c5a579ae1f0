#pragma once

#include "flatnorm/complex/complex.hpp"
#include "flatnorm/lp/simplex.hpp"

#include <vector>

namespace flatnorm {

// Flat norm LP of a d-chain t (d = 1 on edges, or d = 0 on vertices):
// minimize M(x) + λ M(s) subject to t = x + ∂s.
struct LPProblem {
    int dim = 1;
    BoundaryMatrix D;  // boundary map from (d+1)-simplices to d-simplices
    std::vector<std::int64_t> t;
    Rational lambda;
    std::vector<double> x_weight, s_weight;  // lengths / areas, vertices weigh 1
    // Integer costs: x_cost = q·round(w·2^k), s_cost = p·round(a·2^k) for λ ≈ p/q.
    std::vector<Wide> x_cost, s_cost;
    std::vector<std::int64_t> x_units, s_units;  // round(w·2^k), round(a·2^k)
    int scale_bits = 0;
    Rational lambda_used;  // p/q
    double weight_tolerance = 0;  // largest relative rounding error of a weight

    std::size_t num_constraints() const { return D.rows; }
    std::size_t num_variables() const { return 2 * D.rows + 2 * D.cols; }
};

struct FlatNormResult {
    Rational lambda;
    double value = 0;  // M(x) + λ M(s) from exact geometry
    double mass_x = 0, mass_s = 0;
    Rational objective;  // integer-weighted optimum divided back by the scale
    Wide x_units = 0, s_units = 0;  // sum of |coef|·round(weight·2^k) over x and s
    int scale_bits = 0;
    Chain x, s;
    bool integral = false;
    bool residual_ok = false;
    SimplexStats stats;
    std::size_t constraints = 0, variables = 0;
    double weight_tolerance = 0;
};

// Closest p/q to v with q <= max_den.
Rational best_rational(const Rational& v, std::int64_t max_den = std::int64_t(1) << 30);

LPProblem formulate(const Chain& t, const Complex2& K, const Rational& lambda);
FlatNormResult solve(const LPProblem& problem, const Complex2& K);
FlatNormResult flat_norm_decompose(const Chain& t, const Complex2& K, const Rational& lambda);
FlatNormResult simplicial_flat_distance(const Chain& t1, const Chain& t2, const Complex2& K, const Rational& lambda);

struct Threshold {
    double lambda = 0;
    Rational lambda_exact;  // tie point of the integer-weighted objectives
    double mass_s_below = 0, mass_s_above = 0;
};

struct SweepResult {
    std::vector<FlatNormResult> rows;
    std::vector<Threshold> thresholds;
    bool value_nondecreasing = true;
    bool mass_s_nonincreasing = true;
    bool concave = true;
};

// Solves at each λ and locates every change of optimal support between
// consecutive λ by intersecting the value lines of the two solutions.
SweepResult sweep(const Chain& t, const Complex2& K, const std::vector<Rational>& lambdas);

}  // namespace flatnorm
