#pragma once

#include "flatnorm/approx/approx.hpp"
#include "flatnorm/lp/flatnorm.hpp"
#include "flatnorm/pipeline/embed.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flatnorm {

// Known decomposition T = X + ∂S of the input: keep (X = T, S = 0) or
// fill (X = 0, ∂S = T, the input must be a cycle).
enum class Decomposition { keep, fill };

struct ExperimentConfig {
    CurveSpec input;
    Decomposition known = Decomposition::keep;
    std::vector<double> deltas{0.1, 0.05, 0.02, 0.01};
    Rational lambda = 1;
    std::uint64_t seed = 0;
    double deform_eps = 1;
    // Arcs are measured against this many chords; polylines against themselves.
    std::size_t proxy_chords = 512;
    // The mesh edge bound is max(cap, edge_floor); the cap alone is far too fine.
    double edge_floor = 0.1;
    std::optional<double> reference;  // F_λ(T); without it a fine-δ row stands in
    std::size_t threads = 0;          // 0: one per hardware thread
};

struct ConvergenceRow {
    double delta = 0;
    std::size_t chords = 0;
    double mass_P = 0;
    double value = 0;  // F_K(P_δ)
    double mass_x = 0, mass_s = 0;
    bool integral = false, residual_ok = false;
    std::size_t triangles = 0;
    double min_angle = 0, theta_K = 0;
    double Delta = 0;      // largest simplex diameter of K_δ
    double delta_cap = 0;  // δ / max{1, M(∂U_i), M(∂W_j)}
    bool cap_met = false;
    double error_mass = 0;  // Σ M(W_j), the approximation errors before the push
    double pushed_mass = 0;  // Σ M(O_j) after the push
    double candidate = 0;    // M(X_δ) + λ M(S_δ + Σ O_j)
    bool identity_ok = false;  // P_δ = X_δ + ∂(S_δ + Σ O_j) exactly
    bool candidate_ok = false;  // value ≤ candidate
    bool deform_ok = false;     // commutation and expansion bounds of the push
    double worst_ratio = 0;
    double gap = 0;
    double seconds = 0;
    std::string error;  // non-empty when the row failed
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double mass_T = 0;
    double reference = 0;
    bool reference_is_proxy = false;
    double L = 0;          // 2β
    double C_theory = 0;   // 2 + 2·11L(1 + 11L) + 3(1 + 11L)
    double C_measured = 0;  // max gap / δ
    bool gaps_nonincreasing = false;
    bool within_bound = false;
    bool cauchy = false;
    bool bounded = false;  // M(x), M(s) ≤ M(T) + 1 in every row
    bool all_integral = false;
    double final_gap_rel = 0;
    bool verdict = false;
};

ConvergenceRow convergence_row(const ExperimentConfig& config, double delta);
ConvergenceReport converge_experiment(const ExperimentConfig& config);

struct SpanningRow {
    double lambda = 0;
    double value = 0, mass_x = 0, mass_s = 0;
    bool x_zero = false, x_is_t = false;
};

struct SpanningReport {
    std::vector<SpanningRow> rows;
    std::vector<Threshold> thresholds;
    double lambda0 = 0;  // smallest tested λ with x ≠ 0, or 0
    // x = 0 for every tested λ below lambda0, and x = t at the largest λ
    bool verdict = false;
};

SpanningReport spanning_experiment(const Chain& t, const Complex2& K, const std::vector<Rational>& lambdas);

struct DilationCheck {
    double direct = 0;    // F_λ(t) on K
    double dilated = 0;   // λ⁻¹ F_1(λt) on λK
    double rel_error = 0;
};

DilationCheck dilation_check(const Chain& t, const Complex2& K, const Rational& lambda);

}  // namespace flatnorm
