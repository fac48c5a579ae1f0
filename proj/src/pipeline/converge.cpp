#include "flatnorm/pipeline/converge.hpp"

#include "flatnorm/deform/deform.hpp"
#include "flatnorm/geom/arrangement.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace flatnorm {

namespace {

// The input as a polyline: arcs are replaced by their proxy chord polygon.
PLCurrent input_polyline(const ExperimentConfig& c) {
    if (c.input.kind == CurveSpec::Kind::polyline) return c.input.polyline;
    return PLCurrent::polyline(arc_vertices(c.input.arc, c.proxy_chords), c.input.arc.mult);
}

double input_mass(const ExperimentConfig& c) {
    if (c.input.kind == CurveSpec::Kind::polyline) return c.input.polyline.mass();
    const auto& a = c.input.arc;
    return std::fabs(a.end - a.start) * a.radius * double(a.mult < 0 ? -a.mult : a.mult);
}

// Axis-aligned box around both currents, a little larger, with dyadic corners.
PLCurrent bounding_box(const PLCurrent& a, const PLCurrent& b) {
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (const auto* c : {&a, &b})
        for (const auto& s : c->segments())
            for (const auto* p : {&s.a, &s.b}) {
                x0 = std::min(x0, p->dx()), x1 = std::max(x1, p->dx());
                y0 = std::min(y0, p->dy()), y1 = std::max(y1, p->dy());
            }
    if (!(x0 <= x1)) throw std::invalid_argument("empty input");
    double m = std::max(x1 - x0, y1 - y0) / 8;
    auto lo = [](double v) -> Rational { return Rational(std::floor(v * 64)) / 64; };
    auto hi = [](double v) -> Rational { return Rational(std::ceil(v * 64)) / 64; };
    Rational X0 = lo(x0 - m), Y0 = lo(y0 - m), X1 = hi(x1 + m), Y1 = hi(y1 + m);
    return PLCurrent::polyline({Point(X0, Y0), Point(X1, Y0), Point(X1, Y1), Point(X0, Y1)}, 1, true);
}

double boundary_mass(const PLRegion& r) { return r.empty() ? 0 : region_boundary(r).mass(); }

}  // namespace

ConvergenceRow convergence_row(const ExperimentConfig& config, double delta) {
    auto t0 = std::chrono::steady_clock::now();
    ConvergenceRow row;
    row.delta = delta;
    const PLCurrent T = input_polyline(config);
    Approximation ap = approximate_curve(config.input, delta);
    const PLCurrent& P = ap.P;
    row.chords = ap.P.size();
    row.mass_P = P.mass();
    const bool fill = config.known == Decomposition::fill;

    // T_δ = T + ∂W0. Keep: X = X_δ + ∂W1. Fill: S = S_δ + W2, and in the plane
    // S - S_δ is the unique filler of T - T_δ.
    PLRegion W0 = filler_region(P, T), W1, W2;
    PLCurrent X_d;
    PLRegion S_d;
    if (fill) {
        W2 = filler_region(T, P);
        S_d = filling_region(P);
    } else {
        W1 = filler_region(T, P);
        X_d = P;
    }
    const std::vector<PLCurrent> U{PLCurrent(), PLCurrent()};
    const std::vector<PLRegion> W{W0, W1, W2};
    double guard = 1;
    for (const auto& w : W) guard = std::max(guard, boundary_mass(w)), row.error_mass += w.mass();
    row.delta_cap = delta / guard;

    LocalizeOptions opt;
    opt.use_grid = false;
    opt.max_edge = std::max(row.delta_cap, config.edge_floor);
    std::vector<PLRegion> regions;
    if (fill) regions.push_back(S_d);
    Embedding E = embed_chains({P, X_d, bounding_box(T, P)}, regions, delta, opt);
    const Complex2& K = E.complex();
    row.triangles = K.num_triangles();
    row.min_angle = E.mesh.report.min_angle_deg;
    row.theta_K = E.mesh.report.theta_M;
    row.Delta = K.max_diameter();
    row.cap_met = row.Delta <= row.delta_cap;

    const Chain& t = E.curves[0];
    auto F = flat_norm_decompose(t, K, config.lambda);
    row.value = F.value;
    row.mass_x = F.mass_x, row.mass_s = F.mass_s;
    row.integral = F.integral, row.residual_ok = F.residual_ok;

    auto D = deform_currents(U, W, K, config.deform_eps, config.seed);
    const auto& cert = D.certificate;
    row.deform_ok = true;
    for (const auto& c : cert.curves) row.deform_ok = row.deform_ok && c.boundary_commutes && c.bounds_hold;
    for (const auto& c : cert.regions) row.deform_ok = row.deform_ok && c.boundary_commutes && c.bounds_hold;
    row.worst_ratio = cert.worst_ratio;
    Chain x = E.curves[1];
    Chain s = fill ? E.regions[0] : Chain(2);
    for (const auto& o : D.O) {
        row.pushed_mass += chain_area(K, o).get_d();
        s = s + o;
    }
    row.identity_ok = x + apply_boundary(K, s) == t;
    double lam = config.lambda.get_d();
    row.candidate = chain_mass(K, x) + lam * chain_area(K, s).get_d();
    row.candidate_ok = row.value <= row.candidate * (1 + 1e-9) + 1e-12;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

ConvergenceReport converge_experiment(const ExperimentConfig& config) {
    const auto& ds = config.deltas;
    if (ds.empty()) throw std::invalid_argument("no δ values");
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (!(ds[i] > 0)) throw std::invalid_argument("δ values must be positive");
        if (i && !(ds[i] < ds[i - 1])) throw std::invalid_argument("δ values must be strictly decreasing");
    }
    ConvergenceReport rep;
    rep.mass_T = input_mass(config);
    rep.L = 2 * beta_constant();
    const double a = 11 * rep.L;
    rep.C_theory = 2 + 2 * a * (1 + a) + 3 * (1 + a);

    std::vector<double> all = ds;
    if (!config.reference) all.push_back(ds.back() / 4);
    std::vector<ConvergenceRow> rows(all.size());
    std::atomic<std::size_t> next{0};
    std::size_t workers = config.threads ? config.threads : std::thread::hardware_concurrency();
    workers = std::max<std::size_t>(1, std::min(workers, all.size()));
    auto work = [&] {
        for (std::size_t i; (i = next++) < all.size();) {
            try {
                rows[i] = convergence_row(config, all[i]);
            } catch (const std::exception& e) {
                rows[i].delta = all[i];
                rows[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < workers; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();

    if (config.reference) {
        rep.reference = *config.reference;
    } else {
        rep.reference = rows.back().value;
        rep.reference_is_proxy = true;
        if (!rows.back().error.empty()) throw std::runtime_error("reference row failed: " + rows.back().error);
        rows.pop_back();
    }
    bool ok = true;
    rep.gaps_nonincreasing = rep.within_bound = rep.cauchy = rep.bounded = rep.all_integral = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& r = rows[i];
        if (!r.error.empty()) {
            ok = false;
            continue;
        }
        r.gap = std::fabs(r.value - rep.reference);
        rep.C_measured = std::max(rep.C_measured, r.gap / r.delta);
        rep.within_bound = rep.within_bound && r.gap <= rep.C_theory * r.delta;
        rep.all_integral = rep.all_integral && r.integral && r.residual_ok;
        rep.bounded = rep.bounded && r.mass_x <= rep.mass_T + 1 && r.mass_s <= rep.mass_T + 1;
        ok = ok && r.identity_ok && r.candidate_ok && r.deform_ok;
        if (i && rows[i - 1].error.empty()) {
            rep.gaps_nonincreasing = rep.gaps_nonincreasing && r.gap <= rows[i - 1].gap + 1e-9;
            if (i >= 2 && rows[i - 2].error.empty()) {
                double d1 = std::fabs(rows[i - 1].value - rows[i - 2].value), d2 = std::fabs(r.value - rows[i - 1].value);
                rep.cauchy = rep.cauchy && d2 <= d1 + 1e-9;
            }
        }
    }
    rep.rows = std::move(rows);
    const auto& last = rep.rows.back();
    rep.final_gap_rel = rep.reference != 0 ? last.gap / std::fabs(rep.reference) : last.gap;
    rep.verdict = ok && rep.gaps_nonincreasing && rep.within_bound && rep.cauchy && rep.bounded && rep.all_integral &&
                  rep.final_gap_rel < 0.05;
    return rep;
}

SpanningReport spanning_experiment(const Chain& t, const Complex2& K, const std::vector<Rational>& lambdas) {
    if (lambdas.empty()) throw std::invalid_argument("no λ values");
    std::vector<Rational> ls = lambdas;
    std::sort(ls.begin(), ls.end());
    auto sw = sweep(t, K, ls);
    SpanningReport rep;
    rep.thresholds = sw.thresholds;
    for (const auto& r : sw.rows) {
        SpanningRow row;
        row.lambda = r.lambda.get_d();
        row.value = r.value, row.mass_x = r.mass_x, row.mass_s = r.mass_s;
        row.x_zero = r.x.empty();
        row.x_is_t = r.x == t;
        rep.rows.push_back(row);
    }
    std::size_t first = rep.rows.size();
    for (std::size_t i = 0; i < rep.rows.size(); ++i)
        if (!rep.rows[i].x_zero) {
            first = i;
            break;
        }
    rep.lambda0 = first < rep.rows.size() ? rep.rows[first].lambda : 0;
    rep.verdict = first > 0 && rep.rows.back().x_is_t;
    return rep;
}

DilationCheck dilation_check(const Chain& t, const Complex2& K, const Rational& lambda) {
    if (lambda <= 0) throw std::invalid_argument("λ must be positive");
    DilationCheck d;
    d.direct = flat_norm_decompose(t, K, lambda).value;
    Complex2 L = dilate_complex(K, lambda);
    d.dilated = flat_norm_decompose(t, L, Rational(1)).value / lambda.get_d();
    d.rel_error = std::fabs(d.direct - d.dilated) / std::max(1.0, std::fabs(d.direct));
    return d;
}

}  // namespace flatnorm
