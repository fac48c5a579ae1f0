#include "flatnorm/lp/flatnorm.hpp"

#include <algorithm>
#include <cmath>

namespace flatnorm {

namespace {

Integer wide_to_integer(Wide v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    Integer hi = static_cast<unsigned long>(u >> 64), lo = static_cast<unsigned long>(u & ~0ULL);
    Integer z = (hi << 64) + lo;
    return neg ? Integer(-z) : z;
}

Wide integer_to_wide(const Integer& z) {
    Integer a = abs(z);
    if (mpz_sizeinbase(a.get_mpz_t(), 2) > 100) throw LPError("cost exceeds the integer range");
    Integer hi = a >> 64, lo = a - (hi << 64);
    unsigned __int128 u = (static_cast<unsigned __int128>(hi.get_ui()) << 64) | lo.get_ui();
    Wide v = static_cast<Wide>(u);
    return z < 0 ? -v : v;
}

Wide weighted_units(const Chain& c, const std::vector<std::int64_t>& units) {
    Wide w = 0;
    for (auto [i, v] : c.coef) w += static_cast<Wide>(units[i]) * (v < 0 ? -v : v);
    return w;
}

}  // namespace

Rational best_rational(const Rational& v, std::int64_t max_den) {
    if (v.get_den() <= max_den) return v;
    // continued-fraction convergents and the best semiconvergent
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Integer n = v.get_num(), d = v.get_den();
    const Integer bound = static_cast<long>(max_den);
    for (;;) {
        Integer a;
        mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        Integer q2 = q0 + a * q1;
        if (q2 > bound) {
            Integer k = (bound - q0) / q1;
            Rational semi(p0 + k * p1, q0 + k * q1), conv(p1, q1);
            semi.canonicalize();
            conv.canonicalize();
            return abs(semi - v) < abs(conv - v) ? semi : conv;
        }
        Integer p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        Integer r = n - a * d;
        if (r == 0) {
            Rational out(p1, q1);
            out.canonicalize();
            return out;
        }
        n = d;
        d = r;
    }
}

LPProblem formulate(const Chain& t, const Complex2& K, const Rational& lambda) {
    if (t.dim != 0 && t.dim != 1) throw std::invalid_argument("flat norm LP takes a 0- or 1-chain");
    if (lambda < 0) throw std::invalid_argument("lambda must be nonnegative");
    LPProblem P;
    P.dim = t.dim;
    P.D = K.boundary(t.dim + 1);
    P.t = t.dense(P.D.rows);
    P.lambda = lambda;

    std::vector<Rational> exact_s;
    if (t.dim == 1) {
        for (std::size_t e = 0; e < K.num_edges(); ++e) P.x_weight.push_back(K.edge_length(e));
        for (std::size_t f = 0; f < K.num_triangles(); ++f) {
            exact_s.push_back(K.triangle_area(f));
            P.s_weight.push_back(exact_s.back().get_d());
        }
    } else {
        P.x_weight.assign(K.num_vertices(), 1.0);
        for (std::size_t e = 0; e < K.num_edges(); ++e) P.s_weight.push_back(K.edge_length(e));
    }

    double top = 0;
    for (double w : P.x_weight) top = std::max(top, w);
    for (double w : P.s_weight) top = std::max(top, w);
    int e = 0;
    if (top > 0) std::frexp(top, &e);
    P.scale_bits = 52 - e;

    auto units = [&](double w) {
        return static_cast<std::int64_t>(std::llround(std::ldexp(w, P.scale_bits)));
    };
    double tol = 0;
    auto track = [&](double w, std::int64_t u) {
        if (w > 0) tol = std::max(tol, std::fabs(std::ldexp(static_cast<double>(u), -P.scale_bits) - w) / w);
    };
    for (double w : P.x_weight) {
        P.x_units.push_back(units(w));
        track(w, P.x_units.back());
    }
    for (std::size_t i = 0; i < P.s_weight.size(); ++i) {
        std::int64_t u;
        if (!exact_s.empty()) u = to_int64(Rational(round_dyadic(exact_s[i], P.scale_bits) * pow2(P.scale_bits)).get_num());
        else u = units(P.s_weight[i]);
        P.s_units.push_back(u);
        track(P.s_weight[i], u);
    }
    // lengths are rounded doubles already
    P.weight_tolerance = std::max(tol, 1e-15);

    P.lambda_used = best_rational(lambda);
    if (mpz_sizeinbase(P.lambda_used.get_num().get_mpz_t(), 2) > 40)
        throw std::invalid_argument("lambda too large for the integer objective");
    Wide p = integer_to_wide(P.lambda_used.get_num()), q = integer_to_wide(P.lambda_used.get_den());
    for (auto u : P.x_units) P.x_cost.push_back(q * u);
    for (auto u : P.s_units) P.s_cost.push_back(p * u);
    return P;
}

FlatNormResult solve(const LPProblem& P, const Complex2& K) {
    auto sol = solve_flat_lp(P.D, P.t, P.x_cost, P.s_cost);
    FlatNormResult r;
    r.lambda = P.lambda;
    r.x = Chain::from_dense(P.dim, sol.x);
    r.s = Chain::from_dense(P.dim + 1, sol.s);
    r.stats = sol.stats;
    r.constraints = P.num_constraints();
    r.variables = P.num_variables();
    r.weight_tolerance = P.weight_tolerance;
    r.scale_bits = P.scale_bits;
    r.x_units = weighted_units(r.x, P.x_units);
    r.s_units = weighted_units(r.s, P.s_units);

    // t = x + ∂s, in integers
    auto ds = P.D.apply(sol.s);
    r.residual_ok = true;
    for (std::size_t i = 0; i < P.D.rows; ++i)
        if (sol.x[i] + ds[i] != P.t[i]) r.residual_ok = false;
    r.integral = sol.stats.unit_pivots && r.residual_ok;

    r.mass_x = chain_mass(K, r.x);
    r.mass_s = chain_mass(K, r.s);
    r.value = r.mass_x + P.lambda.get_d() * r.mass_s;
    r.objective = Rational(wide_to_integer(sol.objective)) / (Rational(P.lambda_used.get_den()) * pow2(P.scale_bits));
    return r;
}

FlatNormResult flat_norm_decompose(const Chain& t, const Complex2& K, const Rational& lambda) {
    return solve(formulate(t, K, lambda), K);
}

FlatNormResult simplicial_flat_distance(const Chain& t1, const Chain& t2, const Complex2& K, const Rational& lambda) {
    return flat_norm_decompose(t1 - t2, K, lambda);
}

namespace {

struct SweepContext {
    const Chain& t;
    const Complex2& K;
    std::vector<Threshold> found;
};

void locate(SweepContext& ctx, const FlatNormResult& a, const FlatNormResult& b, int depth) {
    if (a.x == b.x && a.s == b.s) return;
    if (a.s_units == b.s_units) return;
    // value lines x_units + λ s_units of both solutions meet at λ*
    Rational lam(wide_to_integer(b.x_units - a.x_units), wide_to_integer(a.s_units - b.s_units));
    lam.canonicalize();
    if (lam < a.lambda || lam > b.lambda || depth > 40) return;
    auto c = flat_norm_decompose(ctx.t, ctx.K, lam);
    double line = static_cast<double>(a.x_units) + lam.get_d() * static_cast<double>(a.s_units);
    double opt = static_cast<double>(c.x_units) + lam.get_d() * static_cast<double>(c.s_units);
    if (opt >= line * (1 - 1e-12)) {
        ctx.found.push_back({lam.get_d(), lam, a.mass_s, b.mass_s});
        return;
    }
    locate(ctx, a, c, depth + 1);
    locate(ctx, c, b, depth + 1);
}

}  // namespace

SweepResult sweep(const Chain& t, const Complex2& K, const std::vector<Rational>& lambdas) {
    if (!std::is_sorted(lambdas.begin(), lambdas.end())) throw std::invalid_argument("lambda list must be ascending");
    SweepResult out;
    for (const auto& l : lambdas) out.rows.push_back(flat_norm_decompose(t, K, l));
    SweepContext ctx{t, K, {}};
    for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) locate(ctx, out.rows[i], out.rows[i + 1], 0);
    std::sort(ctx.found.begin(), ctx.found.end(), [](const Threshold& a, const Threshold& b) { return a.lambda_exact < b.lambda_exact; });
    for (const auto& th : ctx.found)
        if (out.thresholds.empty() || out.thresholds.back().lambda_exact != th.lambda_exact) out.thresholds.push_back(th);

    const double tol = 1e-9;
    for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
        const auto &a = out.rows[i], &b = out.rows[i + 1];
        double scale = std::max(1.0, std::fabs(a.value));
        if (b.value < a.value - tol * scale) out.value_nondecreasing = false;
        if (b.mass_s > a.mass_s + tol * std::max(1.0, a.mass_s)) out.mass_s_nonincreasing = false;
    }
    for (std::size_t i = 0; i + 2 < out.rows.size(); ++i) {
        double l0 = out.rows[i].lambda.get_d(), l1 = out.rows[i + 1].lambda.get_d(), l2 = out.rows[i + 2].lambda.get_d();
        if (l2 == l0) continue;
        double interp = out.rows[i].value + (out.rows[i + 2].value - out.rows[i].value) * (l1 - l0) / (l2 - l0);
        if (out.rows[i + 1].value < interp - tol * std::max(1.0, std::fabs(interp))) out.concave = false;
    }
    return out;
}

}  // namespace flatnorm
