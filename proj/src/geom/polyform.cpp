#include "flatnorm/geom/polyform.hpp"

#include <vector>

namespace flatnorm {

Poly Poly::constant(const Rational& c) { return monomial(c, 0, 0); }

Poly Poly::monomial(const Rational& c, int i, int j) {
    Poly p;
    p.set(i, j, c);
    return p;
}

void Poly::set(int i, int j, const Rational& c) {
    if (c == 0)
        terms_.erase({i, j});
    else
        terms_[{i, j}] = c;
}

int Poly::degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
    return d;
}

Rational Poly::eval(const Point& p) const {
    Rational s = 0;
    for (const auto& [e, c] : terms_) {
        Rational t = c;
        for (int k = 0; k < e.first; ++k) t *= p.x();
        for (int k = 0; k < e.second; ++k) t *= p.y();
        s += t;
    }
    return s;
}

Poly Poly::dx() const {
    Poly d;
    for (const auto& [e, c] : terms_)
        if (e.first > 0) d.set(e.first - 1, e.second, c * e.first);
    return d;
}

Poly Poly::dy() const {
    Poly d;
    for (const auto& [e, c] : terms_)
        if (e.second > 0) d.set(e.first, e.second - 1, c * e.second);
    return d;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [e, c] : o.terms_) {
        auto it = terms_.find(e);
        set(e.first, e.second, it == terms_.end() ? c : Rational(it->second + c));
    }
    return *this;
}

Poly operator-(const Poly& a, const Poly& b) { return a + Rational(-1) * b; }

Poly operator*(const Rational& s, const Poly& p) {
    Poly r;
    for (const auto& [e, c] : p.terms_) r.set(e.first, e.second, s * c);
    return r;
}

int PolyForm::max_poly_degree() const {
    return degree == 1 ? std::max(f.degree(), g.degree()) : h.degree();
}

PolyForm exterior_derivative(const PolyForm& w) {
    if (w.degree != 1) throw DimensionError("exterior derivative of a 2-form vanishes in the plane");
    return PolyForm::two_form(w.g.dx() - w.f.dy());
}

PolyForm random_form(int form_degree, int max_degree, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-5, 5);
    auto make = [&] {
        Poly p;
        for (int i = 0; i <= max_degree; ++i)
            for (int j = 0; i + j <= max_degree; ++j) {
                Rational c(coef(rng), 1 + static_cast<unsigned long>(rng() % 3));
                c.canonicalize();
                p += Poly::monomial(c, i, j);
            }
        return p;
    };
    if (form_degree == 1) {
        Poly f = make();
        Poly g = make();
        return PolyForm::one_form(std::move(f), std::move(g));
    }
    return PolyForm::two_form(make());
}

namespace {

// Univariate polynomial in t as coefficient vector.
using UPoly = std::vector<Rational>;

UPoly umul(const UPoly& a, const UPoly& b) {
    UPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

std::vector<UPoly> upowers(const UPoly& base, int n) {
    std::vector<UPoly> p{UPoly{Rational(1)}};
    for (int k = 1; k <= n; ++k) p.push_back(umul(p.back(), base));
    return p;
}

Rational integrate_unit(const UPoly& p) {
    Rational s = 0;
    for (std::size_t k = 0; k < p.size(); ++k) s += p[k] / Rational(static_cast<long>(k + 1));
    return s;
}

UPoly compose(const Poly& f, const std::vector<UPoly>& xp, const std::vector<UPoly>& yp) {
    UPoly r{Rational(0)};
    for (const auto& [e, c] : f.terms()) {
        UPoly t = umul(xp[e.first], yp[e.second]);
        if (t.size() > r.size()) r.resize(t.size(), Rational(0));
        for (std::size_t k = 0; k < t.size(); ++k) r[k] += c * t[k];
    }
    return r;
}

// Bivariate polynomial in (u, v): dense square array.
using BPoly = std::vector<std::vector<Rational>>;

BPoly bmul(const BPoly& a, const BPoly& b) {
    std::size_t n = a.size() + b.size() - 1;
    BPoly r(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            if (a[i][j] == 0) continue;
            for (std::size_t k = 0; k < b.size(); ++k)
                for (std::size_t l = 0; l < b[k].size(); ++l)
                    if (b[k][l] != 0) r[i + k][j + l] += a[i][j] * b[k][l];
        }
    return r;
}

Rational factorial(int n) {
    Rational f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// ∫ h over triangle (p0, p1, p2), signed by orientation.
Rational triangle_integral(const Poly& h, const Point& p0, const Point& p1, const Point& p2) {
    int deg = h.degree();
    Rational e1x = p1.x() - p0.x(), e1y = p1.y() - p0.y();
    Rational e2x = p2.x() - p0.x(), e2y = p2.y() - p0.y();
    Rational det = e1x * e2y - e1y * e2x;
    if (det == 0) return 0;
    BPoly X{{p0.x(), e2x}, {e1x, Rational(0)}};
    BPoly Y{{p0.y(), e2y}, {e1y, Rational(0)}};
    std::vector<BPoly> xp{BPoly{{Rational(1)}}}, yp{BPoly{{Rational(1)}}};
    for (int k = 1; k <= deg; ++k) {
        xp.push_back(bmul(xp.back(), X));
        yp.push_back(bmul(yp.back(), Y));
    }
    Rational s = 0;
    for (const auto& [e, c] : h.terms()) {
        BPoly t = bmul(xp[e.first], yp[e.second]);
        for (std::size_t a = 0; a < t.size(); ++a)
            for (std::size_t b = 0; b < t[a].size(); ++b)
                if (t[a][b] != 0)
                    s += c * t[a][b] * factorial(static_cast<int>(a)) * factorial(static_cast<int>(b)) /
                         factorial(static_cast<int>(a + b + 2));
    }
    return s * det;
}

}  // namespace

Rational pair(const PLCurrent& c, const PolyForm& w) {
    if (w.degree != 1) throw DimensionError("1-current paired with a form of degree " + std::to_string(w.degree));
    int deg = std::max(w.f.degree(), w.g.degree());
    Rational total = 0;
    for (const auto& s : c.segments()) {
        Rational dx = s.b.x() - s.a.x(), dy = s.b.y() - s.a.y();
        auto xp = upowers(UPoly{s.a.x(), dx}, deg);
        auto yp = upowers(UPoly{s.a.y(), dy}, deg);
        Rational v = integrate_unit(compose(w.f, xp, yp)) * dx + integrate_unit(compose(w.g, xp, yp)) * dy;
        total += v * s.mult;
    }
    return total;
}

Rational pair(const PLRegion& r, const PolyForm& w) {
    if (w.degree != 2) throw DimensionError("2-current paired with a form of degree " + std::to_string(w.degree));
    Rational total = 0;
    for (const auto& p : r.polygons()) {
        Rational s = 0;
        const auto& v = p.vertices;
        for (std::size_t i = 1; i + 1 < v.size(); ++i) s += triangle_integral(w.h, v[0], v[i], v[i + 1]);
        total += s * p.mult;
    }
    return total;
}

}  // namespace flatnorm
