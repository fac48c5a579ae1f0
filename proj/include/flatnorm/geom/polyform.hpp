#pragma once

#include "flatnorm/geom/current.hpp"

#include <map>
#include <random>
#include <utility>

namespace flatnorm {

// Polynomial in x, y with rational coefficients, keyed by exponent pair.
class Poly {
public:
    Poly() = default;
    static Poly constant(const Rational& c);
    static Poly monomial(const Rational& c, int i, int j);

    const std::map<std::pair<int, int>, Rational>& terms() const { return terms_; }
    int degree() const;
    Rational eval(const Point& p) const;
    Poly dx() const;
    Poly dy() const;

    Poly& operator+=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(const Poly& a, const Poly& b);
    friend Poly operator*(const Rational& s, const Poly& p);

private:
    void set(int i, int j, const Rational& c);
    std::map<std::pair<int, int>, Rational> terms_;
};

// A 1-form f dx + g dy (degree 1) or a 2-form h dx^dy (degree 2).
struct PolyForm {
    int degree = 1;
    Poly f, g, h;

    static PolyForm one_form(Poly f, Poly g) { return {1, std::move(f), std::move(g), {}}; }
    static PolyForm two_form(Poly h) { return {2, {}, {}, std::move(h)}; }
    int max_poly_degree() const;
};

PolyForm exterior_derivative(const PolyForm& w);

// Random form with small integer coefficients and polynomial degree <= max_degree.
PolyForm random_form(int form_degree, int max_degree, std::mt19937_64& rng);

struct DimensionError : GeometryError {
    using GeometryError::GeometryError;
};

Rational pair(const PLCurrent& c, const PolyForm& w);
Rational pair(const PLRegion& r, const PolyForm& w);

}  // namespace flatnorm
