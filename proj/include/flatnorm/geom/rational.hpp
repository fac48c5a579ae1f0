#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace flatnorm {

using Rational = mpq_class;
using Integer = mpz_class;

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact value of a finite double.
Rational from_double(double v);

// Accepts "p/q", integers, and decimal/scientific literals ("0.25", "1e-3").
// Decimal literals are read exactly (0.1 is 1/10, not the nearest double).
Rational parse_rational(const std::string& text);

// "p" or "p/q".
std::string to_string(const Rational& r);

double to_double(const Rational& r);

// Nearest multiple of 2^-bits, ties away from zero.
Rational round_dyadic(const Rational& r, int bits);
Rational round_dyadic(double v, int bits);

Rational pow2(int e);

std::int64_t to_int64(const Integer& z);

inline Rational from_int64(std::int64_t v) {
    static_assert(sizeof(long) == 8);
    return Rational(static_cast<long>(v));
}

}  // namespace flatnorm
