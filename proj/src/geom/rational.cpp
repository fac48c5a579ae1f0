#include "flatnorm/geom/rational.hpp"

#include <cctype>
#include <cmath>

namespace flatnorm {

Rational from_double(double v) {
    if (!std::isfinite(v)) throw GeometryError("non-finite coordinate");
    Rational r(v);
    r.canonicalize();
    return r;
}

Rational pow2(int e) {
    Rational r(1);
    if (e >= 0)
        mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    return r;
}

Rational parse_rational(const std::string& raw) {
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) text += c;
    if (text.empty()) throw GeometryError("empty number");

    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational r;
        try {
            Integer num(text.substr(0, slash), 10);
            Integer den(text.substr(slash + 1), 10);
            if (den == 0) throw GeometryError("zero denominator in '" + raw + "'");
            r = Rational(num, den);
        } catch (const std::invalid_argument&) {
            throw GeometryError("bad rational '" + raw + "'");
        }
        r.canonicalize();
        return r;
    }

    std::size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false, any = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            any = true;
            if (seen_dot) ++frac_digits;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!any) throw GeometryError("bad number '" + raw + "'");
    long exponent = 0;
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') throw GeometryError("bad number '" + raw + "'");
        std::size_t used = 0;
        try {
            exponent = std::stol(text.substr(i + 1), &used);
        } catch (const std::exception&) {
            throw GeometryError("bad exponent in '" + raw + "'");
        }
        if (i + 1 + used != text.size()) throw GeometryError("bad number '" + raw + "'");
    }
    Integer mant(digits, 10);
    long e10 = exponent - frac_digits;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(e10)));
    Rational r = e10 >= 0 ? Rational(mant * scale) : Rational(mant, scale);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return r.get_d(); }

Rational round_dyadic(const Rational& r, int bits) {
    Rational scaled = r * pow2(bits);
    Integer q, rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    // rem in [0, den): round half up, then mirror for negatives to get ties away from zero
    Integer twice = rem * 2;
    int c = cmp(twice, scaled.get_den());
    if (c > 0 || (c == 0 && r >= 0)) q += 1;
    Rational out(q);
    out *= pow2(-bits);
    out.canonicalize();
    return out;
}

Rational round_dyadic(double v, int bits) { return round_dyadic(from_double(v), bits); }

std::int64_t to_int64(const Integer& z) {
    if (!z.fits_slong_p()) throw GeometryError("integer does not fit in 64 bits");
    return z.get_si();
}

}  // namespace flatnorm
