#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qperiod/errors.hpp"

namespace qperiod {

using Integer = mpz_class;

/// Exact rational. GMP keeps results of arithmetic canonical; values built
/// from a numerator/denominator pair must go through make_rational.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1)
{
    if (den == 0)
        throw UsageError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(const Integer& num, const Integer& den)
{
    if (den == 0)
        throw UsageError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p", "-p" or "p/q" with decimal integers.
inline Rational parse_rational(std::string_view text)
{
    std::string s(text);
    auto slash = s.find('/');
    Integer num, den = 1;
    try {
        if (slash == std::string::npos) {
            num = Integer(s, 10);
        } else {
            num = Integer(s.substr(0, slash), 10);
            den = Integer(s.substr(slash + 1), 10);
        }
    } catch (const std::invalid_argument&) {
        throw UsageError("malformed rational: '" + s + "'");
    }
    return make_rational(num, den);
}

inline std::string to_string(const Rational& q)
{
    return q.get_str(10);
}

inline std::string to_string(const Integer& n)
{
    return n.get_str(10);
}

inline Integer factorial(unsigned long n)
{
    Integer out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

inline Integer binomial(unsigned long n, unsigned long k)
{
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

/// q^e for any integer e; q must be nonzero when e < 0.
inline Rational pow(const Rational& q, long e)
{
    if (e < 0) {
        if (q == 0)
            throw UsageError("zero raised to a negative power");
        return pow(Rational(1) / q, -e);
    }
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
    return make_rational(num, den);
}

/// Multiplies every entry of `series` (coefficients of x^0, x^1, ...) by d!.
inline std::vector<Rational> regularise(const std::vector<Rational>& series)
{
    std::vector<Rational> out(series.size());
    for (std::size_t d = 0; d < series.size(); ++d)
        out[d] = series[d] * Rational(factorial(d));
    return out;
}

} // namespace qperiod
