#pragma once

#include <gmpxx.h>

#include <string>

#include "jetnorm/errors.hpp"

namespace jetnorm {

/// Exact rational coefficients. GMP keeps values canonical
/// (denominator > 0, gcd(num, den) = 1).
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rational(long num, long den = 1) {
    if (den == 0) throw DomainError("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p/q" or "p" with optional sign; anything else is a structural
/// error (floats are rejected by construction).
Rational parse_rational(const std::string& text);

/// Always emits an explicit denominator, e.g. "3/1", "-1/3".
std::string format_rational(const Rational& q);

Integer factorial(int n);

} // namespace jetnorm
