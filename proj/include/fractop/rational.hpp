#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fractop {

// Exact, always-canonical rational (arbitrary precision).
using Rational = mpq_class;

// Parses "num/den" or "num". Throws Error(InvalidInput) on malformed text or zero denominator.
Rational parse_rational(std::string_view text);

// Machine form: always "num/den", denominator included even when it is 1.
std::string to_string(const Rational& r);

// Human form with `digits` significant digits.
std::string to_decimal(const Rational& r, int digits = 6);

double to_double(const Rational& r);

Rational abs(const Rational& r);

// 3^k, 2^k etc. as exact rationals.
Rational rational_pow(const Rational& base, unsigned exp);

// Exact floor of a rational.
mpz_class floor(const Rational& r);

}  // namespace fractop
