#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace bdlab {

/// Arbitrary precision rational, always kept in lowest terms with positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// Parses "p/q" or "p" (any sign, any common factor); the result is canonical.
Rational parse_rational(std::string_view text);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& r);

/// x - floor(x), in [0, 1).
Rational fractional_part(const Rational& x);

Integer floor(const Rational& x);

/// Narrowing with range check; throws InvalidInput if the value does not fit.
std::int64_t to_int64(const Integer& z);

std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t floor_mod(std::int64_t a, std::int64_t b);

}  // namespace bdlab
