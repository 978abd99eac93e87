#include "bdlab/rational.hpp"

#include <limits>

#include "bdlab/errors.hpp"

namespace bdlab {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  Rational r(Integer(std::to_string(num)), Integer(std::to_string(den)));
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw InvalidInput("empty rational");
  if (s.front() == '+') s.erase(s.begin());
  const auto slash = s.find('/');
  auto check_digits = [&](const std::string& part, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !part.empty() && part[0] == '-') i = 1;
    if (i >= part.size()) throw InvalidInput("malformed rational '" + std::string(text) + "'");
    for (; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') {
        throw InvalidInput("malformed rational '" + std::string(text) + "'");
      }
    }
  };
  if (slash == std::string::npos) {
    check_digits(s, true);
    return Rational(Integer(s));
  }
  const std::string num = s.substr(0, slash);
  const std::string den = s.substr(slash + 1);
  check_digits(num, true);
  check_digits(den, false);
  Integer d(den);
  if (d == 0) throw InvalidInput("rational with zero denominator");
  Rational r(Integer(num), d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

Integer floor(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Rational fractional_part(const Rational& x) { return x - Rational(floor(x)); }

std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw InvalidInput("integer out of 64-bit range: " + z.get_str());
  return static_cast<std::int64_t>(z.get_si());
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - b * floor_div(a, b); }

}  // namespace bdlab
