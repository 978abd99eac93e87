#include "bdlab/scalar.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bdlab/errors.hpp"

namespace bdlab {

namespace {

std::atomic<std::int64_t> g_max_conductor{1'000'000};

void check_conductor(const Integer& n) {
  if (n > max_conductor()) {
    throw ResourceLimit("root-of-unity denominator " + n.get_str() + " exceeds the conductor limit " +
                        std::to_string(max_conductor()));
  }
}

// Remainder of poly modulo Phi_n, after folding exponents modulo n. Length phi(n).
std::vector<Rational> reduce_mod_phi(std::int64_t n, std::vector<Rational> poly) {
  if (static_cast<std::int64_t>(poly.size()) > n) {
    for (std::size_t i = static_cast<std::size_t>(n); i < poly.size(); ++i) {
      if (sgn(poly[i]) != 0) poly[i % static_cast<std::size_t>(n)] += poly[i];
    }
    poly.resize(static_cast<std::size_t>(n));
  }
  const auto& phi = cyclotomic_polynomial(n);
  const std::size_t deg = phi.size() - 1;
  for (std::size_t top = poly.size(); top-- > deg;) {
    if (sgn(poly[top]) == 0) continue;
    const Rational c = poly[top];
    for (std::size_t i = 0; i <= deg; ++i) {
      if (phi[i] != 0) poly[top - deg + i] -= c * phi[i];
    }
  }
  poly.resize(deg);
  return poly;
}

}  // namespace

std::int64_t max_conductor() { return g_max_conductor.load(std::memory_order_relaxed); }

void set_max_conductor(std::int64_t limit) {
  if (limit < 1) throw InvalidInput("conductor limit must be positive");
  g_max_conductor.store(limit, std::memory_order_relaxed);
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t n) {
  thread_local std::map<std::int64_t, std::vector<std::int64_t>> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<std::int64_t> poly(static_cast<std::size_t>(n) + 1, 0);
  poly.front() = -1;
  poly.back() = 1;
  for (std::int64_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const auto& divisor = cyclotomic_polynomial(d);
    const std::size_t dd = divisor.size() - 1;
    std::vector<std::int64_t> quotient(poly.size() - dd, 0);
    for (std::size_t top = poly.size(); top-- > dd;) {
      const std::int64_t c = poly[top];
      quotient[top - dd] = c;
      if (c == 0) continue;
      for (std::size_t i = 0; i <= dd; ++i) poly[top - dd + i] -= c * divisor[i];
    }
    poly = std::move(quotient);
  }
  return cache.emplace(n, std::move(poly)).first->second;
}

// --- Cyclotomic ---------------------------------------------------------------

Cyclotomic::Cyclotomic() : conductor_(1), coords_(1) {}

Cyclotomic::Cyclotomic(const Rational& r) : conductor_(1), coords_{r} {}

Cyclotomic::Cyclotomic(std::int64_t conductor, std::vector<Rational> coords)
    : conductor_(conductor), coords_(std::move(coords)) {}

Cyclotomic Cyclotomic::normalized(std::int64_t n, std::vector<Rational> poly) {
  for (;;) {
    std::vector<Rational> coords = reduce_mod_phi(n, std::move(poly));
    std::int64_t g = n;
    bool any = false;
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (sgn(coords[j]) != 0) {
        g = std::gcd(g, static_cast<std::int64_t>(j));
        any = true;
      }
    }
    if (!any) return Cyclotomic();
    if (g == 1) return Cyclotomic(n, std::move(coords));
    const std::int64_t smaller = n / g;
    poly.assign(static_cast<std::size_t>(smaller), Rational(0));
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (sgn(coords[j]) != 0) poly[j / static_cast<std::size_t>(g)] = coords[j];
    }
    n = smaller;
  }
}

Cyclotomic Cyclotomic::root_of_unity(const Rational& exponent) {
  const Rational f = fractional_part(exponent);
  check_conductor(f.get_den());
  const std::int64_t n = to_int64(f.get_den());
  std::vector<Rational> poly(static_cast<std::size_t>(n));
  poly[static_cast<std::size_t>(to_int64(f.get_num()))] = 1;
  return normalized(n, std::move(poly));
}

std::vector<Rational> Cyclotomic::lifted(std::int64_t target) const {
  if (target == conductor_) return coords_;
  const std::int64_t step = target / conductor_;
  std::vector<Rational> poly(static_cast<std::size_t>(target));
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (sgn(coords_[j]) != 0) poly[j * static_cast<std::size_t>(step)] = coords_[j];
  }
  return reduce_mod_phi(target, std::move(poly));
}

bool Cyclotomic::is_zero() const {
  for (const auto& c : coords_) {
    if (sgn(c) != 0) return false;
  }
  return true;
}

std::vector<std::pair<Rational, Rational>> Cyclotomic::terms() const {
  std::vector<std::pair<Rational, Rational>> out;
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (sgn(coords_[j]) == 0) continue;
    Rational root(Integer(static_cast<long>(j)), Integer(static_cast<long>(conductor_)));
    root.canonicalize();
    out.emplace_back(root, coords_[j]);
  }
  return out;
}

Cyclotomic Cyclotomic::conj() const {
  std::vector<Rational> poly(static_cast<std::size_t>(conductor_));
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (sgn(coords_[j]) == 0) continue;
    poly[(static_cast<std::size_t>(conductor_) - j) % static_cast<std::size_t>(conductor_)] = coords_[j];
  }
  return normalized(conductor_, std::move(poly));
}

std::complex<double> Cyclotomic::evaluate() const {
  std::complex<double> sum = 0.0;
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (sgn(coords_[j]) == 0) continue;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(conductor_);
    sum += coords_[j].get_d() * std::polar(1.0, angle);
  }
  return sum;
}

Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
  const std::int64_t n = std::lcm(a.conductor_, b.conductor_);
  std::vector<Rational> x = a.lifted(n);
  const std::vector<Rational> y = b.lifted(n);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  return Cyclotomic::normalized(n, std::move(x));
}

Cyclotomic Cyclotomic::operator-() const {
  Cyclotomic r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return a + (-b); }

Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.conductor_ == 1 && b.conductor_ == 1) return Cyclotomic(a.coords_[0] * b.coords_[0]);
  const std::int64_t n = std::lcm(a.conductor_, b.conductor_);
  const std::vector<Rational> x = a.lifted(n);
  const std::vector<Rational> y = b.lifted(n);
  std::vector<Rational> prod(x.size() + y.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (sgn(y[j]) != 0) prod[i + j] += x[i] * y[j];
    }
  }
  return Cyclotomic::normalized(n, std::move(prod));
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
  if (a.conductor_ == b.conductor_) return a.coords_ == b.coords_;
  const std::int64_t n = std::lcm(a.conductor_, b.conductor_);
  return a.lifted(n) == b.lifted(n);
}

// --- Scalar -------------------------------------------------------------------

Scalar::Scalar(const Rational& r) {
  if (sgn(r) != 0) parts_.emplace(Rational(0), Cyclotomic(r));
}

Scalar::Scalar(std::int64_t n) : Scalar(make_rational(n)) {}

Scalar Scalar::root_of_unity(const Rational& exponent) { return term(1, exponent, 0); }

Scalar Scalar::theta_power(const Rational& exponent) { return term(1, 0, exponent); }

Scalar Scalar::term(const Rational& coeff, const Rational& root, const Rational& theta) {
  Scalar s;
  if (sgn(coeff) == 0) return s;
  Cyclotomic c = Cyclotomic(coeff) * Cyclotomic::root_of_unity(root);
  s.parts_.emplace(theta, std::move(c));
  return s;
}

Scalar Scalar::star() const {
  Scalar s;
  for (const auto& [theta, c] : parts_) s.parts_.emplace(-theta, c.conj());
  return s;
}

std::complex<double> Scalar::evaluate(double theta0) const {
  std::complex<double> sum = 0.0;
  for (const auto& [theta, c] : parts_) {
    sum += c.evaluate() * std::polar(1.0, 2.0 * std::numbers::pi * theta0 * theta.get_d());
  }
  return sum;
}

bool Scalar::is_rational() const {
  if (parts_.empty()) return true;
  if (parts_.size() != 1) return false;
  const auto& [theta, c] = *parts_.begin();
  return sgn(theta) == 0 && c.conductor() == 1;
}

Rational Scalar::rational_value() const {
  if (parts_.empty()) return 0;
  return parts_.begin()->second.coordinates().front();
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Scalar s = a;
  for (const auto& [theta, c] : b.parts_) {
    auto it = s.parts_.find(theta);
    if (it == s.parts_.end()) {
      s.parts_.emplace(theta, c);
      continue;
    }
    Cyclotomic sum = it->second + c;
    if (sum.is_zero()) {
      s.parts_.erase(it);
    } else {
      it->second = std::move(sum);
    }
  }
  return s;
}

Scalar Scalar::operator-() const {
  Scalar s = *this;
  for (auto& [theta, c] : s.parts_) c = -c;
  return s;
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar s;
  if (a.is_zero() || b.is_zero()) return s;
  for (const auto& [ta, ca] : a.parts_) {
    for (const auto& [tb, cb] : b.parts_) {
      Scalar t;
      t.parts_.emplace(ta + tb, ca * cb);
      if (t.parts_.begin()->second.is_zero()) continue;
      s = s + t;
    }
  }
  return s;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.parts_.size() != b.parts_.size()) return false;
  auto ia = a.parts_.begin();
  auto ib = b.parts_.begin();
  for (; ia != a.parts_.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  }
  return true;
}

nlohmann::json to_json(const Scalar& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [theta, c] : s.parts()) {
    for (const auto& [root, coeff] : c.terms()) {
      out.push_back({{"coeff", to_string(coeff)}, {"root", to_string(root)}, {"theta", to_string(theta)}});
    }
  }
  return out;
}

Scalar scalar_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Scalar(parse_rational(j.get<std::string>()));
  if (j.is_number_integer()) return Scalar(make_rational(j.get<std::int64_t>()));
  if (!j.is_array()) throw InvalidInput("scalar must be an array of terms");
  Scalar s;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("coeff")) throw InvalidInput("scalar term needs a \"coeff\" field");
    const auto field = [&](const char* key) -> Rational {
      if (!t.contains(key)) return 0;
      if (!t.at(key).is_string()) throw InvalidInput(std::string("scalar term field \"") + key + "\" must be a string");
      return parse_rational(t.at(key).get<std::string>());
    };
    s = s + Scalar::term(field("coeff"), field("root"), field("theta"));
  }
  return s;
}

}  // namespace bdlab
