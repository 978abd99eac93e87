#include "bdlab/coeff.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bdlab/errors.hpp"

namespace bdlab {

namespace {
std::atomic<std::int64_t> g_degree_cap{64};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && s[b] == ' ') ++b;
  while (e > b && s[e - 1] == ' ') --e;
  return std::string(s.substr(b, e - b));
}
}  // namespace

std::int64_t degree_cap() { return g_degree_cap.load(std::memory_order_relaxed); }

void set_degree_cap(std::int64_t cap) {
  if (cap < 1) throw InvalidInput("degree cap must be positive");
  g_degree_cap.store(cap, std::memory_order_relaxed);
}

void check_degree(std::int64_t degree, const char* what) {
  if (degree > degree_cap() || degree < -degree_cap()) {
    throw ResourceLimit(std::string(what) + "-degree " + std::to_string(degree) + " exceeds the cap " +
                        std::to_string(degree_cap()));
  }
}

// --- Angle --------------------------------------------------------------------

Angle Angle::divided_by(std::int64_t p) const {
  if (p == 0) throw InvalidInput("angle divided by zero");
  return Angle{q / make_rational(p), r / make_rational(p)};
}

Angle Angle::times(std::int64_t p) const { return Angle{q * make_rational(p), r * make_rational(p)}; }

Angle parse_angle(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw InvalidInput("empty angle");
  Angle out{0, 0};
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-' || s[pos] == ' ')) {
      if (s[pos] == '-') sign = -sign;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    const std::string term = trim(std::string_view(s).substr(pos, end - pos));
    if (term.empty()) throw InvalidInput("malformed angle '" + s + "'");
    const auto at = term.find("theta");
    if (at == std::string::npos) {
      out.q += sign * parse_rational(term);
    } else {
      std::string prefix = trim(std::string_view(term).substr(0, at));
      if (!prefix.empty() && prefix.back() == '*') prefix = trim(std::string_view(prefix).substr(0, prefix.size() - 1));
      Rational coeff = prefix.empty() ? Rational(1) : parse_rational(prefix);
      const std::string suffix = trim(std::string_view(term).substr(at + 5));
      if (!suffix.empty()) {
        if (suffix.front() != '/') throw InvalidInput("malformed angle '" + s + "'");
        const Rational div = parse_rational(suffix.substr(1));
        if (sgn(div) == 0) throw InvalidInput("angle divided by zero");
        coeff /= div;
      }
      out.r += sign * coeff;
    }
    pos = end;
  }
  return out;
}

std::string to_string(const Angle& a) {
  std::string out;
  if (sgn(a.q) != 0) out = to_string(a.q);
  if (sgn(a.r) != 0) {
    if (!out.empty()) out += sgn(a.r) > 0 ? "+" : "";
    if (a.r == -1) {
      out += "-theta";
    } else if (a.r != 1) {
      out += to_string(a.r) + "*theta";
    } else {
      out += "theta";
    }
  }
  return out.empty() ? "0" : out;
}

nlohmann::json to_json(const Angle& a) { return {{"q", to_string(a.q)}, {"r", to_string(a.r)}}; }

Angle angle_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_angle(j.get<std::string>());
  if (!j.is_object() || !j.contains("q") || !j.contains("r")) throw InvalidInput("angle must be {\"q\",\"r\"}");
  return Angle{parse_rational(j.at("q").get<std::string>()), parse_rational(j.at("r").get<std::string>())};
}

Scalar random_scalar(Rng& rng) {
  static const Rational kRoots[] = {0, 0, 0, make_rational(1, 2), make_rational(1, 4), make_rational(3, 4),
                                    make_rational(1, 3)};
  static const std::int64_t kThetas[] = {0, 0, 0, 0, 1, -1};
  Scalar s;
  const auto terms = uniform_int(rng, 1, 2);
  for (std::int64_t i = 0; i < terms; ++i) {
    std::int64_t num = uniform_int(rng, -3, 3);
    if (num == 0) num = 1;
    const auto den = uniform_int(rng, 1, 2);
    const auto& root = kRoots[uniform_int(rng, 0, std::size(kRoots) - 1)];
    const auto theta = kThetas[uniform_int(rng, 0, std::size(kThetas) - 1)];
    s = s + Scalar::term(make_rational(num, den), root, make_rational(theta));
  }
  return s;
}

// --- CircleRotation -----------------------------------------------------------

namespace {
void accumulate(CircleFunction& f, std::int64_t power, const Scalar& c) {
  if (c.is_zero()) return;
  auto it = f.coeffs.find(power);
  if (it == f.coeffs.end()) {
    f.coeffs.emplace(power, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) f.coeffs.erase(it);
}
}  // namespace

CircleFunction CircleRotation::monomial(const Scalar& c, std::int64_t power) const {
  check_degree(power, "z");
  CircleFunction f;
  if (!c.is_zero()) f.coeffs.emplace(power, c);
  return f;
}

CircleFunction CircleRotation::add(const Element& x, const Element& y) const {
  CircleFunction out = x;
  for (const auto& [p, c] : y.coeffs) accumulate(out, p, c);
  return out;
}

CircleFunction CircleRotation::sub(const Element& x, const Element& y) const { return add(x, neg(y)); }

CircleFunction CircleRotation::neg(const Element& x) const {
  CircleFunction out = x;
  for (auto& [p, c] : out.coeffs) c = -c;
  return out;
}

CircleFunction CircleRotation::mul(const Element& x, const Element& y) const {
  CircleFunction out;
  for (const auto& [p, a] : x.coeffs) {
    for (const auto& [q, b] : y.coeffs) {
      check_degree(p + q, "z");
      accumulate(out, p + q, a * b);
    }
  }
  return out;
}

CircleFunction CircleRotation::scale(const Scalar& c, const Element& x) const {
  CircleFunction out;
  if (c.is_zero()) return out;
  for (const auto& [p, a] : x.coeffs) accumulate(out, p, c * a);
  return out;
}

CircleFunction CircleRotation::star(const Element& x) const {
  CircleFunction out;
  for (const auto& [p, c] : x.coeffs) out.coeffs.emplace(-p, c.star());
  return out;
}

CircleFunction CircleRotation::alpha_power(const Element& x, std::int64_t m) const {
  if (m == 0) return x;
  CircleFunction out;
  for (const auto& [p, c] : x.coeffs) {
    const Rational pm = make_rational(-p) * make_rational(m);
    out.coeffs.emplace(p, c * Scalar::term(1, pm * angle_.q, pm * angle_.r));
  }
  return out;
}

Scalar CircleRotation::trace0(const Element& x) const {
  auto it = x.coeffs.find(0);
  return it == x.coeffs.end() ? Scalar() : it->second;
}

CircleFunction CircleRotation::sample(Rng& rng, const SampleOptions& opts) const {
  CircleFunction out;
  const auto terms = uniform_int(rng, 1, opts.max_terms);
  for (std::int64_t i = 0; i < terms; ++i) {
    accumulate(out, uniform_int(rng, -opts.max_degree, opts.max_degree), random_scalar(rng));
  }
  return out;
}

std::complex<double> CircleRotation::evaluate(const Element& x, double theta0, double s) const {
  std::complex<double> sum = 0.0;
  for (const auto& [p, c] : x.coeffs) {
    sum += c.evaluate(theta0) * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(p) * s);
  }
  return sum;
}

nlohmann::json CircleRotation::to_json(const Element& x) const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [p, c] : x.coeffs) out["z:" + std::to_string(p)] = bdlab::to_json(c);
  return out;
}

CircleFunction CircleRotation::from_json(const nlohmann::json& j) const {
  if (!j.is_object()) throw InvalidInput("circle function must be an object {\"z:<m>\": scalar}");
  CircleFunction out;
  for (const auto& [key, value] : j.items()) {
    if (key.rfind("z:", 0) != 0) throw InvalidInput("circle function key must look like \"z:<m>\": " + key);
    std::int64_t p = 0;
    try {
      std::size_t used = 0;
      p = std::stoll(key.substr(2), &used);
      if (used != key.size() - 2) throw InvalidInput("bad key");
    } catch (const std::exception&) {
      throw InvalidInput("bad circle function key: " + key);
    }
    check_degree(p, "z");
    accumulate(out, p, scalar_from_json(value));
  }
  return out;
}

nlohmann::json CircleRotation::describe() const {
  return {{"algebra", std::string(tag())}, {"angle", bdlab::to_json(angle_)}};
}

// --- FiniteCyclicShift --------------------------------------------------------

FiniteCyclicShift::FiniteCyclicShift(std::int64_t d) : d_(d) {
  if (d < 1) throw InvalidInput("cyclic modulus must be positive");
}

void FiniteCyclicShift::check(const Element& x) const {
  if (x.modulus() != d_) {
    throw InvalidInput("cyclic function has modulus " + std::to_string(x.modulus()) + ", expected " +
                       std::to_string(d_));
  }
}

FiniteCyclicFunction FiniteCyclicShift::zero() const {
  return FiniteCyclicFunction{std::vector<Scalar>(static_cast<std::size_t>(d_))};
}

FiniteCyclicFunction FiniteCyclicShift::constant(const Scalar& c) const {
  return FiniteCyclicFunction{std::vector<Scalar>(static_cast<std::size_t>(d_), c)};
}

FiniteCyclicFunction FiniteCyclicShift::point(std::int64_t i, const Scalar& c) const {
  FiniteCyclicFunction f = zero();
  f.values[static_cast<std::size_t>(floor_mod(i, d_))] = c;
  return f;
}

FiniteCyclicFunction FiniteCyclicShift::add(const Element& x, const Element& y) const {
  check(x);
  check(y);
  FiniteCyclicFunction out = x;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = out.values[i] + y.values[i];
  return out;
}

FiniteCyclicFunction FiniteCyclicShift::sub(const Element& x, const Element& y) const { return add(x, neg(y)); }

FiniteCyclicFunction FiniteCyclicShift::neg(const Element& x) const {
  check(x);
  FiniteCyclicFunction out = x;
  for (auto& v : out.values) v = -v;
  return out;
}

FiniteCyclicFunction FiniteCyclicShift::mul(const Element& x, const Element& y) const {
  check(x);
  check(y);
  FiniteCyclicFunction out = x;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = out.values[i] * y.values[i];
  return out;
}

FiniteCyclicFunction FiniteCyclicShift::scale(const Scalar& c, const Element& x) const {
  check(x);
  FiniteCyclicFunction out = x;
  for (auto& v : out.values) v = c * v;
  return out;
}

FiniteCyclicFunction FiniteCyclicShift::star(const Element& x) const {
  check(x);
  FiniteCyclicFunction out = x;
  for (auto& v : out.values) v = v.star();
  return out;
}

FiniteCyclicFunction FiniteCyclicShift::alpha_power(const Element& x, std::int64_t m) const {
  check(x);
  FiniteCyclicFunction out = zero();
  for (std::int64_t i = 0; i < d_; ++i) {
    out.values[static_cast<std::size_t>(i)] = x.values[static_cast<std::size_t>(floor_mod(i - m, d_))];
  }
  return out;
}

Scalar FiniteCyclicShift::trace0(const Element& x) const {
  check(x);
  Scalar sum;
  for (const auto& v : x.values) sum = sum + v;
  return sum * Scalar(make_rational(1, d_));
}

bool FiniteCyclicShift::is_zero(const Element& x) const {
  return std::all_of(x.values.begin(), x.values.end(), [](const Scalar& s) { return s.is_zero(); });
}

FiniteCyclicFunction FiniteCyclicShift::sample(Rng& rng, const SampleOptions& /*opts*/) const {
  FiniteCyclicFunction out = zero();
  for (auto& v : out.values) {
    if (coin(rng, 0.7)) v = random_scalar(rng);
  }
  return out;
}

nlohmann::json FiniteCyclicShift::to_json(const Element& x) const {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& v : x.values) values.push_back(bdlab::to_json(v));
  return {{"d", x.modulus()}, {"values", values}};
}

FiniteCyclicFunction FiniteCyclicShift::from_json(const nlohmann::json& j) const {
  if (!j.is_object() || !j.contains("d") || !j.contains("values") || !j.at("values").is_array()) {
    throw InvalidInput("cyclic function must be {\"d\": d, \"values\": [...]}");
  }
  if (j.at("d").get<std::int64_t>() != d_ || static_cast<std::int64_t>(j.at("values").size()) != d_) {
    throw InvalidInput("cyclic function modulus does not match the algebra (d = " + std::to_string(d_) + ")");
  }
  FiniteCyclicFunction out;
  for (const auto& v : j.at("values")) out.values.push_back(scalar_from_json(v));
  return out;
}

nlohmann::json FiniteCyclicShift::describe() const {
  return {{"algebra", std::string(tag())}, {"modulus", d_}};
}

std::optional<std::vector<std::int64_t>> cyclic_invariant_ideal_search(std::int64_t d, std::int64_t n) {
  if (d < 1 || n < 1) throw InvalidInput("cyclic_invariant_ideal_search needs d, n >= 1");
  std::vector<std::int64_t> orbit_of(static_cast<std::size_t>(d), -1);
  std::vector<std::vector<std::int64_t>> orbits;
  for (std::int64_t start = 0; start < d; ++start) {
    if (orbit_of[static_cast<std::size_t>(start)] >= 0) continue;
    std::vector<std::int64_t> orbit;
    for (std::int64_t i = start; orbit_of[static_cast<std::size_t>(i)] < 0; i = (i + n) % d) {
      orbit_of[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(orbits.size());
      orbit.push_back(i);
    }
    orbits.push_back(std::move(orbit));
  }
  if (orbits.size() < 2) return std::nullopt;
  // Invariant subsets are exactly the unions of orbits; any single orbit is a
  // nonempty proper one once there are at least two.
  std::vector<std::int64_t> subset = orbits.front();
  std::sort(subset.begin(), subset.end());
  return subset;
}

}  // namespace bdlab
