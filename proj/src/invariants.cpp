#include "bdlab/invariants.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "bdlab/errors.hpp"

namespace bdlab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_int(const std::string& s, const char* what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput(std::string("malformed ") + what + ": '" + s + "'");
  }
  if (used != s.size()) throw InvalidInput(std::string("malformed ") + what + ": '" + s + "'");
  return v;
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

std::int64_t add_exponents(std::int64_t a, std::int64_t b) {
  if (a == SupernaturalNumber::kInfinite || b == SupernaturalNumber::kInfinite) return SupernaturalNumber::kInfinite;
  return a + b;
}

/// a <= b with infinity largest.
bool exponent_le(std::int64_t a, std::int64_t b) {
  if (b == SupernaturalNumber::kInfinite) return true;
  if (a == SupernaturalNumber::kInfinite) return false;
  return a <= b;
}

std::string exponent_string(std::int64_t e) { return e == SupernaturalNumber::kInfinite ? "inf" : std::to_string(e); }

nlohmann::json factors_json(const std::map<std::int64_t, std::int64_t>& factors) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [p, e] : factors) {
    out[std::to_string(p)] = e == SupernaturalNumber::kInfinite ? nlohmann::json("inf") : nlohmann::json(e);
  }
  return out;
}

Interval affine(const Rational& q, std::int64_t m, const Interval& theta) {
  const Rational mm = make_rational(m);
  Interval out{q + mm * theta.lo, q + mm * theta.hi};
  if (out.hi < out.lo) std::swap(out.lo, out.hi);
  return out;
}

}  // namespace

// --- Supernatural numbers -------------------------------------------------------

bool SupernaturalNumber::infinite(std::int64_t p) const { return exponent(p) == kInfinite; }

std::int64_t SupernaturalNumber::exponent(std::int64_t p) const {
  const auto it = factors.find(p);
  return it == factors.end() ? 0 : it->second;
}

bool SupernaturalNumber::same_factors(const SupernaturalNumber& other) const { return factors == other.factors; }

std::map<std::int64_t, std::int64_t> factorize(std::int64_t n) {
  if (n < 1) throw InvalidInput("factorize needs n >= 1");
  std::map<std::int64_t, std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

SupernaturalNumber supernatural_from_sequence(const std::vector<std::int64_t>& sizes,
                                              const std::optional<std::set<std::int64_t>>& tail) {
  const StageSequence seq(sizes);
  SupernaturalNumber out;
  for (const auto n : seq.sizes()) {
    for (const auto& [p, e] : factorize(n)) out.factors[p] = std::max(out.factors[p], e);
  }
  if (tail) {
    for (const auto p : *tail) {
      if (!is_prime(p)) throw InvalidInput("declared tail entry is not a prime: " + std::to_string(p));
      out.factors[p] = SupernaturalNumber::kInfinite;
    }
  } else {
    out.finite_evidence = true;
  }
  return out;
}

SupernaturalNumber supernatural_times(const SupernaturalNumber& delta, std::int64_t p) {
  if (p < 1) throw InvalidInput("amplification factor must be >= 1");
  SupernaturalNumber out = delta;
  for (const auto& [q, e] : factorize(p)) out.factors[q] = add_exponents(out.exponent(q), e);
  return out;
}

bool supernatural_divides(const SupernaturalNumber& d1, const SupernaturalNumber& d2) {
  return std::all_of(d1.factors.begin(), d1.factors.end(),
                     [&](const auto& pe) { return exponent_le(pe.second, d2.exponent(pe.first)); });
}

SupernaturalNumber parse_supernatural(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw InvalidInput("empty supernatural number");
  if (s.rfind("seq:", 0) == 0) {
    std::string body = s.substr(4);
    std::optional<std::set<std::int64_t>> tail;
    const auto plus = body.find("+tail:");
    if (plus != std::string::npos) {
      tail.emplace();
      for (const auto& p : split(std::string_view(body).substr(plus + 6), ',')) tail->insert(parse_int(p, "prime"));
      body = body.substr(0, plus);
    }
    return supernatural_from_sequence(parse_sizes(body), tail);
  }
  SupernaturalNumber out;
  for (const auto& factor : split(s, '*')) {
    const auto caret = factor.find('^');
    const auto base = parse_int(factor.substr(0, caret), "supernatural factor");
    std::int64_t e = 1;
    if (caret != std::string::npos) {
      const std::string ex = trim(factor.substr(caret + 1));
      e = (ex == "inf" || ex == "infinity") ? SupernaturalNumber::kInfinite : parse_int(ex, "exponent");
      if (e != SupernaturalNumber::kInfinite && e < 0) throw InvalidInput("negative exponent in " + factor);
    }
    if (base < 1) throw InvalidInput("supernatural factor must be >= 1: " + factor);
    if (base == 1 || e == 0) continue;
    if (e == SupernaturalNumber::kInfinite) {
      for (const auto& [p, unused] : factorize(base)) out.factors[p] = SupernaturalNumber::kInfinite;
    } else {
      for (const auto& [p, k] : factorize(base)) out.factors[p] = add_exponents(out.exponent(p), k * e);
    }
  }
  return out;
}

std::string to_string(const SupernaturalNumber& d) {
  if (d.factors.empty()) return "1";
  std::string out;
  for (const auto& [p, e] : d.factors) {
    if (!out.empty()) out += "*";
    out += std::to_string(p) + "^" + exponent_string(e);
  }
  return out;
}

nlohmann::json to_json(const SupernaturalNumber& d) {
  return {{"factors", factors_json(d.factors)}, {"finiteEvidence", d.finite_evidence}};
}

SupernaturalNumber supernatural_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("factors") || !j.at("factors").is_object()) {
    throw InvalidInput("supernatural number must be {\"factors\": {...}, \"finiteEvidence\": bool}");
  }
  SupernaturalNumber out;
  for (const auto& [key, value] : j.at("factors").items()) {
    const auto p = parse_int(key, "prime");
    if (!is_prime(p)) throw InvalidInput("supernatural factor key is not a prime: " + key);
    if (value.is_string() && value.get<std::string>() == "inf") {
      out.factors[p] = SupernaturalNumber::kInfinite;
    } else if (value.is_number_integer() && value.get<std::int64_t>() >= 1) {
      out.factors[p] = value.get<std::int64_t>();
    } else {
      throw InvalidInput("supernatural exponent must be a positive integer or \"inf\"");
    }
  }
  out.finite_evidence = j.value("finiteEvidence", false);
  return out;
}

// --- Q(delta) ------------------------------------------------------------------

std::optional<std::map<std::int64_t, std::int64_t>> q_delta_witness(const Rational& r,
                                                                    const SupernaturalNumber& delta) {
  Integer den = r.get_den();
  std::map<std::int64_t, std::int64_t> used;
  for (const auto& [p, e] : delta.factors) {
    const Integer pp = p;
    std::int64_t k = 0;
    while (den % pp == 0) {
      den /= pp;
      ++k;
    }
    if (k == 0) continue;
    if (!exponent_le(k, e)) return std::nullopt;
    used[p] = k;
  }
  if (den != 1) return std::nullopt;
  return used;
}

bool q_delta_member(const Rational& r, const SupernaturalNumber& delta) { return q_delta_witness(r, delta).has_value(); }

std::optional<std::int64_t> q_delta_stage(const Rational& r, const StageSequence& seq) {
  for (std::int64_t k = 1; k <= seq.stages(); ++k) {
    if (Integer(seq.size(k)) % r.get_den() == 0) return k;
  }
  return std::nullopt;
}

// --- K-groups ------------------------------------------------------------------

K0Class operator+(const K0Class& x, const K0Class& y) { return K0Class{x.q + y.q, x.m + y.m}; }
K0Class operator-(const K0Class& x) { return K0Class{-x.q, -x.m}; }
nlohmann::json to_json(const K0Class& c) { return {{"q", to_string(c.q)}, {"m", c.m}}; }

K1Class operator+(const K1Class& x, const K1Class& y) { return K1Class{x.a + y.a, x.b + y.b}; }
nlohmann::json to_json(const K1Class& c) { return {{"a", to_string(c.a)}, {"b", c.b}}; }

K1Class k1_limit_normalize(const StageSequence& seq, std::int64_t k, const Integer& a, std::int64_t b) {
  Rational q(a, Integer(seq.size(k)));
  q.canonicalize();
  return K1Class{q, b};
}

// --- Theta enclosures ----------------------------------------------------------

ThetaEnclosure ThetaEnclosure::continued_fraction(std::vector<std::int64_t> prefix, std::vector<std::int64_t> period) {
  if (prefix.empty() && period.empty()) throw InvalidInput("continued fraction needs at least a_0");
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i > 0 && prefix[i] < 1) throw InvalidInput("continued fraction terms after a_0 must be >= 1");
  }
  for (const auto a : period) {
    if (a < 1) throw InvalidInput("continued fraction terms after a_0 must be >= 1");
  }
  struct Cache {
    std::mutex mutex;
    // (h_{-2}, h_{-1}, h_0, ...) and likewise for k.
    std::vector<Integer> h{0, 1};
    std::vector<Integer> k{1, 0};
  };
  auto cache = std::make_shared<Cache>();
  const auto term = [prefix, period](std::size_t i) -> std::optional<std::int64_t> {
    if (i < prefix.size()) return prefix[i];
    if (period.empty()) return std::nullopt;
    return period[(i - prefix.size()) % period.size()];
  };
  // Convergent c_i, or the last one when the expansion is finite.
  const auto convergent = [cache, term](std::size_t i) -> Rational {
    std::lock_guard<std::mutex> lock(cache->mutex);
    while (cache->h.size() < i + 3) {
      const std::size_t idx = cache->h.size() - 2;
      const auto a = term(idx);
      if (!a) break;
      const Integer ai = *a;
      cache->h.push_back(ai * cache->h[cache->h.size() - 1] + cache->h[cache->h.size() - 2]);
      cache->k.push_back(ai * cache->k[cache->k.size() - 1] + cache->k[cache->k.size() - 2]);
    }
    const std::size_t at = std::min(i + 2, cache->h.size() - 1);
    Rational c(cache->h[at], cache->k[at]);
    c.canonicalize();
    return c;
  };
  std::ostringstream name;
  name << "cf:";
  for (std::size_t i = 0; i < prefix.size(); ++i) name << (i ? "," : "") << prefix[i];
  if (!period.empty()) {
    name << ";";
    for (std::size_t i = 0; i < period.size(); ++i) name << (i ? "," : "") << period[i];
  }
  return ThetaEnclosure(
      [convergent](std::size_t step) {
        const Rational a = convergent(step), b = convergent(step + 1);
        return a <= b ? Interval{a, b} : Interval{b, a};
      },
      name.str());
}

ThetaEnclosure ThetaEnclosure::sqrt2_minus_1() {
  auto e = continued_fraction({0}, {2});
  e.name_ = "sqrt2-1";
  return e;
}

ThetaEnclosure ThetaEnclosure::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s == "sqrt2-1") return sqrt2_minus_1();
  if (s == "golden-1") {
    auto e = continued_fraction({0}, {1});
    e.name_ = "golden-1";
    return e;
  }
  if (s.rfind("cf:", 0) == 0) {
    const std::string body = s.substr(3);
    const auto semi = body.find(';');
    const auto parse_list = [](const std::string& part) {
      std::vector<std::int64_t> out;
      if (trim(part).empty()) return out;
      for (const auto& t : split(part, ',')) out.push_back(parse_int(t, "continued fraction term"));
      return out;
    };
    return continued_fraction(parse_list(body.substr(0, semi)),
                              semi == std::string::npos ? std::vector<std::int64_t>{} : parse_list(body.substr(semi + 1)));
  }
  throw InvalidInput("unknown theta enclosure '" + s + "' (use sqrt2-1, golden-1 or cf:a0,a1;p1,p2)");
}

Interval k0_tau_value(const K0Class& c, const ThetaEnclosure& theta, const Rational& precision, std::size_t budget) {
  if (precision <= 0) throw InvalidInput("precision must be positive");
  if (c.m == 0) return Interval{c.q, c.q};
  for (std::size_t step = 0; step < budget; ++step) {
    const Interval v = affine(c.q, c.m, theta.at(step));
    if (v.width() < precision) return v;
  }
  throw ResourceLimit("theta enclosure did not reach the requested precision within the refinement budget");
}

bool k0_positive(const K0Class& c, const ThetaEnclosure& theta, std::size_t budget) {
  if (c.m == 0) return c.q >= 0;
  for (std::size_t step = 0; step < budget; ++step) {
    const Interval v = affine(c.q, c.m, theta.at(step));
    if (v.lo > 0) return true;
    if (v.hi < 0) return false;
    if (v.width() == 0) return true;
  }
  throw ResourceLimit("theta enclosure did not separate the class from 0 within the refinement budget");
}

// --- Deciders ------------------------------------------------------------------

nlohmann::json to_json(const Decision& d) {
  return {{"answer", d.answer}, {"finiteEvidence", d.finite_evidence}, {"witness", d.witness}};
}

Decision decide_isomorphism(const Angle& theta1, const SupernaturalNumber& delta1, const Angle& theta2,
                            const SupernaturalNumber& delta2) {
  Decision out;
  out.finite_evidence = delta1.finite_evidence || delta2.finite_evidence;
  if (!delta1.same_factors(delta2)) {
    out.answer = "not-isomorphic";
    out.witness = {{"failing", "delta"}, {"delta1", to_string(delta1)}, {"delta2", to_string(delta2)}};
    return out;
  }
  const auto attempt = [&](const char* name, const Angle& combined) -> bool {
    if (combined.r != 0) return false;
    const auto w = q_delta_witness(combined.q, delta1);
    if (!w) return false;
    out.yes = true;
    out.answer = "isomorphic";
    out.witness = {{"case", name},
                   {"value", to_string(combined.q)},
                   {"denominator", combined.q.get_den().get_str()},
                   {"divides", factors_json(*w)}};
    return true;
  };
  const Angle diff{theta1.q - theta2.q, theta1.r - theta2.r};
  const Angle sum{theta1.q + theta2.q, theta1.r + theta2.r};
  if (attempt("difference", diff) || attempt("sum", sum)) return out;
  out.answer = "not-isomorphic";
  out.witness = {{"failing", "angle"},
                 {"difference", bdlab::to_json(diff)},
                 {"sum", bdlab::to_json(sum)},
                 {"delta", to_string(delta1)}};
  return out;
}

std::pair<Angle, SupernaturalNumber> decide_amplification(std::int64_t p, const Angle& theta,
                                                          const SupernaturalNumber& delta) {
  if (p < 1) throw InvalidInput("amplification factor must be >= 1");
  return {theta.divided_by(p), supernatural_times(delta, p)};
}

Decision decide_simplicity_finite_model(std::int64_t d, const StageSequence& seq) {
  for (std::int64_t k = 1; k <= seq.stages(); ++k) {
    if (const auto subset = cyclic_invariant_ideal_search(d, seq.size(k))) {
      return Decision{false, "not-simple", false, {{"stage", k}, {"n", seq.size(k)}, {"subset", *subset}}};
    }
  }
  return Decision{true, "simple", false, nlohmann::json::object()};
}

Decision decide_trace_uniqueness_finite_model(std::int64_t d, const StageSequence& seq) {
  if (d < 1) throw InvalidInput("modulus must be >= 1");
  for (std::int64_t k = 1; k <= seq.stages(); ++k) {
    const std::int64_t n = seq.size(k);
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    std::vector<std::vector<std::int64_t>> orbits;
    for (std::int64_t s = 0; s < d; ++s) {
      if (seen[static_cast<std::size_t>(s)]) continue;
      orbits.emplace_back();
      for (std::int64_t i = s; !seen[static_cast<std::size_t>(i)]; i = (i + n) % d) {
        seen[static_cast<std::size_t>(i)] = true;
        orbits.back().push_back(i);
      }
    }
    if (orbits.size() > 1) {
      return Decision{false, "not-unique", false, {{"stage", k}, {"n", n}, {"orbits", orbits}}};
    }
  }
  return Decision{true, "unique", false, nlohmann::json::object()};
}

Decision assert_trace_uniqueness_circle(const Angle& angle) {
  Decision out;
  out.yes = angle.r != 0;
  out.answer = out.yes ? "unique" : "not-unique";
  out.witness = {{"computed", false},
                 {"reason", out.yes ? "irrational rotation is uniquely ergodic" : "rational rotation has finite order"}};
  return out;
}

}  // namespace bdlab
