#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bdlab/coeff.hpp"
#include "bdlab/crossed.hpp"
#include "bdlab/errors.hpp"
#include "bdlab/limits.hpp"
#include "bdlab/parallel.hpp"
#include "bdlab/sequence.hpp"

namespace bdlab {

// --- Digits of the Cantor set X = prod {0..m_i - 1} -----------------------------

/// Mixed-radix digits (x_1, ..., x_{k-1}) of index j = sum x_l n_l, least significant first.
std::vector<std::int64_t> index_to_digits(const std::vector<std::int64_t>& radii, std::int64_t index);
std::int64_t digits_to_index(const std::vector<std::int64_t>& radii, const std::vector<std::int64_t>& digits);
/// Add one with carry (direction +1) or subtract one with borrow (direction -1).
/// A carry out of the last digit is dropped, so on a truncation this is index +-1 mod n_k.
std::vector<std::int64_t> odometer_step(const std::vector<std::int64_t>& radii, std::vector<std::int64_t> digits,
                                        int direction);
/// g(x)_i = m_i - 1 - x_i.
std::vector<std::int64_t> flip(const std::vector<std::int64_t>& radii, std::vector<std::int64_t> digits);

/// Function on X constant on the n_depth cylinders of the given depth.
template <class E>
struct CylinderFunction {
  std::int64_t depth = 1;
  std::vector<E> values;
};

/// Finite sum of f_d U^d with every f_d of the same depth. Zero functions are not stored.
template <class E>
struct OdometerElement {
  std::int64_t depth = 1;
  std::map<std::int64_t, CylinderFunction<E>> coeffs;
};

struct OdometerSampleOptions {
  std::int64_t max_u_degree = 2;
  int max_terms = 2;
  SampleOptions coeff;
};

/// Dense subalgebra of C(X, A) x_sigma Z with sigma(f)(x) = alpha(f(sigma_0^{-1}(x))) and U f U* = sigma(f).
template <CoefficientAlgebra Alg>
class Odometer {
 public:
  using Coeff = typename Alg::Element;
  using Function = CylinderFunction<Coeff>;
  using Element = OdometerElement<Coeff>;

  Odometer(Alg alg, StageSequence seq) : alg_(std::move(alg)), seq_(std::move(seq)) {}

  const Alg& algebra() const { return alg_; }
  const StageSequence& sequence() const { return seq_; }
  std::int64_t cylinders(std::int64_t depth) const { return seq_.size(depth); }

  // Cylinder functions.
  Function constant_function(std::int64_t depth, const Coeff& a) const {
    return Function{depth, std::vector<Coeff>(static_cast<std::size_t>(cylinders(depth)), a)};
  }
  Function zero_function(std::int64_t depth) const { return constant_function(depth, alg_.zero()); }
  /// a times the indicator of cylinder `index` (delta_0 for index 0, a = 1).
  Function indicator(std::int64_t depth, std::int64_t index, const Coeff& a) const {
    Function f = zero_function(depth);
    f.values[static_cast<std::size_t>(floor_mod(index, cylinders(depth)))] = a;
    return f;
  }
  Function indicator(std::int64_t depth, std::int64_t index) const { return indicator(depth, index, alg_.unit()); }

  /// Replicates values along cylinder refinement: value at index j of depth d is f[j mod n_k].
  Function promote(const Function& f, std::int64_t depth) const {
    check(f);
    if (depth < f.depth) throw InvalidInput("cannot promote a cylinder function to a shallower depth");
    const std::int64_t n = cylinders(depth);
    const std::int64_t nk = cylinders(f.depth);
    Function out{depth, {}};
    out.values.reserve(static_cast<std::size_t>(n));
    for (std::int64_t j = 0; j < n; ++j) out.values.push_back(f.values[static_cast<std::size_t>(j % nk)]);
    return out;
  }
  /// sigma^d(f)[j] = alpha^d(f[j - d mod n_k]).
  Function sigma(const Function& f, std::int64_t d) const {
    check(f);
    const std::int64_t n = cylinders(f.depth);
    Function out{f.depth, std::vector<Coeff>(static_cast<std::size_t>(n))};
    for (std::int64_t j = 0; j < n; ++j) {
      out.values[static_cast<std::size_t>(j)] = alg_.alpha_power(f.values[static_cast<std::size_t>(floor_mod(j - d, n))], d);
    }
    return out;
  }
  Function fn_add(const Function& f, const Function& g) const {
    return pointwise(f, g, [this](const Coeff& a, const Coeff& b) { return alg_.add(a, b); });
  }
  Function fn_mul(const Function& f, const Function& g) const {
    return pointwise(f, g, [this](const Coeff& a, const Coeff& b) { return alg_.mul(a, b); });
  }
  Function fn_star(const Function& f) const {
    check(f);
    Function out = f;
    for (auto& v : out.values) v = alg_.star(v);
    return out;
  }
  bool fn_is_zero(const Function& f) const {
    return std::all_of(f.values.begin(), f.values.end(), [this](const Coeff& a) { return alg_.is_zero(a); });
  }
  bool fn_equal(const Function& f, const Function& g) const {
    const std::int64_t d = std::max(f.depth, g.depth);
    const Function pf = promote(f, d), pg = promote(g, d);
    for (std::size_t j = 0; j < pf.values.size(); ++j) {
      if (!alg_.equal(pf.values[j], pg.values[j])) return false;
    }
    return true;
  }
  /// f o g on depth-k indices: g(j) = n_k - 1 - j.
  Function flip_function(const Function& f) const {
    check(f);
    Function out = f;
    std::reverse(out.values.begin(), out.values.end());
    return out;
  }

  // Crossed-product elements.
  Element zero(std::int64_t depth = 1) const { return Element{depth, {}}; }
  Element one(std::int64_t depth = 1) const { return element(constant_function(depth, alg_.unit()), 0); }
  /// f U^d.
  Element element(const Function& f, std::int64_t d) const {
    check(f);
    check_degree(d, "U");
    Element out{f.depth, {}};
    if (!fn_is_zero(f)) out.coeffs.emplace(d, f);
    return out;
  }
  Element u(std::int64_t d = 1) const { return element(constant_function(1, alg_.unit()), d); }

  Element promote(const Element& x, std::int64_t depth) const {
    if (depth < x.depth) throw InvalidInput("cannot promote an odometer element to a shallower depth");
    Element out{depth, {}};
    for (const auto& [d, f] : x.coeffs) out.coeffs.emplace(d, promote(f, depth));
    return out;
  }
  Element add(const Element& x, const Element& y) const {
    const std::int64_t depth = std::max(x.depth, y.depth);
    Element out = promote(x, depth);
    for (const auto& [d, g] : y.coeffs) accumulate(out, d, promote(g, depth));
    return out;
  }
  Element neg(const Element& x) const {
    Element out = x;
    for (auto& [d, f] : out.coeffs) {
      for (auto& v : f.values) v = alg_.neg(v);
    }
    return out;
  }
  Element sub(const Element& x, const Element& y) const { return add(x, neg(y)); }
  Element scale(const Scalar& c, const Element& x) const {
    Element out{x.depth, {}};
    for (const auto& [d, f] : x.coeffs) {
      Function g = f;
      for (auto& v : g.values) v = alg_.scale(c, v);
      accumulate(out, d, g);
    }
    return out;
  }
  /// (f U^d)(g U^e) = f sigma^d(g) U^{d+e}.
  Element mul(const Element& x, const Element& y) const {
    const std::int64_t depth = std::max(x.depth, y.depth);
    const Element px = promote(x, depth), py = promote(y, depth);
    Element out{depth, {}};
    for (const auto& [d, f] : px.coeffs) {
      for (const auto& [e, g] : py.coeffs) {
        check_degree(d + e, "U");
        accumulate(out, d + e, fn_mul(f, sigma(g, d)));
      }
    }
    return out;
  }
  /// (f U^d)* = sigma^{-d}(f*) U^{-d}.
  Element star(const Element& x) const {
    Element out{x.depth, {}};
    for (const auto& [d, f] : x.coeffs) accumulate(out, -d, sigma(fn_star(f), -d));
    return out;
  }
  bool is_zero(const Element& x) const { return x.coeffs.empty(); }
  bool equal(const Element& x, const Element& y) const { return is_zero(sub(x, y)); }
  /// f U^d -> (1 / n_k) sum_j trace0(f_0[j]).
  Scalar state(const Element& x) const {
    const auto it = x.coeffs.find(0);
    if (it == x.coeffs.end()) return Scalar(0);
    Scalar sum(0);
    for (const auto& v : it->second.values) sum = sum + alg_.trace0(v);
    return sum * Scalar(make_rational(1, cylinders(x.depth)));
  }

  Function sample_function(Rng& rng, std::int64_t depth, const SampleOptions& opts = {}) const {
    Function f = zero_function(depth);
    for (auto& v : f.values) {
      if (coin(rng)) v = alg_.sample(rng, opts);
    }
    return f;
  }
  Element sample(Rng& rng, std::int64_t depth, const OdometerSampleOptions& opts = {}) const {
    Element out{depth, {}};
    const int terms = static_cast<int>(uniform_int(rng, 1, opts.max_terms));
    for (int i = 0; i < terms; ++i) {
      accumulate(out, uniform_int(rng, -opts.max_u_degree, opts.max_u_degree), sample_function(rng, depth, opts.coeff));
    }
    return out;
  }

  nlohmann::json to_json(const Function& f) const {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : f.values) values.push_back(alg_.to_json(v));
    return {{"depth", f.depth}, {"values", values}};
  }
  nlohmann::json to_json(const Element& x) const {
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto& [d, f] : x.coeffs) coeffs["U:" + std::to_string(d)] = to_json(f);
    return {{"depth", x.depth}, {"coeffs", coeffs}};
  }
  Function function_from_json(const nlohmann::json& j) const {
    if (!j.is_object() || !j.contains("depth") || !j.contains("values") || !j.at("values").is_array()) {
      throw InvalidInput("cylinder function must be {\"depth\": k, \"values\": [...]}");
    }
    const auto depth = j.at("depth").get<std::int64_t>();
    Function f{depth, {}};
    for (const auto& v : j.at("values")) f.values.push_back(alg_.from_json(v));
    check(f);
    return f;
  }
  Element from_json(const nlohmann::json& j) const {
    if (!j.is_object() || !j.contains("depth") || !j.contains("coeffs") || !j.at("coeffs").is_object()) {
      throw InvalidInput("odometer element must be {\"depth\": k, \"coeffs\": {\"U:<d>\": ...}}");
    }
    const auto depth = j.at("depth").get<std::int64_t>();
    cylinders(depth);
    Element out{depth, {}};
    for (const auto& [key, value] : j.at("coeffs").items()) {
      if (key.rfind("U:", 0) != 0) throw InvalidInput("odometer coefficient key must be \"U:<d>\": " + key);
      std::int64_t d = 0;
      try {
        std::size_t used = 0;
        d = std::stoll(key.substr(2), &used);
        if (used != key.size() - 2) throw InvalidInput("bad key");
      } catch (const std::exception&) {
        throw InvalidInput("odometer coefficient key must be \"U:<d>\": " + key);
      }
      check_degree(d, "U");
      const Function f = function_from_json(value);
      if (f.depth > depth) throw InvalidInput("coefficient deeper than the element depth");
      accumulate(out, d, promote(f, depth));
    }
    return out;
  }

  void check(const Function& f) const {
    if (static_cast<std::int64_t>(f.values.size()) != cylinders(f.depth)) {
      throw InvalidInput("cylinder function of depth " + std::to_string(f.depth) + " needs " +
                         std::to_string(cylinders(f.depth)) + " values");
    }
  }

 private:
  template <class Op>
  Function pointwise(const Function& f, const Function& g, Op op) const {
    const std::int64_t d = std::max(f.depth, g.depth);
    const Function pf = promote(f, d), pg = promote(g, d);
    Function out{d, std::vector<Coeff>(pf.values.size())};
    for (std::size_t j = 0; j < pf.values.size(); ++j) out.values[j] = op(pf.values[j], pg.values[j]);
    return out;
  }
  void accumulate(Element& x, std::int64_t d, const Function& f) const {
    if (fn_is_zero(f)) return;
    auto it = x.coeffs.find(d);
    if (it == x.coeffs.end()) {
      x.coeffs.emplace(d, f);
      return;
    }
    it->second = fn_add(it->second, f);
    if (fn_is_zero(it->second)) x.coeffs.erase(it);
  }

  Alg alg_;
  StageSequence seq_;
};

/// rho_k(a u^l e_ij) = U^{-i} a delta_0 U^{j + n_k l} = sigma^{-i}(a delta_0) U^{j - i + n_k l}.
template <CoefficientAlgebra Alg>
OdometerElement<typename Alg::Element> rho(const Odometer<Alg>& od, std::int64_t k,
                                           const MatrixElement<typename Alg::Element>& x) {
  const std::int64_t n = od.cylinders(k);
  if (x.size != n) throw InvalidInput("rho_k expects a matrix of size n_k");
  const auto& alg = od.algebra();
  // sigma^{-i}(a delta_0) is alpha^{-i}(a) on cylinder -i mod n_k.
  std::map<std::int64_t, CylinderFunction<typename Alg::Element>> terms;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      for (const auto& [l, a] : x.at(i, j).coeffs) {
        const std::int64_t d = j - i + n * l;
        check_degree(d, "U");
        auto it = terms.find(d);
        if (it == terms.end()) it = terms.emplace(d, od.zero_function(k)).first;
        auto& v = it->second.values[static_cast<std::size_t>(floor_mod(-i, n))];
        v = alg.add(v, alg.alpha_power(a, -i));
      }
    }
  }
  auto out = od.zero(k);
  for (const auto& [d, f] : terms) out = od.add(out, od.element(f, d));
  return out;
}

namespace detail {
template <class Alg>
void expect_equal(std::vector<Failure>& failures, const Odometer<Alg>& od, const char* check,
                  const OdometerElement<typename Alg::Element>& lhs, const OdometerElement<typename Alg::Element>& rhs) {
  if (!od.equal(lhs, rhs)) failures.push_back(Failure{0, check, od.to_json(lhs), od.to_json(rhs)});
}
}  // namespace detail

/// U^p delta_{n-p} rho(X) delta_{n-q} U^{-q}: the Laurent sum of entry (p, q) times delta_0, in U^{n_k}.
template <CoefficientAlgebra Alg>
OdometerElement<typename Alg::Element> rho_extract(const Odometer<Alg>& od, std::int64_t k,
                                                   const OdometerElement<typename Alg::Element>& y, std::int64_t p,
                                                   std::int64_t q) {
  const std::int64_t n = od.cylinders(k);
  const auto left = od.mul(od.u(p), od.element(od.indicator(k, n - p), 0));
  const auto right = od.mul(od.element(od.indicator(k, n - q), 0), od.u(-q));
  return od.mul(od.mul(left, y), right);
}

/// rho(XY) = rho(X)rho(Y), rho(X*) = rho(X)*, extraction of every entry, and state(rho(X)) = trace(X).
template <CoefficientAlgebra Alg>
Report verify_rho_homomorphism(const Alg& alg, const StageSequence& seq, std::int64_t k, std::uint64_t seed,
                               std::size_t count, const MatrixSampleOptions& opts = {},
                               Execution mode = default_execution()) {
  const Odometer<Alg> od(alg, seq);
  const std::int64_t n = seq.size(k);
  const auto stage = MatrixAlgebra<Alg>::stage(alg, n);
  return run_cases(
      "rho-hom", count,
      [&](std::size_t i) {
        std::vector<Failure> f;
        auto rng = case_rng(seed, "rho-hom", i);
        const auto x = stage.sample(rng, opts);
        const auto y = stage.sample(rng, opts);
        const auto rx = rho(od, k, x);
        detail::expect_equal(f, od, "multiplicative", rho(od, k, stage.mul(x, y)), od.mul(rx, rho(od, k, y)));
        detail::expect_equal(f, od, "star", rho(od, k, stage.star(x)), od.star(rx));
        if (i == 0) detail::expect_equal(f, od, "unital", rho(od, k, stage.one()), od.one(k));
        for (std::int64_t p = 0; p < n; ++p) {
          for (std::int64_t q = 0; q < n; ++q) {
            auto want = od.zero(k);
            for (const auto& [l, a] : x.at(p, q).coeffs) want = od.add(want, od.element(od.indicator(k, 0, a), n * l));
            detail::expect_equal(f, od, "extraction", rho_extract(od, k, rx, p, q), want);
          }
        }
        detail::expect_equal_scalar(f, "trace", od.state(rx), stage.trace(x));
        return f;
      },
      mode);
}

/// promote(rho_k(X)) = rho_{k+1}(gamma_{n_k, n_{k+1}}(X)) on the generators and `count` random X.
template <CoefficientAlgebra Alg>
Report verify_rg(const Alg& alg, const StageSequence& seq, std::int64_t k, std::uint64_t seed, std::size_t count,
                 const MatrixSampleOptions& opts = {}, Execution mode = default_execution()) {
  const Odometer<Alg> od(alg, seq);
  const ConnectingMap<Alg> g(alg, seq.size(k), seq.size(k + 1));
  auto grng = case_rng(seed, "rg-generators", 0);
  const auto generators = stage_generators(g.source(), generator_coefficients(alg, grng));
  return run_cases(
      "rg", generators.size() + count,
      [&](std::size_t i) {
        std::vector<Failure> f;
        typename MatrixAlgebra<Alg>::Element x;
        if (i < generators.size()) {
          x = generators[i];
        } else {
          auto rng = case_rng(seed, "rg", i);
          x = g.source().sample(rng, opts);
        }
        detail::expect_equal(f, od, "rho-gamma", od.promote(rho(od, k, x), k + 1), rho(od, k + 1, g.apply(x)));
        return f;
      },
      mode);
}

/// g o sigma_0 = sigma_0^{-1} o g and g o g = id on every point of each truncation with n_k <= max_points.
Report verify_flip_conjugacy(const StageSequence& seq, std::int64_t max_points = 64,
                             Execution mode = default_execution());

/// Psi(f) = f o g and Psi(U) = V* into the crossed product by sigma' (alpha replaced by alpha^{-1}).
template <CoefficientAlgebra Alg>
OdometerElement<typename Alg::Element> psi(const Odometer<InverseAlpha<Alg>>& target,
                                           const OdometerElement<typename Alg::Element>& x) {
  auto out = target.zero(x.depth);
  for (const auto& [d, f] : x.coeffs) {
    out = target.add(out, target.mul(target.element(target.flip_function(f), 0), target.u(-d)));
  }
  return out;
}

/// V* Psi(f) V = Psi(sigma(f)) on `count` random f at depth k, plus Psi(xy) = Psi(x)Psi(y) on random elements.
template <CoefficientAlgebra Alg>
Report verify_psi_flip(const Alg& alg, const StageSequence& seq, std::int64_t k, std::uint64_t seed,
                       std::size_t count, const OdometerSampleOptions& opts = {},
                       Execution mode = default_execution()) {
  const Odometer<Alg> od(alg, seq);
  const Odometer<InverseAlpha<Alg>> target(InverseAlpha<Alg>(alg), seq);
  return run_cases(
      "psi-flip", count,
      [&](std::size_t i) {
        std::vector<Failure> f;
        auto rng = case_rng(seed, "psi-flip", i);
        const auto fn = i == 0 ? od.constant_function(k, alg.unit()) : od.sample_function(rng, k, opts.coeff);
        const auto pf = psi(target, od.element(fn, 0));
        const auto lhs = target.mul(target.mul(target.u(-1), pf), target.u(1));
        detail::expect_equal(f, target, "conjugation", lhs, psi(target, od.element(od.sigma(fn, 1), 0)));
        const auto x = od.sample(rng, k, opts);
        const auto y = od.sample(rng, k, opts);
        detail::expect_equal(f, target, "multiplicative", psi(target, od.mul(x, y)),
                             target.mul(psi(target, x), psi(target, y)));
        detail::expect_equal(f, target, "star", psi(target, od.star(x)), target.star(psi(target, x)));
        return f;
      },
      mode);
}

/// U = sum_{j < n_k - 1} U^{j+1} delta_0 U^{-j} + (delta_0 U^{n_k} delta_0)(delta_0 U^{-(n_k - 1)}) at every stage.
template <CoefficientAlgebra Alg>
Report verify_gk_generation(const Alg& alg, const StageSequence& seq, Execution mode = default_execution()) {
  const Odometer<Alg> od(alg, seq);
  return run_cases(
      "gk-generation", static_cast<std::size_t>(seq.stages()),
      [&](std::size_t i) {
        std::vector<Failure> f;
        const auto k = static_cast<std::int64_t>(i) + 1;
        const std::int64_t n = seq.size(k);
        const auto delta = od.element(od.indicator(k, 0), 0);
        auto sum = od.zero(k);
        for (std::int64_t j = 0; j + 1 < n; ++j) sum = od.add(sum, od.mul(od.mul(od.u(j + 1), delta), od.u(-j)));
        const auto corner = od.mul(od.mul(delta, od.u(n)), delta);
        sum = od.add(sum, od.mul(corner, od.mul(delta, od.u(-(n - 1)))));
        detail::expect_equal(f, od, "generation", sum, od.promote(od.u(1), k));
        return f;
      },
      mode);
}

}  // namespace bdlab
