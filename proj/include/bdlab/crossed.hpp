#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bdlab/coeff.hpp"
#include "bdlab/errors.hpp"

namespace bdlab {

/// Finite twisted Laurent sum sum_l a_l u^l in A x_{alpha^power} Z.
template <class E>
struct CrossedElement {
  std::int64_t power = 1;
  std::map<std::int64_t, E> coeffs;  ///< u-exponent -> nonzero coefficient
  friend bool operator==(const CrossedElement&, const CrossedElement&) = default;
};

struct CrossedSampleOptions {
  std::int64_t max_u_degree = 2;
  int max_terms = 3;
  SampleOptions coeff;
};

/// The dense *-subalgebra of A x_{alpha^n} Z, with u a = alpha^n(a) u.
template <CoefficientAlgebra Alg>
class CrossedProduct {
 public:
  using Coeff = typename Alg::Element;
  using Element = CrossedElement<Coeff>;

  CrossedProduct(Alg alg, std::int64_t power) : alg_(std::move(alg)), power_(power) {
    if (power < 1) throw InvalidInput("crossed product power must be positive");
  }

  const Alg& algebra() const { return alg_; }
  std::int64_t power() const { return power_; }

  Element zero() const { return Element{power_, {}}; }
  Element one() const { return constant(alg_.unit()); }
  Element constant(const Coeff& a) const { return monomial(a, 0); }
  /// a * u^l.
  Element monomial(const Coeff& a, std::int64_t l) const {
    check_degree(l, "u");
    Element out = zero();
    if (!alg_.is_zero(a)) out.coeffs.emplace(l, a);
    return out;
  }
  Element u(std::int64_t l = 1) const { return monomial(alg_.unit(), l); }

  Element add(const Element& x, const Element& y) const {
    check(x);
    check(y);
    Element out = x;
    for (const auto& [l, b] : y.coeffs) accumulate(out, l, b);
    return out;
  }
  Element neg(const Element& x) const {
    check(x);
    Element out = zero();
    for (const auto& [l, a] : x.coeffs) out.coeffs.emplace(l, alg_.neg(a));
    return out;
  }
  Element sub(const Element& x, const Element& y) const { return add(x, neg(y)); }
  Element scale(const Scalar& c, const Element& x) const {
    check(x);
    Element out = zero();
    for (const auto& [l, a] : x.coeffs) {
      auto b = alg_.scale(c, a);
      if (!alg_.is_zero(b)) out.coeffs.emplace(l, std::move(b));
    }
    return out;
  }

  /// (a u^l)(b u^r) = a alpha^{n l}(b) u^{l+r}.
  Element mul(const Element& x, const Element& y) const {
    check(x);
    check(y);
    Element out = zero();
    for (const auto& [l, a] : x.coeffs) {
      for (const auto& [r, b] : y.coeffs) {
        check_degree(l + r, "u");
        accumulate(out, l + r, alg_.mul(a, alg_.alpha_power(b, power_ * l)));
      }
    }
    return out;
  }

  /// (a u^l)* = alpha^{-n l}(a*) u^{-l}.
  Element star(const Element& x) const {
    check(x);
    Element out = zero();
    for (const auto& [l, a] : x.coeffs) out.coeffs.emplace(-l, alg_.alpha_power(alg_.star(a), -power_ * l));
    return out;
  }

  bool is_zero(const Element& x) const { return x.coeffs.empty(); }
  bool equal(const Element& x, const Element& y) const {
    if (x.power != y.power || x.coeffs.size() != y.coeffs.size()) return false;
    auto it = y.coeffs.begin();
    for (const auto& [l, a] : x.coeffs) {
      if (it->first != l || !alg_.equal(a, it->second)) return false;
      ++it;
    }
    return true;
  }

  /// Canonical conditional expectation onto A: the u^0 coefficient.
  Coeff expectation(const Element& x) const {
    check(x);
    const auto it = x.coeffs.find(0);
    return it == x.coeffs.end() ? alg_.zero() : it->second;
  }

  /// trace0 composed with the conditional expectation.
  Scalar trace(const Element& x) const { return alg_.trace0(expectation(x)); }

  Element sample(Rng& rng, const CrossedSampleOptions& opts = {}) const {
    Element out = zero();
    const auto terms = uniform_int(rng, 1, opts.max_terms);
    for (std::int64_t i = 0; i < terms; ++i) {
      const auto l = uniform_int(rng, -opts.max_u_degree, opts.max_u_degree);
      accumulate(out, l, alg_.sample(rng, opts.coeff));
    }
    return out;
  }

  nlohmann::json to_json(const Element& x) const {
    check(x);
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto& [l, a] : x.coeffs) coeffs["u:" + std::to_string(l)] = alg_.to_json(a);
    return {{"n", power_}, {"algebra", std::string(Alg::tag())}, {"coeffs", coeffs}};
  }

  Element from_json(const nlohmann::json& j) const {
    if (!j.is_object() || !j.contains("n") || !j.contains("coeffs") || !j.at("coeffs").is_object()) {
      throw InvalidInput("crossed element must be {\"n\": n, \"algebra\": tag, \"coeffs\": {...}}");
    }
    if (!j.at("n").is_number_integer() || j.at("n").get<std::int64_t>() != power_) {
      throw InvalidInput("crossed element power does not match the stage (expected n = " + std::to_string(power_) +
                         ")");
    }
    if (j.contains("algebra") && j.at("algebra") != std::string(Alg::tag())) {
      throw InvalidInput("crossed element algebra tag mismatch");
    }
    Element out = zero();
    for (const auto& [key, value] : j.at("coeffs").items()) {
      if (key.rfind("u:", 0) != 0) throw InvalidInput("crossed element key must look like \"u:<l>\": " + key);
      std::int64_t l = 0;
      try {
        std::size_t used = 0;
        l = std::stoll(key.substr(2), &used);
        if (used != key.size() - 2) throw InvalidInput("bad key");
      } catch (const std::exception&) {
        throw InvalidInput("bad u-exponent in key " + key);
      }
      check_degree(l, "u");
      accumulate(out, l, alg_.from_json(value));
    }
    return out;
  }

  void check(const Element& x) const {
    if (x.power != power_) {
      throw InvalidInput("crossed product power mismatch: " + std::to_string(x.power) + " vs " +
                         std::to_string(power_));
    }
  }

 private:
  void accumulate(Element& x, std::int64_t l, const Coeff& a) const {
    if (alg_.is_zero(a)) return;
    auto it = x.coeffs.find(l);
    if (it == x.coeffs.end()) {
      x.coeffs.emplace(l, a);
      return;
    }
    it->second = alg_.add(it->second, a);
    if (alg_.is_zero(it->second)) x.coeffs.erase(it);
  }

  Alg alg_;
  std::int64_t power_;
};

/// size x size matrix over A x_{alpha^power} Z, stored row-major.
template <class E>
struct MatrixElement {
  std::int64_t size = 1;
  std::vector<CrossedElement<E>> entries;

  const CrossedElement<E>& at(std::int64_t i, std::int64_t j) const { return entries[i * size + j]; }
  CrossedElement<E>& at(std::int64_t i, std::int64_t j) { return entries[i * size + j]; }
  friend bool operator==(const MatrixElement&, const MatrixElement&) = default;
};

struct MatrixSampleOptions {
  double density = 0.5;  ///< probability that an entry is nonzero
  CrossedSampleOptions entry;
};

/// M_size(A x_{alpha^power} Z). The stage algebra B(n) is size = power = n; amplified
/// stages use size p*n over power n.
template <CoefficientAlgebra Alg>
class MatrixAlgebra {
 public:
  using Coeff = typename Alg::Element;
  using Entry = CrossedElement<Coeff>;
  using Element = MatrixElement<Coeff>;

  MatrixAlgebra(Alg alg, std::int64_t size, std::int64_t power) : cp_(std::move(alg), power), size_(size) {
    if (size < 1) throw InvalidInput("matrix size must be positive");
  }
  /// The stage algebra M_n(A x_{alpha^n} Z).
  static MatrixAlgebra stage(Alg alg, std::int64_t n) { return MatrixAlgebra(std::move(alg), n, n); }

  const CrossedProduct<Alg>& crossed() const { return cp_; }
  const Alg& algebra() const { return cp_.algebra(); }
  std::int64_t size() const { return size_; }
  std::int64_t power() const { return cp_.power(); }

  Element zero() const { return Element{size_, std::vector<Entry>(size_ * size_, cp_.zero())}; }
  Element one() const {
    Element out = zero();
    for (std::int64_t i = 0; i < size_; ++i) out.at(i, i) = cp_.one();
    return out;
  }
  /// x e_{i,j}.
  Element embed(std::int64_t i, std::int64_t j, const Entry& x) const {
    check_index(i);
    check_index(j);
    cp_.check(x);
    Element out = zero();
    out.at(i, j) = x;
    return out;
  }
  Element unit_matrix(std::int64_t i, std::int64_t j) const { return embed(i, j, cp_.one()); }

  Element add(const Element& x, const Element& y) const {
    check(x);
    check(y);
    Element out = x;
    for (std::size_t e = 0; e < out.entries.size(); ++e) out.entries[e] = cp_.add(out.entries[e], y.entries[e]);
    return out;
  }
  Element neg(const Element& x) const {
    check(x);
    Element out = x;
    for (auto& e : out.entries) e = cp_.neg(e);
    return out;
  }
  Element sub(const Element& x, const Element& y) const { return add(x, neg(y)); }
  Element scale(const Scalar& c, const Element& x) const {
    check(x);
    Element out = x;
    for (auto& e : out.entries) e = cp_.scale(c, e);
    return out;
  }
  Element mul(const Element& x, const Element& y) const {
    check(x);
    check(y);
    Element out = zero();
    for (std::int64_t i = 0; i < size_; ++i) {
      for (std::int64_t l = 0; l < size_; ++l) {
        const auto& a = x.at(i, l);
        if (cp_.is_zero(a)) continue;
        for (std::int64_t j = 0; j < size_; ++j) {
          const auto& b = y.at(l, j);
          if (cp_.is_zero(b)) continue;
          out.at(i, j) = cp_.add(out.at(i, j), cp_.mul(a, b));
        }
      }
    }
    return out;
  }
  /// Conjugate transpose.
  Element star(const Element& x) const {
    check(x);
    Element out = zero();
    for (std::int64_t i = 0; i < size_; ++i) {
      for (std::int64_t j = 0; j < size_; ++j) out.at(j, i) = cp_.star(x.at(i, j));
    }
    return out;
  }
  bool is_zero(const Element& x) const {
    for (const auto& e : x.entries) {
      if (!cp_.is_zero(e)) return false;
    }
    return true;
  }
  bool equal(const Element& x, const Element& y) const {
    if (x.size != y.size || x.entries.size() != y.entries.size()) return false;
    for (std::size_t e = 0; e < x.entries.size(); ++e) {
      if (!cp_.equal(x.entries[e], y.entries[e])) return false;
    }
    return true;
  }

  /// (1/size) sum_i tau_0(E(x_ii)).
  Scalar trace(const Element& x) const {
    check(x);
    Scalar sum;
    for (std::int64_t i = 0; i < size_; ++i) sum += cp_.trace(x.at(i, i));
    return Scalar(make_rational(1, size_)) * sum;
  }

  Element sample(Rng& rng, const MatrixSampleOptions& opts = {}) const {
    Element out = zero();
    for (auto& e : out.entries) {
      if (coin(rng, opts.density)) e = cp_.sample(rng, opts.entry);
    }
    return out;
  }

  nlohmann::json to_json(const Element& x) const {
    check(x);
    nlohmann::json rows = nlohmann::json::array();
    for (std::int64_t i = 0; i < size_; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::int64_t j = 0; j < size_; ++j) row.push_back(cp_.to_json(x.at(i, j)));
      rows.push_back(std::move(row));
    }
    return {{"size", size_}, {"entries", rows}};
  }

  Element from_json(const nlohmann::json& j) const {
    if (!j.is_object() || !j.contains("size") || !j.contains("entries") || !j.at("entries").is_array()) {
      throw InvalidInput("matrix element must be {\"size\": n, \"entries\": [[...]]}");
    }
    if (!j.at("size").is_number_integer() || j.at("size").get<std::int64_t>() != size_) {
      throw InvalidInput("matrix size does not match the stage (expected " + std::to_string(size_) + ")");
    }
    const auto& rows = j.at("entries");
    if (static_cast<std::int64_t>(rows.size()) != size_) throw InvalidInput("matrix row count mismatch");
    Element out = zero();
    for (std::int64_t i = 0; i < size_; ++i) {
      if (!rows[i].is_array() || static_cast<std::int64_t>(rows[i].size()) != size_) {
        throw InvalidInput("matrix column count mismatch");
      }
      for (std::int64_t jj = 0; jj < size_; ++jj) out.at(i, jj) = cp_.from_json(rows[i][jj]);
    }
    return out;
  }

  void check(const Element& x) const {
    if (x.size != size_ || static_cast<std::int64_t>(x.entries.size()) != size_ * size_) {
      throw InvalidInput("matrix size mismatch: " + std::to_string(x.size) + " vs " + std::to_string(size_));
    }
    for (const auto& e : x.entries) cp_.check(e);
  }

 private:
  void check_index(std::int64_t i) const {
    if (i < 0 || i >= size_) throw InvalidInput("matrix index out of range");
  }

  CrossedProduct<Alg> cp_;
  std::int64_t size_;
};

}  // namespace bdlab
