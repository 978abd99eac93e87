#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bdlab/coeff.hpp"
#include "bdlab/errors.hpp"
#include "bdlab/parallel.hpp"

namespace bdlab {

/// Operator on the Fock module truncated to levels 0..depth-1, as a matrix of a delta_ij.
/// Entries with max(i, j) < trust are exact; comparisons ignore everything else.
template <class E>
struct FockOperator {
  std::int64_t depth = 1;
  std::int64_t trust = 1;
  std::map<std::pair<std::int64_t, std::int64_t>, E> entries;
};

/// k-periodic weights lambda_1..lambda_k, extended by lambda_{i+k} = lambda_i.
template <class E>
struct WeightSequence {
  std::vector<E> weights;
  std::int64_t period() const { return static_cast<std::int64_t>(weights.size()); }
  /// lambda_i for i >= 1.
  const E& at(std::int64_t i) const { return weights[static_cast<std::size_t>((i - 1) % period())]; }
};

/// Fock module of alpha^power (F^{(power)}), truncated at `depth` levels.
///
/// phi(a) delta_k b = delta_k alpha^{power k}(a) b and T(a) delta_k b = delta_{k+1} alpha^{power k}(a) b.
template <CoefficientAlgebra Alg>
class FockSpace {
 public:
  using Coeff = typename Alg::Element;
  using Op = FockOperator<Coeff>;

  FockSpace(Alg alg, std::int64_t power, std::int64_t depth) : alg_(std::move(alg)), power_(power), depth_(depth) {
    if (power < 1 || depth < 1) throw InvalidInput("Fock space needs power >= 1 and depth >= 1");
  }

  const Alg& algebra() const { return alg_; }
  std::int64_t power() const { return power_; }
  std::int64_t depth() const { return depth_; }

  Op zero() const { return Op{depth_, depth_, {}}; }
  Op identity() const { return phi(alg_.unit()); }

  /// phi_infinity(a): diagonal alpha^{power i}(a).
  Op phi(const Coeff& a) const {
    Op out = zero();
    for (std::int64_t i = 0; i < depth_; ++i) put(out, i, i, alg_.alpha_power(a, power_ * i));
    return out;
  }
  /// T(a): entries (i+1, i) = alpha^{power i}(a).
  Op creation(const Coeff& a) const {
    Op out = zero();
    for (std::int64_t i = 0; i + 1 < depth_; ++i) put(out, i + 1, i, alg_.alpha_power(a, power_ * i));
    return out;
  }
  Op shift() const { return creation(alg_.unit()); }
  /// S^p for p >= 0, built entrywise (no trust lost).
  Op shift_power(std::int64_t p) const {
    Op out = zero();
    for (std::int64_t i = 0; i + p < depth_; ++i) put(out, i + p, i, alg_.unit());
    return out;
  }
  /// Projection onto level 0.
  Op vacuum_projection() const {
    Op out = zero();
    put(out, 0, 0, alg_.unit());
    return out;
  }
  /// T_lambda(a): entries (k+1, k) = alpha^{power k}(lambda_{k+1} a).
  Op weighted(const WeightSequence<Coeff>& lambda, const Coeff& a) const {
    if (lambda.period() < 1) throw InvalidInput("weight sequence must have period >= 1");
    Op out = zero();
    for (std::int64_t k = 0; k + 1 < depth_; ++k) {
      put(out, k + 1, k, alg_.alpha_power(alg_.mul(lambda.at(k + 1), a), power_ * k));
    }
    return out;
  }

  Op add(const Op& x, const Op& y) const {
    check(x);
    check(y);
    Op out = x;
    out.trust = std::min(x.trust, y.trust);
    for (const auto& [ij, b] : y.entries) accumulate(out, ij.first, ij.second, b);
    return out;
  }
  Op neg(const Op& x) const {
    check(x);
    Op out = x;
    for (auto& [ij, a] : out.entries) a = alg_.neg(a);
    return out;
  }
  Op sub(const Op& x, const Op& y) const { return add(x, neg(y)); }

  /// Matrix product over retained entries. The result is exact below
  /// min(trust) - r, where r is the largest level raise i - j among y's entries (at least 0).
  Op compose(const Op& x, const Op& y) const {
    check(x);
    check(y);
    Op out = zero();
    std::int64_t raise = 0;
    for (const auto& [ij, b] : y.entries) raise = std::max(raise, ij.first - ij.second);
    out.trust = std::max<std::int64_t>(0, std::min(x.trust, y.trust) - raise);
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, const Coeff*>>> rows_of_y;
    for (const auto& [ij, b] : y.entries) rows_of_y[ij.first].emplace_back(ij.second, &b);
    for (const auto& [ij, a] : x.entries) {
      const auto it = rows_of_y.find(ij.second);
      if (it == rows_of_y.end()) continue;
      for (const auto& [j, b] : it->second) accumulate(out, ij.first, j, alg_.mul(a, *b));
    }
    return out;
  }

  /// (a delta_ij)* = a* delta_ji.
  Op adjoint(const Op& x) const {
    check(x);
    Op out = zero();
    out.trust = x.trust;
    for (const auto& [ij, a] : x.entries) put(out, ij.second, ij.first, alg_.star(a));
    return out;
  }

  /// Equality on the jointly trusted window.
  bool equal(const Op& x, const Op& y) const { return equal_below(x, y, std::min(x.trust, y.trust)); }
  bool equal_below(const Op& x, const Op& y, std::int64_t window) const {
    const auto in = [window](const auto& ij) { return std::max(ij.first, ij.second) < window; };
    for (const auto& [ij, a] : x.entries) {
      if (!in(ij)) continue;
      const auto it = y.entries.find(ij);
      if (it == y.entries.end() ? !alg_.is_zero(a) : !alg_.equal(a, it->second)) return false;
    }
    for (const auto& [ij, b] : y.entries) {
      if (in(ij) && !x.entries.contains(ij) && !alg_.is_zero(b)) return false;
    }
    return true;
  }

  /// Restriction to the trusted window, for reporting.
  nlohmann::json to_json(const Op& x) const {
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [ij, a] : x.entries) {
      entries[std::to_string(ij.first) + "," + std::to_string(ij.second)] = alg_.to_json(a);
    }
    return {{"depth", x.depth}, {"trust", x.trust}, {"entries", entries}};
  }

  Op from_json(const nlohmann::json& j) const {
    if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_object()) {
      throw InvalidInput("Fock operator must be {\"depth\": K, \"trust\": d, \"entries\": {...}}");
    }
    if (j.value("depth", depth_) != depth_) throw InvalidInput("Fock operator depth mismatch");
    Op out = zero();
    out.trust = std::min(j.value("trust", depth_), depth_);
    for (const auto& [key, value] : j.at("entries").items()) {
      const auto comma = key.find(',');
      if (comma == std::string::npos) throw InvalidInput("Fock entry key must be \"i,j\": " + key);
      std::int64_t i = 0, jj = 0;
      try {
        i = std::stoll(key.substr(0, comma));
        jj = std::stoll(key.substr(comma + 1));
      } catch (const std::exception&) {
        throw InvalidInput("Fock entry key must be \"i,j\": " + key);
      }
      if (i < 0 || jj < 0 || i >= depth_ || jj >= depth_) throw InvalidInput("Fock entry outside the depth");
      accumulate(out, i, jj, alg_.from_json(value));
    }
    return out;
  }

  void put(Op& x, std::int64_t i, std::int64_t j, const Coeff& a) const {
    if (alg_.is_zero(a)) {
      x.entries.erase({i, j});
    } else {
      x.entries[{i, j}] = a;
    }
  }
  void accumulate(Op& x, std::int64_t i, std::int64_t j, const Coeff& a) const {
    if (alg_.is_zero(a)) return;
    auto it = x.entries.find({i, j});
    if (it == x.entries.end()) {
      x.entries.emplace(std::pair{i, j}, a);
      return;
    }
    it->second = alg_.add(it->second, a);
    if (alg_.is_zero(it->second)) x.entries.erase(it);
  }

  void check(const Op& x) const {
    if (x.depth != depth_) throw InvalidInput("Fock operator depth mismatch");
  }

 private:
  Alg alg_;
  std::int64_t power_;
  std::int64_t depth_;
};

/// k x k array of Fock operators (an element of M_k over a Toeplitz algebra).
template <class E>
struct FockMatrix {
  std::int64_t size = 1;
  std::vector<FockOperator<E>> blocks;  ///< row-major
  const FockOperator<E>& at(std::int64_t i, std::int64_t j) const { return blocks[i * size + j]; }
  FockOperator<E>& at(std::int64_t i, std::int64_t j) { return blocks[i * size + j]; }
};

template <CoefficientAlgebra Alg>
class FockMatrixAlgebra {
 public:
  using Coeff = typename Alg::Element;
  using Op = FockOperator<Coeff>;
  using Element = FockMatrix<Coeff>;

  FockMatrixAlgebra(FockSpace<Alg> space, std::int64_t size) : space_(std::move(space)), size_(size) {}
  const FockSpace<Alg>& space() const { return space_; }
  std::int64_t size() const { return size_; }

  Element zero() const { return Element{size_, std::vector<Op>(size_ * size_, space_.zero())}; }
  Element embed(std::int64_t i, std::int64_t j, const Op& x) const {
    Element out = zero();
    out.at(i, j) = x;
    return out;
  }
  Element add(const Element& x, const Element& y) const {
    Element out = x;
    for (std::size_t e = 0; e < out.blocks.size(); ++e) out.blocks[e] = space_.add(x.blocks[e], y.blocks[e]);
    return out;
  }
  Element sub(const Element& x, const Element& y) const {
    Element out = x;
    for (std::size_t e = 0; e < out.blocks.size(); ++e) out.blocks[e] = space_.sub(x.blocks[e], y.blocks[e]);
    return out;
  }
  Element mul(const Element& x, const Element& y) const {
    Element out = zero();
    for (std::int64_t i = 0; i < size_; ++i) {
      for (std::int64_t j = 0; j < size_; ++j) {
        for (std::int64_t l = 0; l < size_; ++l) {
          if (x.at(i, l).entries.empty() || y.at(l, j).entries.empty()) {
            // A zero product still limits trust through the factors' windows.
            out.at(i, j).trust = std::min({out.at(i, j).trust, x.at(i, l).trust, y.at(l, j).trust});
            continue;
          }
          out.at(i, j) = space_.add(out.at(i, j), space_.compose(x.at(i, l), y.at(l, j)));
        }
      }
    }
    return out;
  }
  Element adjoint(const Element& x) const {
    Element out = zero();
    for (std::int64_t i = 0; i < size_; ++i) {
      for (std::int64_t j = 0; j < size_; ++j) out.at(j, i) = space_.adjoint(x.at(i, j));
    }
    return out;
  }
  bool equal(const Element& x, const Element& y) const {
    if (x.size != y.size) return false;
    for (std::size_t e = 0; e < x.blocks.size(); ++e) {
      if (!space_.equal(x.blocks[e], y.blocks[e])) return false;
    }
    return true;
  }
  nlohmann::json to_json(const Element& x) const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::int64_t i = 0; i < size_; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::int64_t j = 0; j < size_; ++j) row.push_back(space_.to_json(x.at(i, j)));
      rows.push_back(std::move(row));
    }
    return {{"size", size_}, {"blocks", rows}};
  }

 private:
  FockSpace<Alg> space_;
  std::int64_t size_;
};

// --- Block decomposition ----------------------------------------------------------

/// Splits levels by residue mod k and reindexes level i to i div k inside block i mod k.
/// Block (r, c) collects the entries whose row is r mod k and column is c mod k. The block
/// operators live on a Fock space of depth ceil(depth / k).
template <class E>
FockMatrix<E> block_decompose(const FockOperator<E>& x, std::int64_t k) {
  if (k < 1) throw InvalidInput("block period must be positive");
  const auto depth = (x.depth + k - 1) / k;
  // A block entry (a, b) is exact when both original levels are below trust.
  const auto trust = x.trust / k;
  FockMatrix<E> out{k, std::vector<FockOperator<E>>(k * k, FockOperator<E>{depth, trust, {}})};
  for (const auto& [ij, a] : x.entries) {
    out.at(ij.first % k, ij.second % k).entries.emplace(std::pair{ij.first / k, ij.second / k}, a);
  }
  return out;
}

/// Inverse of block_decompose for an operator of the given depth.
template <class E>
FockOperator<E> block_reassemble(const FockMatrix<E>& blocks, std::int64_t depth) {
  const auto k = blocks.size;
  std::int64_t trust = depth;
  FockOperator<E> out{depth, depth, {}};
  for (std::int64_t r = 0; r < k; ++r) {
    for (std::int64_t c = 0; c < k; ++c) {
      const auto& b = blocks.at(r, c);
      trust = std::min(trust, b.trust * k);
      for (const auto& [ij, a] : b.entries) {
        const auto i = ij.first * k + r;
        const auto j = ij.second * k + c;
        if (i >= depth || j >= depth) throw InvalidInput("block entry outside the reassembled depth");
        out.entries.emplace(std::pair{i, j}, a);
      }
    }
  }
  out.trust = trust;
  return out;
}

/// Restriction of an operator to the rows that are r mod k and columns c mod k, kept at
/// the original levels (block (r, c) of the level split M_0 + ... + M_{k-1}).
template <class E>
FockOperator<E> block_part(const FockOperator<E>& x, std::int64_t k, std::int64_t r, std::int64_t c) {
  FockOperator<E> out{x.depth, x.trust, {}};
  for (const auto& [ij, a] : x.entries) {
    if (ij.first % k == r && ij.second % k == c) out.entries.emplace(ij, a);
  }
  return out;
}

/// The embedded copy of F^{(k)} inside F: operators of FockSpace(alpha^{pk}) placed on the
/// levels 0, k, 2k, ... of a FockSpace(alpha^p) of the given depth.
template <class E>
FockOperator<E> spread_levels(const FockOperator<E>& x, std::int64_t k, std::int64_t depth) {
  FockOperator<E> out{depth, std::min(depth, x.trust * k), {}};
  for (const auto& [ij, a] : x.entries) {
    const auto i = ij.first * k;
    const auto j = ij.second * k;
    if (i < depth && j < depth) out.entries.emplace(std::pair{i, j}, a);
  }
  return out;
}

// --- Toeplitz generators and theta_{n,m} -------------------------------------------

/// A generator of T_n: phi^{(n)}(a) or T^{(n)}(b).
template <class E>
struct ToeplitzGenerator {
  enum class Kind { kPhi, kCreation } kind = Kind::kPhi;
  E value;
};

/// theta_{n,m}(phi^{(n)}(a)) = sum_j phi^{(m)}(alpha^{jn}(a)) e_jj and
/// theta_{n,m}(T^{(n)}(b)) = T^{(m)}(alpha^{(k-1)n}(b)) e_{0,k-1} + sum_{j<k-1} phi^{(m)}(alpha^{jn}(b)) e_{j+1,j},
/// with k = m/n, as a k x k matrix over FockSpace(alpha^m) of the given depth.
template <CoefficientAlgebra Alg>
FockMatrix<typename Alg::Element> theta_block_map(const Alg& alg, std::int64_t n, std::int64_t m, std::int64_t depth,
                                                  const ToeplitzGenerator<typename Alg::Element>& g) {
  if (n < 1 || m % n != 0) throw InvalidInput("theta_{n,m} requires n | m");
  const auto k = m / n;
  const FockSpace<Alg> fm(alg, m, depth);
  const FockMatrixAlgebra<Alg> mk(fm, k);
  auto out = mk.zero();
  if (g.kind == ToeplitzGenerator<typename Alg::Element>::Kind::kPhi) {
    for (std::int64_t j = 0; j < k; ++j) out.at(j, j) = fm.phi(alg.alpha_power(g.value, j * n));
  } else {
    out.at(0, k - 1) = fm.creation(alg.alpha_power(g.value, (k - 1) * n));
    for (std::int64_t j = 0; j + 1 < k; ++j) out.at(j + 1, j) = fm.phi(alg.alpha_power(g.value, j * n));
  }
  return out;
}

/// Second route to theta_{n,m}: build the generator on F^{(n)} and block-decompose by k = m/n.
template <CoefficientAlgebra Alg>
FockMatrix<typename Alg::Element> theta_reindex(const Alg& alg, std::int64_t n, std::int64_t m, std::int64_t depth,
                                                const ToeplitzGenerator<typename Alg::Element>& g) {
  if (n < 1 || m % n != 0) throw InvalidInput("theta_{n,m} requires n | m");
  const auto k = m / n;
  const FockSpace<Alg> fn(alg, n, depth * k);
  const auto op = g.kind == ToeplitzGenerator<typename Alg::Element>::Kind::kPhi ? fn.phi(g.value) : fn.creation(g.value);
  auto blocks = block_decompose(op, k);
  for (auto& b : blocks.blocks) b.trust = depth;
  return blocks;
}

/// Images under beta of phi^{(n)}(a) e00, T^{(n)}(b) e00 and e_ij as m x m matrices over F^{(m)}.
template <CoefficientAlgebra Alg>
FockMatrix<typename Alg::Element> beta_generator_image(const Alg& alg, std::int64_t n, std::int64_t m,
                                                       std::int64_t depth,
                                                       const ToeplitzGenerator<typename Alg::Element>& g) {
  const auto k = m / n;
  const FockSpace<Alg> fm(alg, m, depth);
  const FockMatrixAlgebra<Alg> mm(fm, m);
  auto out = mm.zero();
  if (g.kind == ToeplitzGenerator<typename Alg::Element>::Kind::kPhi) {
    for (std::int64_t j = 0; j < k; ++j) out.at(j * n, j * n) = fm.phi(alg.alpha_power(g.value, j * n));
  } else {
    for (std::int64_t j = 0; j + 1 < k; ++j) out.at((j + 1) * n, j * n) = fm.phi(alg.alpha_power(g.value, j * n));
    out.at(0, (k - 1) * n) = fm.creation(alg.alpha_power(g.value, (k - 1) * n));
  }
  return out;
}

template <CoefficientAlgebra Alg>
FockMatrix<typename Alg::Element> beta_unit_image(const Alg& alg, std::int64_t n, std::int64_t m, std::int64_t depth,
                                                  std::int64_t i, std::int64_t j) {
  const FockSpace<Alg> fm(alg, m, depth);
  const FockMatrixAlgebra<Alg> mm(fm, m);
  auto out = mm.zero();
  for (std::int64_t l = 0; l < m / n; ++l) out.at(i + l * n, j + l * n) = fm.identity();
  return out;
}

/// U* (I (x) theta_{n,m}) U: an n x n matrix X over T_n mapped entrywise by theta into
/// k x k blocks, then reindexed by (outer i, inner p) -> p n + i.
template <class E>
FockMatrix<E> shuffle_blocks(std::int64_t n, std::int64_t k, const std::vector<FockMatrix<E>>& entry_images,
                             const FockOperator<E>& zero) {
  const auto m = n * k;
  FockMatrix<E> out{m, std::vector<FockOperator<E>>(m * m, zero)};
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      const auto& img = entry_images[i * n + j];
      for (std::int64_t p = 0; p < k; ++p) {
        for (std::int64_t q = 0; q < k; ++q) out.at(p * n + i, q * n + j) = img.at(p, q);
      }
    }
  }
  return out;
}

// --- Verification suites ---------------------------------------------------------

namespace detail {
template <class Alg>
void expect_fock(std::vector<Failure>& f, const FockSpace<Alg>& space, const char* check,
                 const FockOperator<typename Alg::Element>& lhs, const FockOperator<typename Alg::Element>& rhs) {
  if (!space.equal(lhs, rhs)) f.push_back(Failure{0, check, space.to_json(lhs), space.to_json(rhs)});
}
template <class Alg>
void expect_fock_matrix(std::vector<Failure>& f, const FockMatrixAlgebra<Alg>& alg, const char* check,
                        const FockMatrix<typename Alg::Element>& lhs, const FockMatrix<typename Alg::Element>& rhs) {
  if (!alg.equal(lhs, rhs)) f.push_back(Failure{0, check, alg.to_json(lhs), alg.to_json(rhs)});
}
}  // namespace detail

/// phi(a c*) - T(alpha(a)) T(alpha(c))* = phi(a c*) P_0 at depth K.
template <CoefficientAlgebra Alg>
std::vector<Failure> check_vacuum_identity(const Alg& alg, const typename Alg::Element& a, const typename Alg::Element& c,
                                 std::int64_t depth) {
  if (depth < 3) throw InvalidInput("the vacuum identity check needs depth >= 3");
  const FockSpace<Alg> f(alg, 1, depth);
  const auto acs = alg.mul(a, alg.star(c));
  const auto lhs = f.sub(f.phi(acs), f.compose(f.creation(alg.alpha_power(a, 1)),
                                               f.adjoint(f.creation(alg.alpha_power(c, 1)))));
  const auto rhs = f.compose(f.phi(acs), f.vacuum_projection());
  std::vector<Failure> out;
  detail::expect_fock(out, f, "vacuum-identity", lhs, rhs);
  return out;
}

/// Pair 0 is (a, c) = (1, 1); further pairs are random.
template <CoefficientAlgebra Alg>
Report verify_vacuum_identity(const Alg& alg, std::int64_t depth, std::uint64_t seed, std::size_t count,
                    Execution mode = default_execution()) {
  return run_cases(
      "fock-id", count,
      [&](std::size_t i) {
        if (i == 0) return check_vacuum_identity(alg, alg.unit(), alg.unit(), depth);
        auto rng = case_rng(seed, "fock-id", i);
        const auto a = alg.sample(rng);
        const auto c = alg.sample(rng);
        return check_vacuum_identity(alg, a, c, depth);
      },
      mode);
}

/// Block equations for T_lambda(b) with k = period: block (l+1, l) is
/// S^{l+1} phi^{(k)}(alpha^l(lambda_{l+1} b)) S^{*l} for l < k-1, block (0, k-1) is
/// T^{(k)}(alpha^{k-1}(lambda_k b)) S^{*(k-1)}, and all other blocks vanish. Checked twice:
/// as operators on F (phi^{(k)}, T^{(k)} spread onto levels 0, k, 2k, ...), and after the
/// diagonal conjugation realized as block reindexing, where the blocks are phi^{(k)}(.) and T^{(k)}(.).
template <CoefficientAlgebra Alg>
std::vector<Failure> check_weighted_blocks(const Alg& alg, const WeightSequence<typename Alg::Element>& lambda,
                                                const typename Alg::Element& b, std::int64_t depth) {
  const auto k = lambda.period();
  if (depth < 3 * k) throw InvalidInput("block check needs depth >= 3 * period");
  const FockSpace<Alg> f(alg, 1, depth);
  const auto t = f.weighted(lambda, b);
  std::vector<Failure> out;

  // Operators on F.
  const FockSpace<Alg> fk(alg, k, (depth + k - 1) / k + 1);
  for (std::int64_t r = 0; r < k; ++r) {
    for (std::int64_t c = 0; c < k; ++c) {
      const auto part = block_part(t, k, r, c);
      FockOperator<typename Alg::Element> want = f.zero();
      if (k > 1 && c + 1 < k && r == c + 1) {
        const auto l = c;
        const auto inner = spread_levels(fk.phi(alg.alpha_power(alg.mul(lambda.at(l + 1), b), l)), k, depth);
        want = f.compose(f.compose(f.shift_power(l + 1), inner), f.adjoint(f.shift_power(l)));
      } else if (r == 0 && c == k - 1) {
        const auto inner = spread_levels(fk.creation(alg.alpha_power(alg.mul(lambda.at(k), b), k - 1)), k, depth);
        want = f.compose(inner, f.adjoint(f.shift_power(k - 1)));
      }
      detail::expect_fock(out, f, "block-on-F", part, want);
    }
  }

  // Reindexed blocks.
  const auto blocks = block_decompose(t, k);
  const FockSpace<Alg> fb(alg, k, blocks.at(0, 0).depth);
  for (std::int64_t r = 0; r < k; ++r) {
    for (std::int64_t c = 0; c < k; ++c) {
      FockOperator<typename Alg::Element> want = fb.zero();
      if (k > 1 && c + 1 < k && r == c + 1) {
        want = fb.phi(alg.alpha_power(alg.mul(lambda.at(c + 1), b), c));
      } else if (r == 0 && c == k - 1) {
        want = fb.creation(alg.alpha_power(alg.mul(lambda.at(k), b), k - 1));
      }
      detail::expect_fock(out, fb, "block-reindexed", blocks.at(r, c), want);
    }
  }
  return out;
}

/// Case 0 uses lambda = 1 and b = 1; the rest draw random weights and arguments.
template <CoefficientAlgebra Alg>
Report verify_weighted_blocks(const Alg& alg, std::int64_t period, std::int64_t depth, std::uint64_t seed,
                                   std::size_t count, Execution mode = default_execution()) {
  return run_cases(
      "fock-blocks", count,
      [&](std::size_t i) {
        WeightSequence<typename Alg::Element> lambda;
        if (i == 0) {
          lambda.weights.assign(period, alg.unit());
          return check_weighted_blocks(alg, lambda, alg.unit(), depth);
        }
        auto rng = case_rng(seed, "fock-blocks", i);
        for (std::int64_t j = 0; j < period; ++j) lambda.weights.push_back(alg.sample(rng));
        return check_weighted_blocks(alg, lambda, alg.sample(rng), depth);
      },
      mode);
}

/// theta_{n,m}(phi^{(n)}(ac*) - T^{(n)}(alpha^n a) T^{(n)}(alpha^n c)*) equals
/// (phi^{(m)}(ac*) - T^{(m)}(alpha^m a) T^{(m)}(alpha^m c)*) e00, with theta applied to the
/// generators and extended multiplicatively.
template <CoefficientAlgebra Alg>
std::vector<Failure> check_compact_preservation(const Alg& alg, std::int64_t n, std::int64_t m,
                                                const typename Alg::Element& a, const typename Alg::Element& c,
                                                std::int64_t depth) {
  using Gen = ToeplitzGenerator<typename Alg::Element>;
  const auto k = m / n;
  const FockSpace<Alg> fm(alg, m, depth);
  const FockMatrixAlgebra<Alg> mk(fm, k);
  const auto acs = alg.mul(a, alg.star(c));
  const auto ta = theta_block_map(alg, n, m, depth, Gen{Gen::Kind::kCreation, alg.alpha_power(a, n)});
  const auto tc = theta_block_map(alg, n, m, depth, Gen{Gen::Kind::kCreation, alg.alpha_power(c, n)});
  const auto lhs = mk.sub(theta_block_map(alg, n, m, depth, Gen{Gen::Kind::kPhi, acs}), mk.mul(ta, mk.adjoint(tc)));
  const auto corner = fm.sub(fm.phi(acs), fm.compose(fm.creation(alg.alpha_power(a, m)),
                                                     fm.adjoint(fm.creation(alg.alpha_power(c, m)))));
  const auto rhs = mk.embed(0, 0, corner);
  std::vector<Failure> out;
  detail::expect_fock_matrix(out, mk, "compact-preservation", lhs, rhs);
  // The corner is the vacuum-supported operator phi^{(m)}(ac*) P_0.
  detail::expect_fock(out, fm, "corner-is-compact", corner, fm.compose(fm.phi(acs), fm.vacuum_projection()));
  return out;
}

template <CoefficientAlgebra Alg>
Report verify_compact_preservation(const Alg& alg, std::int64_t n, std::int64_t m, std::int64_t depth,
                                   std::uint64_t seed, std::size_t count, Execution mode = default_execution()) {
  if (n < 1 || m % n != 0) throw InvalidInput("compact preservation requires n | m");
  return run_cases(
      "compact-preserve", count,
      [&](std::size_t i) {
        if (i == 0) return check_compact_preservation(alg, n, m, alg.unit(), alg.unit(), depth);
        auto rng = case_rng(seed, "compact-preserve", i);
        const auto a = alg.sample(rng);
        const auto c = alg.sample(rng);
        return check_compact_preservation(alg, n, m, a, c, depth);
      },
      mode);
}

/// beta_{n,m} = U*(I (x) theta_{n,m})U on the generators phi^{(n)}(a) e00, T^{(n)}(b) e00, e_ij,
/// and agreement of theta_block_map with the block-reindexing route.
template <CoefficientAlgebra Alg>
Report verify_shuffle(const Alg& alg, std::int64_t n, std::int64_t m, std::int64_t depth, std::uint64_t seed,
                      std::size_t count, Execution mode = default_execution()) {
  using Gen = ToeplitzGenerator<typename Alg::Element>;
  if (n < 1 || m % n != 0) throw InvalidInput("shuffle check requires n | m");
  const auto k = m / n;
  const FockSpace<Alg> fm(alg, m, depth);
  const FockMatrixAlgebra<Alg> mm(fm, m);
  const FockMatrixAlgebra<Alg> mk(fm, k);
  // Case i: coefficient i (0 is the unit), each as phi-generator, creation-generator, and
  // the first case also runs every e_ij.
  return run_cases(
      "shuffle", count,
      [&](std::size_t i) {
        std::vector<Failure> f;
        auto rng = case_rng(seed, "shuffle", i);
        const auto a = i == 0 ? alg.unit() : alg.sample(rng);
        const FockMatrix<typename Alg::Element> identity_k = [&] {
          auto id = mk.zero();
          for (std::int64_t p = 0; p < k; ++p) id.at(p, p) = fm.identity();
          return id;
        }();
        for (const auto kind : {Gen::Kind::kPhi, Gen::Kind::kCreation}) {
          const Gen g{kind, a};
          const auto via_formula = theta_block_map(alg, n, m, depth, g);
          detail::expect_fock_matrix(f, mk, "theta-two-routes", via_formula, theta_reindex(alg, n, m, depth, g));
          std::vector<FockMatrix<typename Alg::Element>> images(n * n, mk.zero());
          images[0] = via_formula;
          detail::expect_fock_matrix(f, mm, "beta-generator", shuffle_blocks(n, k, images, fm.zero()),
                                     beta_generator_image(alg, n, m, depth, g));
        }
        if (i == 0) {
          for (std::int64_t r = 0; r < n; ++r) {
            for (std::int64_t c = 0; c < n; ++c) {
              std::vector<FockMatrix<typename Alg::Element>> images(n * n, mk.zero());
              images[r * n + c] = identity_k;
              detail::expect_fock_matrix(f, mm, "beta-unit", shuffle_blocks(n, k, images, fm.zero()),
                                         beta_unit_image(alg, n, m, depth, r, c));
            }
          }
        }
        return f;
      },
      mode);
}

}  // namespace bdlab
