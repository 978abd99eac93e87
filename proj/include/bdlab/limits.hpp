#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdlab/crossed.hpp"
#include "bdlab/parallel.hpp"
#include "bdlab/sequence.hpp"

namespace bdlab {

/// The connecting *-homomorphism gamma_{n,m}: M_n(A x_{alpha^n} Z) -> M_m(A x_{alpha^m} Z).
///
/// With k = m/n it sends a e00 to sum_l alpha^{ln}(a) e_{ln,ln}, u_n e00 to
/// W = u_m e_{(k-1)n,0} + sum_{l<k-1} e_{ln,(l+1)n}, and e_ij to sum_l e_{i+ln,j+ln}.
/// A monomial a u^l e_ij is the product e_i0 (a e00) (u e00)^l e_0j, so its image is the
/// product of generator images (with W* for negative l).
template <CoefficientAlgebra Alg>
class ConnectingMap {
 public:
  using Source = MatrixAlgebra<Alg>;
  using Matrix = typename Source::Element;
  using Coeff = typename Alg::Element;

  ConnectingMap(const Alg& alg, std::int64_t n, std::int64_t m)
      : source_(Source::stage(alg, n)), target_(Source::stage(alg, checked_target(n, m))), k_(m / n) {}

  const Source& source() const { return source_; }
  const Source& target() const { return target_; }
  std::int64_t ratio() const { return k_; }

  Matrix apply(const Matrix& x) const {
    source_.check(x);
    if (k_ == 1) return x;
    const auto n = source_.size();
    const auto& tcp = target_.crossed();
    Matrix out = target_.zero();
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = 0; j < n; ++j) {
        for (const auto& [l, a] : x.at(i, j).coeffs) {
          // gamma(a u^l e00) = gamma(a e00) W^l has entries only between multiples of n;
          // gamma(e_i0) and gamma(e_0j) shift rows by i and columns by j.
          const auto core = target_.mul(diagonal_image(a), w_power(l));
          for (std::int64_t r = 0; r < k_; ++r) {
            for (std::int64_t s = 0; s < k_; ++s) {
              const auto& e = core.at(r * n, s * n);
              if (tcp.is_zero(e)) continue;
              out.at(r * n + i, s * n + j) = tcp.add(out.at(r * n + i, s * n + j), e);
            }
          }
        }
      }
    }
    return out;
  }

  /// gamma(a e00) = sum_l alpha^{ln}(a) e_{ln,ln}.
  Matrix diagonal_image(const Coeff& a) const {
    const auto& alg = source_.algebra();
    Matrix out = target_.zero();
    for (std::int64_t l = 0; l < k_; ++l) {
      out.at(l * source_.size(), l * source_.size()) =
          target_.crossed().constant(alg.alpha_power(a, l * source_.size()));
    }
    return out;
  }

  /// W^l with W = gamma(u_n e00); negative powers use W*.
  Matrix w_power(std::int64_t l) const {
    std::lock_guard<std::mutex> lock(*cache_mutex_);
    auto it = w_cache_->find(l);
    if (it != w_cache_->end()) return it->second;
    Matrix value = target_.one();
    if (l != 0) {
      const Matrix step = l > 0 ? w() : target_.star(w());
      for (std::int64_t i = 0; i < (l > 0 ? l : -l); ++i) value = target_.mul(value, step);
    }
    w_cache_->emplace(l, value);
    return value;
  }

  Matrix w() const {
    const auto n = source_.size();
    const auto& tcp = target_.crossed();
    Matrix out = target_.zero();
    out.at((k_ - 1) * n, 0) = tcp.u(1);
    for (std::int64_t l = 0; l + 1 < k_; ++l) out.at(l * n, (l + 1) * n) = tcp.one();
    return out;
  }

  /// Preimage of y if y lies in the image, read off the row-0 blocks and confirmed by
  /// mapping back; nullopt otherwise.
  std::optional<Matrix> left_inverse(const Matrix& y) const {
    target_.check(y);
    const auto n = source_.size();
    const auto& scp = source_.crossed();
    Matrix x = source_.zero();
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = 0; j < n; ++j) {
        auto entry = scp.zero();
        for (std::int64_t s = 0; s < k_; ++s) {
          // gamma(a u_n^{qk+s} e_ij) carries a u_m^q at position (i, j + s n).
          for (const auto& [q, a] : y.at(i, j + s * n).coeffs) {
            entry = scp.add(entry, scp.monomial(a, q * k_ + s));
          }
        }
        x.at(i, j) = std::move(entry);
      }
    }
    if (!target_.equal(apply(x), y)) return std::nullopt;
    return x;
  }

 private:
  static std::int64_t checked_target(std::int64_t n, std::int64_t m) {
    if (n < 1 || m < 1 || m % n != 0) {
      throw InvalidInput("gamma requires n | m (got n = " + std::to_string(n) + ", m = " + std::to_string(m) + ")");
    }
    return m;
  }

  Source source_;
  Source target_;
  std::int64_t k_;
  std::shared_ptr<std::mutex> cache_mutex_ = std::make_shared<std::mutex>();
  std::shared_ptr<std::map<std::int64_t, Matrix>> w_cache_ = std::make_shared<std::map<std::int64_t, Matrix>>();
};

template <CoefficientAlgebra Alg>
typename MatrixAlgebra<Alg>::Element gamma(const Alg& alg, std::int64_t n, std::int64_t m,
                                           const typename MatrixAlgebra<Alg>::Element& x) {
  return ConnectingMap<Alg>(alg, n, m).apply(x);
}

/// Generator set of a stage: a e00 for the given coefficients, u e00, u* e00 and all e_ij.
template <CoefficientAlgebra Alg>
std::vector<typename MatrixAlgebra<Alg>::Element> stage_generators(
    const MatrixAlgebra<Alg>& stage, const std::vector<typename Alg::Element>& coeffs) {
  std::vector<typename MatrixAlgebra<Alg>::Element> out;
  const auto& cp = stage.crossed();
  for (const auto& a : coeffs) out.push_back(stage.embed(0, 0, cp.constant(a)));
  out.push_back(stage.embed(0, 0, cp.u(1)));
  out.push_back(stage.embed(0, 0, cp.u(-1)));
  for (std::int64_t i = 0; i < stage.size(); ++i) {
    for (std::int64_t j = 0; j < stage.size(); ++j) out.push_back(stage.unit_matrix(i, j));
  }
  return out;
}

/// A few fixed plus random coefficients used to instantiate a e00 generators.
template <CoefficientAlgebra Alg>
std::vector<typename Alg::Element> generator_coefficients(const Alg& alg, Rng& rng, int random_count = 2) {
  std::vector<typename Alg::Element> out{alg.unit()};
  for (int i = 0; i < random_count; ++i) out.push_back(alg.sample(rng));
  return out;
}

namespace detail {
template <class Alg, class M>
void expect_equal(std::vector<Failure>& failures, const MatrixAlgebra<Alg>& alg, const char* check, const M& lhs,
                  const M& rhs) {
  if (!alg.equal(lhs, rhs)) failures.push_back(Failure{0, check, alg.to_json(lhs), alg.to_json(rhs)});
}
inline void expect_equal_scalar(std::vector<Failure>& failures, const char* check, const Scalar& lhs,
                                const Scalar& rhs) {
  if (!(lhs == rhs)) failures.push_back(Failure{0, check, to_json(lhs), to_json(rhs)});
}
}  // namespace detail

/// gamma(XY) = gamma(X)gamma(Y), gamma(X*) = gamma(X)*, gamma(1) = 1 and the left-inverse
/// round trip, on `count` random pairs.
template <CoefficientAlgebra Alg>
Report verify_gamma_homomorphism(const Alg& alg, std::int64_t n, std::int64_t m, std::uint64_t seed,
                                 std::size_t count, const MatrixSampleOptions& opts = {},
                                 Execution mode = default_execution()) {
  const ConnectingMap<Alg> g(alg, n, m);
  const auto& src = g.source();
  const auto& dst = g.target();
  return run_cases(
      "gamma-hom", count,
      [&](std::size_t i) {
        std::vector<Failure> f;
        auto rng = case_rng(seed, "gamma-hom", i);
        const auto x = src.sample(rng, opts);
        const auto y = src.sample(rng, opts);
        const auto gx = g.apply(x);
        const auto gy = g.apply(y);
        detail::expect_equal(f, dst, "multiplicative", g.apply(src.mul(x, y)), dst.mul(gx, gy));
        detail::expect_equal(f, dst, "star", g.apply(src.star(x)), dst.star(gx));
        if (i == 0) detail::expect_equal(f, dst, "unital", g.apply(src.one()), dst.one());
        const auto back = g.left_inverse(gx);
        if (!back || !src.equal(*back, x)) {
          f.push_back(Failure{0, "left-inverse", src.to_json(x), back ? src.to_json(*back) : nlohmann::json()});
        }
        return f;
      },
      mode);
}

/// gamma_{nk,nkl} o gamma_{n,nk} = gamma_{n,nkl} on the generators, then on `count` random elements.
template <CoefficientAlgebra Alg>
Report verify_gamma_composition(const Alg& alg, std::int64_t n, std::int64_t k, std::int64_t l, std::uint64_t seed,
                                std::size_t count, const MatrixSampleOptions& opts = {},
                                Execution mode = default_execution()) {
  const ConnectingMap<Alg> first(alg, n, n * k);
  const ConnectingMap<Alg> second(alg, n * k, n * k * l);
  const ConnectingMap<Alg> direct(alg, n, n * k * l);
  auto grng = case_rng(seed, "gamma-comp-generators", 0);
  const auto generators = stage_generators(first.source(), generator_coefficients(alg, grng));
  return run_cases(
      "gamma-comp", generators.size() + count,
      [&](std::size_t i) {
        std::vector<Failure> f;
        typename MatrixAlgebra<Alg>::Element x;
        if (i < generators.size()) {
          x = generators[i];
        } else {
          auto rng = case_rng(seed, "gamma-comp", i);
          x = first.source().sample(rng, opts);
        }
        detail::expect_equal(f, direct.target(), "composition", second.apply(first.apply(x)), direct.apply(x));
        return f;
      },
      mode);
}

/// matrix_trace(gamma(X)) = matrix_trace(X) on the generators and `count` random X.
template <CoefficientAlgebra Alg>
Report verify_trace_compatibility(const Alg& alg, std::int64_t n, std::int64_t m, std::uint64_t seed,
                                  std::size_t count, const MatrixSampleOptions& opts = {},
                                  Execution mode = default_execution()) {
  const ConnectingMap<Alg> g(alg, n, m);
  auto grng = case_rng(seed, "trace-compat-generators", 0);
  const auto generators = stage_generators(g.source(), generator_coefficients(alg, grng));
  return run_cases(
      "trace-compat", generators.size() + count,
      [&](std::size_t i) {
        std::vector<Failure> f;
        typename MatrixAlgebra<Alg>::Element x;
        if (i < generators.size()) {
          x = generators[i];
        } else {
          auto rng = case_rng(seed, "trace-compat", i);
          x = g.source().sample(rng, opts);
        }
        detail::expect_equal_scalar(f, "trace", g.target().trace(g.apply(x)), g.source().trace(x));
        return f;
      },
      mode);
}

// --- Direct limit ---------------------------------------------------------------

template <class E>
struct LimitElement {
  std::int64_t stage = 1;  ///< 1-based stage index k; value has size n_k
  MatrixElement<E> value;
};

/// Finite prefix of the direct system (B(n_k), gamma_{n_k, n_{k+1}}).
template <CoefficientAlgebra Alg>
class DirectLimit {
 public:
  using Matrix = typename MatrixAlgebra<Alg>::Element;
  using Element = LimitElement<typename Alg::Element>;

  DirectLimit(Alg alg, StageSequence sequence) : alg_(std::move(alg)), seq_(std::move(sequence)) {
    for (std::int64_t k = 1; k <= seq_.stages(); ++k) stages_.push_back(MatrixAlgebra<Alg>::stage(alg_, seq_.size(k)));
    for (std::int64_t k = 1; k < seq_.stages(); ++k) maps_.emplace_back(alg_, seq_.size(k), seq_.size(k + 1));
  }

  const StageSequence& sequence() const { return seq_; }
  const MatrixAlgebra<Alg>& stage(std::int64_t k) const {
    seq_.size(k);
    return stages_[k - 1];
  }
  const ConnectingMap<Alg>& connecting(std::int64_t k) const {
    seq_.radix(k);
    return maps_[k - 1];
  }

  Element element(std::int64_t k, Matrix value) const {
    stage(k).check(value);
    return Element{k, std::move(value)};
  }

  Element promote(const Element& e, std::int64_t target) const {
    if (target < e.stage) throw InvalidInput("cannot promote to an earlier stage");
    seq_.size(target);
    Matrix v = e.value;
    for (std::int64_t k = e.stage; k < target; ++k) v = maps_[k - 1].apply(v);
    return Element{target, std::move(v)};
  }

  Element add(const Element& x, const Element& y) const {
    const auto k = std::max(x.stage, y.stage);
    return Element{k, stage(k).add(promote(x, k).value, promote(y, k).value)};
  }
  Element mul(const Element& x, const Element& y) const {
    const auto k = std::max(x.stage, y.stage);
    return Element{k, stage(k).mul(promote(x, k).value, promote(y, k).value)};
  }
  Element star(const Element& x) const { return Element{x.stage, stage(x.stage).star(x.value)}; }
  bool equal(const Element& x, const Element& y) const {
    const auto k = std::max(x.stage, y.stage);
    return stage(k).equal(promote(x, k).value, promote(y, k).value);
  }
  /// The limit trace, computed at the element's own stage.
  Scalar trace(const Element& x) const { return stage(x.stage).trace(x.value); }

  nlohmann::json to_json(const Element& x) const {
    return {{"sequence", seq_.sizes()}, {"stage", x.stage}, {"value", stage(x.stage).to_json(x.value)}};
  }
  Element from_json(const nlohmann::json& j) const {
    if (!j.is_object() || !j.contains("stage") || !j.contains("value")) {
      throw InvalidInput("limit element must be {\"sequence\": [...], \"stage\": k, \"value\": matrix}");
    }
    if (j.contains("sequence") && j.at("sequence").get<std::vector<std::int64_t>>() != seq_.sizes()) {
      throw InvalidInput("limit element sequence does not match the configured sizes");
    }
    const auto k = j.at("stage").get<std::int64_t>();
    return element(k, stage(k).from_json(j.at("value")));
  }

 private:
  Alg alg_;
  StageSequence seq_;
  std::vector<MatrixAlgebra<Alg>> stages_;
  std::vector<ConnectingMap<Alg>> maps_;
};

// --- Amplification ----------------------------------------------------------------

/// Position of (block b, inner i) after the canonical shuffle of a p x p array of n x n blocks.
inline std::int64_t shuffle_position(std::int64_t p, std::int64_t n, std::int64_t index) {
  return (index % n) * p + index / n;
}

/// Conjugation by the shuffle permutation: M_p(M_n(.)) -> M_{pn}(.).
template <class E>
MatrixElement<E> amplification_shuffle(std::int64_t p, std::int64_t n, const MatrixElement<E>& x) {
  if (p < 1 || n < 1 || x.size != p * n) {
    throw InvalidInput("amplification shuffle needs a matrix of size p*n (size " + std::to_string(x.size) +
                       ", p = " + std::to_string(p) + ")");
  }
  MatrixElement<E> out{x.size, x.entries};
  for (std::int64_t r = 0; r < x.size; ++r) {
    for (std::int64_t c = 0; c < x.size; ++c) out.at(shuffle_position(p, n, r), shuffle_position(p, n, c)) = x.at(r, c);
  }
  return out;
}

/// Same entries, reinterpreted over a crossed product with a different power label.
template <class E>
MatrixElement<E> relabel_power(const MatrixElement<E>& x, std::int64_t power) {
  MatrixElement<E> out = x;
  for (auto& e : out.entries) e.power = power;
  return out;
}

/// Applies gamma_{n,m} to each n x n block of a p x p block matrix.
template <CoefficientAlgebra Alg>
typename MatrixAlgebra<Alg>::Element blockwise_gamma(const ConnectingMap<Alg>& g, std::int64_t p,
                                                     const typename MatrixAlgebra<Alg>::Element& x) {
  const auto n = g.source().size();
  const auto m = g.target().size();
  const MatrixAlgebra<Alg> out_alg(g.source().algebra(), p * m, m);
  auto out = out_alg.zero();
  for (std::int64_t b1 = 0; b1 < p; ++b1) {
    for (std::int64_t b2 = 0; b2 < p; ++b2) {
      auto block = g.source().zero();
      for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < n; ++j) block.at(i, j) = x.at(b1 * n + i, b2 * n + j);
      }
      const auto image = g.apply(block);
      for (std::int64_t i = 0; i < m; ++i) {
        for (std::int64_t j = 0; j < m; ++j) out.at(b1 * m + i, b2 * m + j) = image.at(i, j);
      }
    }
  }
  return out;
}

/// psi o (gamma_{n,m})_p = gamma'_{pn,pm} o psi, where the left side lives over alg with
/// stages of size n and the right side over alg_p (alpha_p^p = alpha) with stages of size pn.
/// Checked on generators placed in every block and on `count` random block matrices.
template <CoefficientAlgebra Alg>
Report verify_amplification_intertwining(const Alg& alg, const Alg& alg_p, std::int64_t p, std::int64_t n,
                                         std::int64_t m, std::uint64_t seed, std::size_t count,
                                         const MatrixSampleOptions& opts = {}, Execution mode = default_execution()) {
  if (p < 1) throw InvalidInput("amplification needs p >= 1");
  const ConnectingMap<Alg> g(alg, n, m);
  const ConnectingMap<Alg> gp(alg_p, p * n, p * m);
  const MatrixAlgebra<Alg> amplified(alg, p * n, n);
  auto grng = case_rng(seed, "amplification-generators", 0);
  std::vector<typename MatrixAlgebra<Alg>::Element> generators;
  for (const auto& gen : stage_generators(g.source(), generator_coefficients(alg, grng))) {
    for (std::int64_t b1 = 0; b1 < p; ++b1) {
      for (std::int64_t b2 = 0; b2 < p; ++b2) {
        auto x = amplified.zero();
        for (std::int64_t i = 0; i < n; ++i) {
          for (std::int64_t j = 0; j < n; ++j) x.at(b1 * n + i, b2 * n + j) = gen.at(i, j);
        }
        generators.push_back(std::move(x));
      }
    }
  }
  return run_cases(
      "amplification", generators.size() + count,
      [&](std::size_t i) {
        std::vector<Failure> f;
        typename MatrixAlgebra<Alg>::Element x;
        if (i < generators.size()) {
          x = generators[i];
        } else {
          auto rng = case_rng(seed, "amplification", i);
          x = amplified.sample(rng, opts);
        }
        const auto lhs = relabel_power(amplification_shuffle(p, m, blockwise_gamma(g, p, x)), p * m);
        const auto rhs = gp.apply(relabel_power(amplification_shuffle(p, n, x), p * n));
        detail::expect_equal(f, gp.target(), "intertwining", lhs, rhs);
        return f;
      },
      mode);
}

}  // namespace bdlab
