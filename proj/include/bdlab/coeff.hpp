#pragma once

#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bdlab/random.hpp"
#include "bdlab/rational.hpp"
#include "bdlab/scalar.hpp"

namespace bdlab {

/// Largest |degree| allowed in z (circle functions) and u / U (twisted Laurent sums).
std::int64_t degree_cap();
void set_degree_cap(std::int64_t cap);
void check_degree(std::int64_t degree, const char* what);

/// Rotation angle q + r*theta over the single formal irrational theta.
struct Angle {
  Rational q = 0;
  Rational r = 1;

  static Angle theta() { return Angle{0, 1}; }
  Angle negated() const { return Angle{-q, -r}; }
  Angle divided_by(std::int64_t p) const;
  Angle times(std::int64_t p) const;

  friend bool operator==(const Angle&, const Angle&) = default;
};

/// Accepts forms such as "theta", "1/4+theta", "-theta+1/8", "theta/2", "2*theta", "1/3".
Angle parse_angle(std::string_view text);
std::string to_string(const Angle& a);
nlohmann::json to_json(const Angle& a);
Angle angle_from_json(const nlohmann::json& j);

struct SampleOptions {
  std::int64_t max_degree = 2;  ///< z-degree bound for circle functions
  int max_terms = 3;
};

/// Small random scalar: rational coefficients with occasional roots of unity and t-powers.
Scalar random_scalar(Rng& rng);

// --- C(T) with rotation -------------------------------------------------------

/// Trigonometric polynomial sum c_m z^m; zero coefficients are never stored.
struct CircleFunction {
  std::map<std::int64_t, Scalar> coeffs;
  friend bool operator==(const CircleFunction&, const CircleFunction&) = default;
};

/// C(T) with alpha(f)(s) = f(s - angle), restricted to trigonometric polynomials.
class CircleRotation {
 public:
  using Element = CircleFunction;

  explicit CircleRotation(Angle angle = Angle::theta()) : angle_(std::move(angle)) {}

  static std::string_view tag() { return "circle"; }
  const Angle& angle() const { return angle_; }

  Element zero() const { return {}; }
  Element unit() const { return constant(Scalar(1)); }
  Element constant(const Scalar& c) const { return monomial(c, 0); }
  /// c * z^power.
  Element monomial(const Scalar& c, std::int64_t power) const;

  Element add(const Element& x, const Element& y) const;
  Element sub(const Element& x, const Element& y) const;
  Element neg(const Element& x) const;
  Element mul(const Element& x, const Element& y) const;
  Element scale(const Scalar& c, const Element& x) const;
  Element star(const Element& x) const;
  /// alpha^m: z^p -> e(-p*m*q) t^{-p*m*r} z^p for angle q + r*theta.
  Element alpha_power(const Element& x, std::int64_t m) const;
  /// Coefficient of z^0 (normalized Lebesgue integral).
  Scalar trace0(const Element& x) const;
  bool is_zero(const Element& x) const { return x.coeffs.empty(); }
  bool equal(const Element& x, const Element& y) const { return x == y; }

  Element sample(Rng& rng, const SampleOptions& opts = {}) const;

  /// Numerical value at s in R/Z with t = e^{2 pi i theta0}.
  std::complex<double> evaluate(const Element& x, double theta0, double s) const;

  nlohmann::json to_json(const Element& x) const;
  Element from_json(const nlohmann::json& j) const;
  nlohmann::json describe() const;

 private:
  Angle angle_;
};

// --- C(Z/d) with the cyclic shift ---------------------------------------------

struct FiniteCyclicFunction {
  std::vector<Scalar> values;
  std::int64_t modulus() const { return static_cast<std::int64_t>(values.size()); }
  friend bool operator==(const FiniteCyclicFunction&, const FiniteCyclicFunction&) = default;
};

/// Functions on Z/d with alpha(f)(i) = f(i - 1). trace0 is the uniform average.
class FiniteCyclicShift {
 public:
  using Element = FiniteCyclicFunction;

  explicit FiniteCyclicShift(std::int64_t d);

  static std::string_view tag() { return "cyclic"; }
  std::int64_t modulus() const { return d_; }

  Element zero() const;
  Element unit() const { return constant(Scalar(1)); }
  Element constant(const Scalar& c) const;
  /// Indicator of the point i, times c.
  Element point(std::int64_t i, const Scalar& c = Scalar(1)) const;

  Element add(const Element& x, const Element& y) const;
  Element sub(const Element& x, const Element& y) const;
  Element neg(const Element& x) const;
  Element mul(const Element& x, const Element& y) const;
  Element scale(const Scalar& c, const Element& x) const;
  Element star(const Element& x) const;
  Element alpha_power(const Element& x, std::int64_t m) const;
  Scalar trace0(const Element& x) const;
  bool is_zero(const Element& x) const;
  bool equal(const Element& x, const Element& y) const { return x == y; }

  Element sample(Rng& rng, const SampleOptions& opts = {}) const;

  nlohmann::json to_json(const Element& x) const;
  Element from_json(const nlohmann::json& j) const;
  nlohmann::json describe() const;

 private:
  void check(const Element& x) const;
  std::int64_t d_;
};

/// Nonempty proper subset of Z/d closed under i -> i + n, if one exists.
/// Functions supported on it form a proper alpha^n-invariant ideal of C(Z/d).
std::optional<std::vector<std::int64_t>> cyclic_invariant_ideal_search(std::int64_t d, std::int64_t n);

// --- Abstraction --------------------------------------------------------------

template <class A>
concept CoefficientAlgebra =
    std::copy_constructible<A> &&
    requires(const A& alg, const typename A::Element& x, const Scalar& c, std::int64_t m, Rng& rng,
             const nlohmann::json& j) {
      { alg.zero() } -> std::same_as<typename A::Element>;
      { alg.unit() } -> std::same_as<typename A::Element>;
      { alg.constant(c) } -> std::same_as<typename A::Element>;
      { alg.add(x, x) } -> std::same_as<typename A::Element>;
      { alg.sub(x, x) } -> std::same_as<typename A::Element>;
      { alg.neg(x) } -> std::same_as<typename A::Element>;
      { alg.mul(x, x) } -> std::same_as<typename A::Element>;
      { alg.scale(c, x) } -> std::same_as<typename A::Element>;
      { alg.star(x) } -> std::same_as<typename A::Element>;
      { alg.alpha_power(x, m) } -> std::same_as<typename A::Element>;
      { alg.trace0(x) } -> std::same_as<Scalar>;
      { alg.is_zero(x) } -> std::same_as<bool>;
      { alg.equal(x, x) } -> std::same_as<bool>;
      { alg.sample(rng) } -> std::same_as<typename A::Element>;
      { alg.to_json(x) } -> std::same_as<nlohmann::json>;
      { alg.from_json(j) } -> std::same_as<typename A::Element>;
      { A::tag() } -> std::convertible_to<std::string_view>;
    };

/// The same algebra with alpha replaced by alpha^{-1}.
template <CoefficientAlgebra Base>
class InverseAlpha {
 public:
  using Element = typename Base::Element;

  explicit InverseAlpha(Base base) : base_(std::move(base)) {}

  static std::string_view tag() { return Base::tag(); }
  const Base& base() const { return base_; }

  Element zero() const { return base_.zero(); }
  Element unit() const { return base_.unit(); }
  Element constant(const Scalar& c) const { return base_.constant(c); }
  Element add(const Element& x, const Element& y) const { return base_.add(x, y); }
  Element sub(const Element& x, const Element& y) const { return base_.sub(x, y); }
  Element neg(const Element& x) const { return base_.neg(x); }
  Element mul(const Element& x, const Element& y) const { return base_.mul(x, y); }
  Element scale(const Scalar& c, const Element& x) const { return base_.scale(c, x); }
  Element star(const Element& x) const { return base_.star(x); }
  Element alpha_power(const Element& x, std::int64_t m) const { return base_.alpha_power(x, -m); }
  Scalar trace0(const Element& x) const { return base_.trace0(x); }
  bool is_zero(const Element& x) const { return base_.is_zero(x); }
  bool equal(const Element& x, const Element& y) const { return base_.equal(x, y); }
  Element sample(Rng& rng, const SampleOptions& opts = {}) const { return base_.sample(rng, opts); }
  nlohmann::json to_json(const Element& x) const { return base_.to_json(x); }
  Element from_json(const nlohmann::json& j) const { return base_.from_json(j); }

 private:
  Base base_;
};

}  // namespace bdlab
