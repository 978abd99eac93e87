#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <json.hpp>

#include "bdlab/rational.hpp"

namespace bdlab {

/// Largest admissible root-of-unity denominator (conductor). Default 10^6.
std::int64_t max_conductor();
void set_max_conductor(std::int64_t limit);

/// Coefficients of the N-th cyclotomic polynomial, lowest degree first.
const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t n);

std::int64_t euler_phi(std::int64_t n);

/// Element of Q(zeta_N) in the power basis 1, zeta_N, ..., zeta_N^{phi(N)-1}.
///
/// The stored conductor is the lcm of the denominators of the root exponents that
/// actually occur after reduction modulo Phi_N; reduction is repeated until that
/// conductor is stable. Two values may sit at different conductors, so equality
/// lifts both to the joint conductor before comparing coordinates.
class Cyclotomic {
 public:
  Cyclotomic();
  explicit Cyclotomic(const Rational& r);

  /// e(exponent) = exp(2 pi i * exponent).
  static Cyclotomic root_of_unity(const Rational& exponent);

  std::int64_t conductor() const { return conductor_; }
  const std::vector<Rational>& coordinates() const { return coords_; }
  bool is_zero() const;

  /// Terms (root exponent in [0,1), coefficient) of the reduced form, nonzero only.
  std::vector<std::pair<Rational, Rational>> terms() const;

  Cyclotomic conj() const;
  std::complex<double> evaluate() const;

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b);
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b);
  Cyclotomic operator-() const;
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);

 private:
  Cyclotomic(std::int64_t conductor, std::vector<Rational> coords);
  static Cyclotomic normalized(std::int64_t conductor, std::vector<Rational> poly);
  std::vector<Rational> lifted(std::int64_t target) const;

  std::int64_t conductor_ = 1;
  std::vector<Rational> coords_;
};

/// Exact scalar: finite sum of c * e(root) * t^theta, with c and theta rational and t a
/// formal unit standing for e^{2 pi i theta} at an irrational, formal theta.
///
/// Stored as thetaExponent -> Cyclotomic with no zero entries, so the zero scalar is
/// the empty map. Values are immutable once built; every operation returns a new value.
class Scalar {
 public:
  Scalar() = default;
  Scalar(const Rational& r);  // NOLINT(google-explicit-constructor)
  Scalar(std::int64_t n);     // NOLINT(google-explicit-constructor)

  static Scalar root_of_unity(const Rational& exponent);
  static Scalar theta_power(const Rational& exponent);
  /// coeff * e(root) * t^theta.
  static Scalar term(const Rational& coeff, const Rational& root, const Rational& theta);

  bool is_zero() const { return parts_.empty(); }
  const std::map<Rational, Cyclotomic>& parts() const { return parts_; }

  Scalar star() const;

  /// Evaluates with t = exp(2 pi i theta0).
  std::complex<double> evaluate(double theta0) const;

  /// Rational value if the scalar is a plain rational number.
  bool is_rational() const;
  Rational rational_value() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  std::map<Rational, Cyclotomic> parts_;
};

/// Canonical JSON: array of {"coeff","root","theta"} sorted by (theta, root).
nlohmann::json to_json(const Scalar& s);
Scalar scalar_from_json(const nlohmann::json& j);

}  // namespace bdlab
