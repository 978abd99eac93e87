#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bdlab/coeff.hpp"
#include "bdlab/rational.hpp"
#include "bdlab/sequence.hpp"

namespace bdlab {

// --- Supernatural numbers -------------------------------------------------------

/// prod p^{e_p} with finite support and e_p in {1, 2, ..., infinity}.
struct SupernaturalNumber {
  static constexpr std::int64_t kInfinite = -1;
  std::map<std::int64_t, std::int64_t> factors;
  /// Built from a finite sequence prefix without a declared tail: exponents are lower bounds only.
  bool finite_evidence = false;

  bool infinite(std::int64_t p) const;
  /// Exponent of p (0 if absent, kInfinite for infinity).
  std::int64_t exponent(std::int64_t p) const;
  /// Same factors; the evidence flag is ignored.
  bool same_factors(const SupernaturalNumber& other) const;
};

/// Prime factorization of n >= 1 by trial division.
std::map<std::int64_t, std::int64_t> factorize(std::int64_t n);

/// Exponent-wise maximum over the sizes, with the declared primes raised to infinity.
/// Without a declared tail the result is marked finite evidence.
SupernaturalNumber supernatural_from_sequence(const std::vector<std::int64_t>& sizes,
                                              const std::optional<std::set<std::int64_t>>& tail = std::nullopt);
/// p * delta.
SupernaturalNumber supernatural_times(const SupernaturalNumber& delta, std::int64_t p);
bool supernatural_divides(const SupernaturalNumber& d1, const SupernaturalNumber& d2);

/// Accepts "1", "2^inf*3^2", "6" (= 2*3), "seq:1,2,4" and "seq:1,2,4+tail:2,3".
SupernaturalNumber parse_supernatural(std::string_view text);
std::string to_string(const SupernaturalNumber& d);
/// {"factors": {"2": "inf", "3": 2}, "finiteEvidence": bool}.
nlohmann::json to_json(const SupernaturalNumber& d);
SupernaturalNumber supernatural_from_json(const nlohmann::json& j);

// --- Q(delta) ------------------------------------------------------------------

/// Prime powers of the denominator of r when r lies in Q(delta), i.e. the finite part of delta it needs.
std::optional<std::map<std::int64_t, std::int64_t>> q_delta_witness(const Rational& r, const SupernaturalNumber& delta);
bool q_delta_member(const Rational& r, const SupernaturalNumber& delta);
/// Smallest stage k with r * n_k integral, if any.
std::optional<std::int64_t> q_delta_stage(const Rational& r, const StageSequence& seq);

// --- K-groups ------------------------------------------------------------------

/// q + m theta in Q(delta) + theta Z.
struct K0Class {
  Rational q = 0;
  std::int64_t m = 0;
  friend bool operator==(const K0Class&, const K0Class&) = default;
};
K0Class operator+(const K0Class& x, const K0Class& y);
K0Class operator-(const K0Class& x);
/// Class of the unit, with trace value 1.
inline K0Class k0_order_unit() { return K0Class{1, 0}; }
nlohmann::json to_json(const K0Class& c);

/// (a, b) in Q(delta) + Z.
struct K1Class {
  Rational a = 0;
  std::int64_t b = 0;
  friend bool operator==(const K1Class&, const K1Class&) = default;
};
K1Class operator+(const K1Class& x, const K1Class& y);
nlohmann::json to_json(const K1Class& c);

/// Stage-k class (a, b) in Z + Z mapped into the limit: (a / n_k, b).
K1Class k1_limit_normalize(const StageSequence& seq, std::int64_t k, const Integer& a, std::int64_t b);

// --- Theta enclosures ----------------------------------------------------------

struct Interval {
  Rational lo;
  Rational hi;
  Rational width() const { return hi - lo; }
};

/// Nested rational intervals around a numeric value of theta, indexed by refinement step.
class ThetaEnclosure {
 public:
  using Step = std::function<Interval(std::size_t)>;
  explicit ThetaEnclosure(Step step, std::string name = "custom") : step_(std::move(step)), name_(std::move(name)) {}

  /// Brackets between consecutive convergents of [a_0; a_1, ..., a_{s-1}, (period repeating)].
  static ThetaEnclosure continued_fraction(std::vector<std::int64_t> prefix, std::vector<std::int64_t> period);
  /// sqrt(2) - 1 = [0; 2, 2, 2, ...].
  static ThetaEnclosure sqrt2_minus_1();
  /// "sqrt2-1", "golden-1" or "cf:a0,a1;p1,p2" (semicolon starts the repeating part).
  static ThetaEnclosure parse(std::string_view text);

  Interval at(std::size_t step) const { return step_(step); }
  const std::string& name() const { return name_; }

 private:
  Step step_;
  std::string name_;
};

/// Enclosure of q + m theta of width below `precision`; ResourceLimit after `budget` refinements.
Interval k0_tau_value(const K0Class& c, const ThetaEnclosure& theta, const Rational& precision, std::size_t budget);
/// True when q + m theta > 0 or the class is zero; refines until the enclosure excludes 0.
bool k0_positive(const K0Class& c, const ThetaEnclosure& theta, std::size_t budget);

// --- Deciders ------------------------------------------------------------------

struct Decision {
  bool yes = false;
  std::string answer;
  bool finite_evidence = false;
  nlohmann::json witness;
};
nlohmann::json to_json(const Decision& d);

/// B(theta1, delta1) ~ B(theta2, delta2) iff delta1 = delta2 and theta1 - theta2 or theta1 + theta2 lies in Q(delta).
/// For angles q + r theta, q + r theta lies in Q(delta) iff r = 0 and q in Q(delta).
Decision decide_isomorphism(const Angle& theta1, const SupernaturalNumber& delta1, const Angle& theta2,
                            const SupernaturalNumber& delta2);

/// M_p(B(theta, delta)) = B(theta / p, p delta).
std::pair<Angle, SupernaturalNumber> decide_amplification(std::int64_t p, const Angle& theta,
                                                          const SupernaturalNumber& delta);

/// C(Z/d) x_shift: simple iff no stage has a proper nonempty shift-by-n_k invariant subset.
Decision decide_simplicity_finite_model(std::int64_t d, const StageSequence& seq);
/// Unique tracial state iff shift by n_k has a single orbit on Z/d at every stage.
Decision decide_trace_uniqueness_finite_model(std::int64_t d, const StageSequence& seq);
/// Circle rotations: unique trace for irrational angles, recorded as an assertion (not computed).
Decision assert_trace_uniqueness_circle(const Angle& angle);

}  // namespace bdlab
