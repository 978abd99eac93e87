#include <doctest.h>

#include <numeric>

#include "bdlab/coeff.hpp"
#include "bdlab/errors.hpp"

using namespace bdlab;

namespace {
Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

template <class Alg>
void check_automorphism_and_trace(const Alg& alg, const char* suite) {
  for (int i = 0; i < 200; ++i) {
    auto rng = case_rng(11, suite, i);
    const auto x = alg.sample(rng);
    const auto y = alg.sample(rng);
    const auto m = uniform_int(rng, -8, 8);
    const auto ax = alg.alpha_power(x, m);
    CHECK(alg.equal(alg.alpha_power(x, 0), x));
    CHECK(alg.equal(alg.alpha_power(alg.alpha_power(x, 3), m), alg.alpha_power(x, m + 3)));
    CHECK(alg.equal(alg.alpha_power(alg.mul(x, y), m), alg.mul(ax, alg.alpha_power(y, m))));
    CHECK(alg.equal(alg.alpha_power(alg.star(x), m), alg.star(ax)));
    CHECK(alg.trace0(ax) == alg.trace0(x));
    CHECK(alg.trace0(alg.mul(x, y)) == alg.trace0(alg.mul(y, x)));
  }
  CHECK(alg.trace0(alg.unit()) == Scalar(1));
}
}  // namespace

TEST_CASE("angle parsing") {
  CHECK(parse_angle("theta") == Angle::theta());
  CHECK(parse_angle("1/4+theta") == Angle{q(1, 4), 1});
  CHECK(parse_angle("-theta+1/8") == Angle{q(1, 8), -1});
  CHECK(parse_angle("theta/2") == Angle{0, q(1, 2)});
  CHECK(parse_angle("2*theta") == Angle{0, 2});
  CHECK(parse_angle("1/3") == Angle{q(1, 3), 0});
  CHECK(parse_angle(" 1/4 + 3/2*theta ") == Angle{q(1, 4), q(3, 2)});
  CHECK_THROWS_AS(parse_angle("phi"), InvalidInput);
  CHECK(Angle::theta().divided_by(2) == Angle{0, q(1, 2)});
  CHECK(angle_from_json(to_json(parse_angle("1/4+theta"))) == parse_angle("1/4+theta"));
}

TEST_CASE("circle rotation examples") {
  const CircleRotation alg;
  const auto z = alg.monomial(1, 1);
  // Substituting z = e(s) into f(s - theta) gives e(-theta) z = t^{-1} z.
  CHECK(alg.alpha_power(z, 1) == alg.monomial(Scalar::theta_power(-1), 1));
  CHECK(alg.alpha_power(z, 0) == z);
  const CircleRotation quarter(parse_angle("1/4"));
  CHECK(quarter.alpha_power(alg.monomial(1, 2), 1) == alg.monomial(-1, 2));
  CHECK(alg.trace0(z).is_zero());
  CHECK(alg.trace0(alg.add(alg.unit(), alg.monomial(3, 2))) == Scalar(1));
  CHECK(alg.trace0(alg.constant(Scalar::theta_power(1))) == Scalar::theta_power(1));
  CHECK(alg.from_json(alg.to_json(alg.add(z, alg.monomial(Scalar(q(1, 2)), -3)))) ==
        alg.add(z, alg.monomial(Scalar(q(1, 2)), -3)));
  CHECK(alg.star(z) == alg.monomial(1, -1));
}

TEST_CASE("circle multiplication agrees with pointwise evaluation") {
  const CircleRotation alg(parse_angle("1/3+theta/2"));
  for (int i = 0; i < 50; ++i) {
    auto rng = case_rng(3, "circle-eval", i);
    const auto x = alg.sample(rng), y = alg.sample(rng);
    const auto xy = alg.mul(x, y);
    for (int s = 0; s < 16; ++s) {
      const double pt = s / 16.0 + 0.013;
      const double th = 0.41421356;
      CHECK(std::abs(alg.evaluate(xy, th, pt) - alg.evaluate(x, th, pt) * alg.evaluate(y, th, pt)) < 1e-10);
    }
    // Rotation really is f(s - angle) numerically.
    const double th = 0.2718;
    const double angle = 1.0 / 3.0 + th / 2.0;
    const auto ax = alg.alpha_power(x, 1);
    CHECK(std::abs(alg.evaluate(ax, th, 0.3) - alg.evaluate(x, th, 0.3 - angle)) < 1e-10);
  }
}

TEST_CASE("circle automorphism and trace properties") {
  check_automorphism_and_trace(CircleRotation(), "circle-props");
  check_automorphism_and_trace(CircleRotation(parse_angle("1/4-theta/3")), "circle-props-2");
}

TEST_CASE("cyclic shift examples") {
  const FiniteCyclicShift alg(3);
  const Scalar a(1), b(2), c(3);
  const FiniteCyclicFunction f{{a, b, c}};
  CHECK(alg.alpha_power(f, 1) == FiniteCyclicFunction{{c, a, b}});
  CHECK(alg.alpha_power(f, 3) == f);
  const FiniteCyclicShift two(2);
  CHECK(two.alpha_power(FiniteCyclicFunction{{a, b}}, -1) == FiniteCyclicFunction{{b, a}});
  CHECK(alg.trace0(f) == Scalar(2));
  CHECK_THROWS_AS(alg.from_json(two.to_json(two.unit())), InvalidInput);
  CHECK_THROWS_AS(FiniteCyclicShift(0), InvalidInput);
  check_automorphism_and_trace(FiniteCyclicShift(5), "cyclic-props");
}

TEST_CASE("invariant ideal search") {
  CHECK(cyclic_invariant_ideal_search(2, 2) == std::vector<std::int64_t>{0});
  CHECK_FALSE(cyclic_invariant_ideal_search(3, 2).has_value());
  CHECK(cyclic_invariant_ideal_search(4, 2) == std::vector<std::int64_t>{0, 2});
  for (std::int64_t d = 1; d <= 24; ++d) {
    for (std::int64_t n = 1; n <= 24; ++n) {
      const auto s = cyclic_invariant_ideal_search(d, n);
      CHECK(s.has_value() == (std::gcd(n, d) != 1));
      if (s) {
        CHECK(!s->empty());
        CHECK(static_cast<std::int64_t>(s->size()) < d);
        for (const auto i : *s) CHECK(std::find(s->begin(), s->end(), (i + n) % d) != s->end());
      }
    }
  }
}

TEST_CASE("inverse alpha adapter") {
  const InverseAlpha<CircleRotation> inv{CircleRotation()};
  const CircleRotation alg;
  const auto z = alg.monomial(1, 1);
  CHECK(inv.alpha_power(z, 1) == alg.alpha_power(z, -1));
  static_assert(CoefficientAlgebra<InverseAlpha<FiniteCyclicShift>>);
  static_assert(CoefficientAlgebra<CircleRotation>);
}
