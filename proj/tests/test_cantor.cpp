#include <doctest.h>

#include "bdlab/cantor.hpp"

using namespace bdlab;

namespace {
const CircleRotation kCircle;
const StageSequence kSeq({1, 2, 6, 12});
using Od = Odometer<CircleRotation>;
CircleFunction z(std::int64_t p = 1) { return kCircle.monomial(Scalar(1), p); }
using Digits = std::vector<std::int64_t>;

// rho computed literally as the product U^{-i} (a delta_0) U^{j + n l}.
OdometerElement<CircleFunction> rho_literal(const Od& od, std::int64_t k, const MatrixElement<CircleFunction>& x) {
  const std::int64_t n = od.cylinders(k);
  auto out = od.zero(k);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      for (const auto& [l, a] : x.at(i, j).coeffs) {
        out = od.add(out, od.mul(od.mul(od.u(-i), od.element(od.indicator(k, 0, a), 0)), od.u(j + n * l)));
      }
    }
  }
  return out;
}
}  // namespace

TEST_CASE("odometer digits") {
  const Digits radii{2, 3};
  CHECK(odometer_step(radii, {1, 2}, 1) == Digits{0, 0});
  CHECK(digits_to_index(radii, {1, 2}) == 5);
  CHECK(odometer_step(radii, {0, 0}, 1) == Digits{1, 0});
  CHECK(odometer_step(radii, {1, 0}, 1) == Digits{0, 1});
  CHECK(flip(radii, {0, 1}) == Digits{1, 1});
  for (std::int64_t j = 0; j < 6; ++j) {
    const auto x = index_to_digits(radii, j);
    CHECK(digits_to_index(radii, x) == j);
    CHECK(flip(radii, flip(radii, x)) == x);
    CHECK(flip(radii, odometer_step(radii, x, 1)) == odometer_step(radii, flip(radii, x), -1));
  }
  const Digits big{2, 3, 5, 2};
  for (int i = 0; i < 100; ++i) {
    auto rng = case_rng(9, "digits", i);
    Digits x;
    for (const auto m : big) x.push_back(uniform_int(rng, 0, m - 1));
    CHECK(odometer_step(big, odometer_step(big, x, 1), -1) == x);
  }
  CHECK_THROWS_AS(odometer_step(radii, {2, 0}, 1), InvalidInput);
  CHECK_THROWS_AS(flip(radii, {0}), InvalidInput);
  CHECK(verify_flip_conjugacy(kSeq).passed());
  CHECK(verify_flip_conjugacy(StageSequence({1, 2, 4, 8, 16, 32, 64})).cases == 7);
  CHECK(verify_flip_conjugacy(StageSequence({1, 2, 4, 8, 16, 32, 64, 128})).cases == 7);
}

TEST_CASE("sigma on cylinder functions") {
  const Od od(kCircle, kSeq);
  const auto d0 = od.indicator(3, 0);
  CHECK(od.fn_equal(od.sigma(d0, 1), od.indicator(3, 1)));
  CHECK(od.fn_equal(od.sigma(d0, 0), d0));
  CHECK(od.fn_equal(od.sigma(d0, 6), d0));
  auto rng = case_rng(2, "sigma", 0);
  const auto a = kCircle.sample(rng);
  const auto c = od.constant_function(3, a);
  CHECK(od.fn_equal(od.sigma(c, 6), od.constant_function(3, kCircle.alpha_power(a, 6))));
  const auto f = od.sample_function(rng, 2);
  CHECK(od.fn_equal(od.sigma(od.promote(f, 4), 5), od.promote(od.sigma(f, 5), 4)));
  // U^j delta_0 U^{-j} = delta_j.
  for (std::int64_t j = 0; j < 8; ++j) {
    CHECK(od.equal(od.mul(od.mul(od.u(j), od.element(d0, 0)), od.u(-j)), od.element(od.indicator(3, j), 0)));
  }
}

TEST_CASE("odometer crossed product") {
  const Od od(kCircle, kSeq);
  const auto d0u = od.element(od.indicator(3, 0), 1);
  CHECK(od.is_zero(od.mul(d0u, d0u)));
  auto rng = case_rng(3, "odo", 0);
  const auto f = od.sample_function(rng, 3), g = od.sample_function(rng, 2);
  CHECK(od.equal(od.mul(od.element(f, 0), od.element(g, 0)), od.element(od.fn_mul(f, g), 0)));
  for (int i = 0; i < 100; ++i) {
    auto r = case_rng(3, "odo-axioms", i);
    const auto x = od.sample(r, uniform_int(r, 1, 4));
    const auto y = od.sample(r, uniform_int(r, 1, 4));
    const auto w = od.sample(r, 2);
    const auto xx = od.mul(x, od.star(x));
    CHECK(od.equal(od.star(xx), xx));
    CHECK(od.equal(od.star(od.mul(x, y)), od.mul(od.star(y), od.star(x))));
    CHECK(od.equal(od.mul(od.mul(x, y), w), od.mul(x, od.mul(y, w))));
    CHECK(od.equal(od.star(od.star(x)), x));
  }
  const auto x = od.sample(rng, 3);
  CHECK(od.equal(od.from_json(od.to_json(x)), x));
  CHECK(od.to_json(od.u(2)).dump() ==
        R"({"coeffs":{"U:2":{"depth":1,"values":[{"z:0":[{"coeff":"1","root":"0","theta":"0"}]}]}},"depth":1})");
  CHECK_THROWS_AS(od.from_json(nlohmann::json::parse(R"({"depth":2,"coeffs":{"V:1":{}}})")), InvalidInput);
  CHECK_THROWS_AS(od.function_from_json(nlohmann::json::parse(R"({"depth":2,"values":[]})")), InvalidInput);
}

TEST_CASE("rho examples") {
  const Od od(kCircle, kSeq);
  const auto s2 = MatrixAlgebra<CircleRotation>::stage(kCircle, 2);
  const auto r01 = rho(od, 2, s2.unit_matrix(0, 1));
  CHECK(od.equal(r01, od.element(od.indicator(2, 0), 1)));
  CHECK(od.equal(rho(od, 2, s2.unit_matrix(1, 0)), od.element(od.indicator(2, 1), -1)));
  CHECK(od.equal(rho(od, 2, s2.embed(0, 0, s2.crossed().u(1))), od.element(od.indicator(2, 0), 2)));
  CHECK(od.equal(rho(od, 2, s2.one()), od.one(2)));
  const auto s6 = MatrixAlgebra<CircleRotation>::stage(kCircle, 6);
  for (int i = 0; i < 20; ++i) {
    auto rng = case_rng(5, "rho-literal", i);
    const auto x = s6.sample(rng);
    CHECK(od.equal(rho(od, 3, x), rho_literal(od, 3, x)));
  }
}

TEST_CASE("rho suites") {
  CHECK(verify_rho_homomorphism(kCircle, kSeq, 1, 1, 20).passed());
  CHECK(verify_rho_homomorphism(kCircle, kSeq, 2, 1, 100).passed());
  CHECK(verify_rho_homomorphism(kCircle, kSeq, 3, 1, 20).passed());
  CHECK(verify_rho_homomorphism(FiniteCyclicShift(4), kSeq, 3, 1, 20).passed());
  CHECK(verify_rg(kCircle, kSeq, 1, 1, 20).passed());
  CHECK(verify_rg(kCircle, kSeq, 2, 1, 50).passed());
  CHECK(verify_rg(FiniteCyclicShift(6), kSeq, 3, 1, 10).passed());
}

TEST_CASE("rho intertwines the connecting maps on generators") {
  const Od od(kCircle, kSeq);
  const ConnectingMap<CircleRotation> g(kCircle, 2, 6);
  const auto& s2 = g.source();
  auto rng = case_rng(6, "rg-gen", 0);
  const auto a = kCircle.sample(rng);
  CHECK(od.equal(rho(od, 3, g.apply(s2.embed(0, 0, s2.crossed().constant(a)))), od.element(od.indicator(2, 0, a), 0)));
  CHECK(od.equal(rho(od, 3, g.apply(s2.embed(0, 0, s2.crossed().u(1)))), od.element(od.indicator(2, 0), 2)));
}

TEST_CASE("psi and flip") {
  const Od od(kCircle, kSeq);
  const Odometer<InverseAlpha<CircleRotation>> target(InverseAlpha<CircleRotation>(kCircle), kSeq);
  const auto one = od.element(od.constant_function(3, kCircle.unit()), 0);
  CHECK(target.equal(psi(target, one), target.one(3)));
  // Psi(delta_0) at radii (2,3) is the indicator of the last cylinder.
  CHECK(target.equal(psi(target, od.element(od.indicator(3, 0), 0)), target.element(target.indicator(3, 5), 0)));
  CHECK(target.equal(psi(target, od.u(1)), target.u(-1)));
  CHECK(verify_psi_flip(kCircle, kSeq, 3, 1, 50).passed());
  CHECK(verify_psi_flip(FiniteCyclicShift(5), kSeq, 4, 1, 20).passed());
}

TEST_CASE("psi into the same sigma fails when alpha is not an involution") {
  const Od od(kCircle, kSeq);
  std::size_t bad = 0;
  for (int i = 0; i < 10; ++i) {
    auto rng = case_rng(7, "psi-wrong", i);
    const auto fn = od.sample_function(rng, 3);
    const auto pf = od.element(od.flip_function(fn), 0);
    const auto lhs = od.mul(od.mul(od.u(-1), pf), od.u(1));
    if (!od.equal(lhs, od.element(od.flip_function(od.sigma(fn, 1)), 0))) ++bad;
  }
  CHECK(bad > 0);
}

TEST_CASE("generation identity and trace state") {
  CHECK(verify_gk_generation(kCircle, kSeq).passed());
  CHECK(verify_gk_generation(kCircle, StageSequence({1, 3, 9, 27})).passed());
  const Od od(kCircle, kSeq);
  CHECK(od.state(od.one(4)) == Scalar(1));
  CHECK(od.state(od.u(1)) == Scalar(0));
  CHECK(od.state(od.element(od.indicator(3, 0, z()), 0)) == Scalar(0));
  CHECK(od.state(od.element(od.indicator(3, 2), 0)) == Scalar(make_rational(1, 6)));
}
