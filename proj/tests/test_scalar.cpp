#include <doctest.h>

#include <complex>

#include "bdlab/random.hpp"
#include "bdlab/coeff.hpp"
#include "bdlab/errors.hpp"
#include "bdlab/scalar.hpp"

using namespace bdlab;

namespace {
Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }
Scalar e(std::int64_t a, std::int64_t b) { return Scalar::root_of_unity(q(a, b)); }
Scalar t(std::int64_t a = 1, std::int64_t b = 1) { return Scalar::theta_power(q(a, b)); }
}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(to_string(parse_rational("6/8")) == "3/4");
  CHECK(to_string(parse_rational("-4/2")) == "-2");
  CHECK(to_string(parse_rational("0/5")) == "0");
  CHECK_THROWS(parse_rational("3/-6"));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("x"));
  CHECK(floor_mod(-1, 6) == 5);
  CHECK(floor_div(-1, 6) == -1);
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == std::vector<std::int64_t>{-1, 1});
  CHECK(cyclotomic_polynomial(3) == std::vector<std::int64_t>{1, 1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<std::int64_t>{1, 0, 1});
  CHECK(cyclotomic_polynomial(12) == std::vector<std::int64_t>{1, 0, -1, 0, 1});
  CHECK(euler_phi(12) == 4);
  CHECK(euler_phi(97) == 96);
}

TEST_CASE("scalar addition") {
  CHECK((e(1, 3) + e(2, 3) + Scalar(1)).is_zero());
  CHECK(t() + Scalar() == t());
  const Scalar half_t2 = Scalar::term(q(1, 2), 0, 2);
  CHECK(half_t2 + half_t2 == t(2));
  // Sum of all primitive 5th roots is -1; all 12th roots sum to 0.
  CHECK(e(1, 5) + e(2, 5) + e(3, 5) + e(4, 5) == Scalar(-1));
  Scalar all12;
  for (int j = 0; j < 12; ++j) all12 += e(j, 12);
  CHECK(all12.is_zero());
}

TEST_CASE("scalar multiplication") {
  CHECK(e(1, 4) * e(1, 4) == e(1, 2));
  CHECK(t() * t(-1) == Scalar(1));
  CHECK(e(1, 2) * e(1, 2) == Scalar(1));
  CHECK(e(1, 2) == Scalar(-1));
  CHECK(e(1, 6) * e(1, 6) * e(1, 6) == Scalar(-1));
  CHECK(t(1, 2) * t(1, 2) == t());
}

TEST_CASE("scalar star and equality") {
  CHECK(t().star() == t(-1));
  CHECK(e(1, 3).star() == e(2, 3));
  CHECK(Scalar(q(3, 5)).star() == Scalar(q(3, 5)));
  CHECK(e(1, 3) + e(2, 3) == Scalar(-1));
  CHECK_FALSE(t() == e(1, 2));
  CHECK(Scalar() == Scalar(0));
  // e(1/8) + e(-1/8) = sqrt(2); its square is 2 after reduction.
  const Scalar r2 = e(1, 8) + e(7, 8);
  CHECK(r2 * r2 == Scalar(2));
  CHECK_FALSE(r2.is_rational());
}

TEST_CASE("conductor shrinks to the minimal field") {
  const Scalar x = e(1, 12) * e(1, 12) * e(1, 12);  // e(1/4)
  REQUIRE(x.parts().size() == 1);
  CHECK(x.parts().begin()->second.conductor() == 4);
  const Scalar y = (e(1, 6) + e(5, 6));  // 2 cos(pi/3) = 1
  CHECK(y == Scalar(1));
  CHECK(y.parts().begin()->second.conductor() == 1);
}

TEST_CASE("scalar JSON is canonical") {
  const Scalar s = Scalar::term(q(1, 2), q(1, 4), 1) + Scalar(3);
  const auto j = to_json(s);
  CHECK(j.dump() ==
        R"([{"coeff":"3","root":"0","theta":"0"},{"coeff":"1/2","root":"1/4","theta":"1"}])");
  CHECK(scalar_from_json(j) == s);
  CHECK(scalar_from_json(nlohmann::json("2/4")) == Scalar(q(1, 2)));
  CHECK_THROWS(scalar_from_json(nlohmann::json::parse(R"([{"coeff":"x"}])")));
}

TEST_CASE("conductor limit") {
  const auto saved = max_conductor();
  set_max_conductor(100);
  CHECK_THROWS_AS(Scalar::root_of_unity(q(1, 101)), ResourceLimit);
  set_max_conductor(saved);
}

TEST_CASE("ring axioms and numerical soundness on random scalars") {
  for (int i = 0; i < 1000; ++i) {
    auto rng = case_rng(7, "scalar-ring", i);
    const Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b).star() == a.star() * b.star());
    CHECK(a.star().star() == a);
    CHECK((a - a).is_zero());
    if (i % 20 == 0) {
      for (const double th : {0.3, 0.61803398875, 0.125}) {
        CHECK(std::abs((a * b + c).evaluate(th) - (a.evaluate(th) * b.evaluate(th) + c.evaluate(th))) < 1e-12);
      }
    }
  }
}
