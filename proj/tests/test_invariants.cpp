#include <doctest.h>

#include <chrono>
#include <numeric>

#include "bdlab/errors.hpp"
#include "bdlab/invariants.hpp"
#include "bdlab/random.hpp"

using namespace bdlab;

namespace {
const SupernaturalNumber kTwoInf = parse_supernatural("2^inf");
Rational q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

// Sign of q + m (sqrt 2 - 1) from a 200-digit integer square root.
int sign_oracle(const Rational& qv, std::int64_t m) {
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, 200);
  Integer root;
  const Integer radicand = 2 * scale * scale;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  // sqrt2 in [root / scale, (root + 1) / scale].
  const Rational lo = qv + make_rational(m) * (Rational(root, scale) - 1);
  const Rational hi = qv + make_rational(m) * (Rational(root + 1, scale) - 1);
  if (lo > 0 && hi > 0) return 1;
  if (lo < 0 && hi < 0) return -1;
  return 0;
}

// Every nonempty proper subset of Z/d closed under +n, by enumeration.
bool has_invariant_subset(std::int64_t d, std::int64_t n) {
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << d); ++mask) {
    bool closed = true;
    for (std::int64_t i = 0; i < d && closed; ++i) {
      if ((mask >> i & 1) && !(mask >> ((i + n) % d) & 1)) closed = false;
    }
    if (closed) return true;
  }
  return false;
}
}  // namespace

TEST_CASE("supernatural numbers") {
  const auto a = supernatural_from_sequence({1, 2, 4, 8}, std::set<std::int64_t>{2});
  CHECK(a.same_factors(kTwoInf));
  CHECK_FALSE(a.finite_evidence);
  const auto b = supernatural_from_sequence({1, 6});
  CHECK(b.factors == std::map<std::int64_t, std::int64_t>{{2, 1}, {3, 1}});
  CHECK(b.finite_evidence);
  const auto c = supernatural_from_sequence({1, 2, 4});
  CHECK(c.factors == std::map<std::int64_t, std::int64_t>{{2, 2}});
  CHECK(c.finite_evidence);
  CHECK(supernatural_divides(parse_supernatural("2^inf*3"), parse_supernatural("2^inf*3^2")));
  CHECK_FALSE(supernatural_divides(parse_supernatural("2^inf*3^2"), parse_supernatural("2^inf*3")));
  CHECK(parse_supernatural("12").factors == std::map<std::int64_t, std::int64_t>{{2, 2}, {3, 1}});
  CHECK(parse_supernatural("6^inf").same_factors(parse_supernatural("2^inf*3^inf")));
  CHECK(parse_supernatural("seq:1,2,4+tail:2").same_factors(kTwoInf));
  CHECK(to_json(kTwoInf).dump() == R"({"factors":{"2":"inf"},"finiteEvidence":false})");
  CHECK(to_json(parse_supernatural("2^inf*3^2")).dump() == R"({"factors":{"2":"inf","3":2},"finiteEvidence":false})");
  CHECK(supernatural_from_json(to_json(c)).same_factors(c));
  CHECK(supernatural_from_json(to_json(c)).finite_evidence);
  CHECK(to_string(supernatural_times(kTwoInf, 6)) == "2^inf*3^1");
  CHECK_THROWS_AS(parse_supernatural("2^x"), InvalidInput);
  CHECK_THROWS_AS(parse_supernatural("seq:1,3,4"), InvalidInput);
  CHECK_THROWS_AS(parse_supernatural("seq:1,2+tail:4"), InvalidInput);
}

TEST_CASE("Q(delta) membership") {
  CHECK(q_delta_member(q(3, 8), kTwoInf));
  CHECK_FALSE(q_delta_member(q(1, 3), kTwoInf));
  CHECK(q_delta_member(q(5), parse_supernatural("1")));
  CHECK_FALSE(q_delta_member(q(1, 8), parse_supernatural("2^2")));
  CHECK(q_delta_witness(q(-7, 12), parse_supernatural("2^3*3")) == std::map<std::int64_t, std::int64_t>{{2, 2}, {3, 1}});
  // Agreement with a stage search for finite sequences.
  for (const auto& sizes : std::vector<std::vector<std::int64_t>>{{1, 2, 4, 8}, {1, 6, 12}, {1, 3, 9}, {1, 5}}) {
    const StageSequence seq(sizes);
    const auto delta = supernatural_from_sequence(sizes);
    for (std::int64_t den = 1; den <= 30; ++den) {
      for (std::int64_t num = -3; num <= 3; ++num) {
        const Rational r = q(num, den);
        const auto stage = q_delta_stage(r, seq);
        CHECK(q_delta_member(r, delta) == stage.has_value());
        if (stage) CHECK(Integer(seq.size(*stage)) % r.get_den() == 0);
      }
    }
  }
}

TEST_CASE("K1 normalization along the connecting maps") {
  const StageSequence seq({1, 2, 4, 8});
  CHECK(k1_limit_normalize(seq, 3, 1, 5) == K1Class{q(1, 4), 5});
  CHECK(k1_limit_normalize(seq, 2, 0, 7) == K1Class{q(0), 7});
  CHECK(k1_limit_normalize(seq, 1, 9, -2) == K1Class{q(9), -2});
  for (int i = 0; i < 100; ++i) {
    auto rng = case_rng(11, "k1", i);
    const auto k = uniform_int(rng, 1, 3);
    const auto a = uniform_int(rng, -50, 50);
    const auto b = uniform_int(rng, -50, 50);
    CHECK(k1_limit_normalize(seq, k, a, b) == k1_limit_normalize(seq, k + 1, seq.radix(k) * a, b));
  }
}

TEST_CASE("theta enclosures and K0 positivity") {
  const auto theta = ThetaEnclosure::sqrt2_minus_1();
  for (std::size_t s = 0; s < 30; ++s) {
    const auto i = theta.at(s), next = theta.at(s + 1);
    CHECK(i.lo < i.hi);
    CHECK(i.lo <= next.lo);
    CHECK(next.hi <= i.hi);
    CHECK(sign_oracle(-i.lo, 1) == 1);
    CHECK(sign_oracle(-i.hi, 1) == -1);
  }
  const auto half = k0_tau_value(K0Class{q(1, 2), 0}, theta, q(1, 1000), 100);
  CHECK(half.lo == q(1, 2));
  CHECK(half.hi == q(1, 2));
  const auto v = k0_tau_value(K0Class{q(1, 2), -1}, theta, q(1, 1000), 100);
  CHECK(v.lo >= q(8, 100));
  CHECK(v.hi <= q(9, 100));
  CHECK(k0_tau_value(K0Class{}, theta, q(1, 10), 1).hi == 0);
  CHECK(k0_positive(K0Class{q(1, 2), -1}, theta, 100));
  CHECK(k0_positive(K0Class{q(0), 1}, theta, 100));
  CHECK(k0_positive(K0Class{}, theta, 100));
  CHECK_FALSE(k0_positive(K0Class{q(-1, 3), 0}, theta, 100));
  CHECK(k0_order_unit() == K0Class{q(1), 0});
  for (int i = 0; i < 50; ++i) {
    auto rng = case_rng(12, "k0", i);
    K0Class c{q(uniform_int(rng, -40, 40), uniform_int(rng, 1, 40)), uniform_int(rng, -40, 40)};
    if (c == K0Class{}) c.m = 1;
    const int want = sign_oracle(c.q, c.m);
    REQUIRE(want != 0);
    CHECK(k0_positive(c, theta, 1000) == (want > 0));
  }
  // Classes that nearly cancel need many refinements.
  CHECK(k0_positive(K0Class{q(-5741, 13860), 1}, theta, 1000) == (sign_oracle(q(-5741, 13860), 1) > 0));
  CHECK_THROWS_AS(k0_positive(K0Class{q(-5741, 13860), 1}, theta, 2), ResourceLimit);
  const ThetaEnclosure stuck([](std::size_t s) {
    return Interval{q(1, 2) - q(1, static_cast<std::int64_t>(s) + 2), q(1, 2) + q(1, static_cast<std::int64_t>(s) + 2)};
  });
  CHECK_THROWS_AS(k0_positive(K0Class{q(-1, 2), 1}, stuck, 50), ResourceLimit);
  CHECK_THROWS_AS(k0_tau_value(K0Class{q(0), 1}, stuck, q(1, 1000000), 50), ResourceLimit);
  const auto golden = ThetaEnclosure::parse("golden-1");
  CHECK(k0_positive(K0Class{q(-3, 5), 1}, golden, 100));
  CHECK_FALSE(k0_positive(K0Class{q(-5, 8), 1}, golden, 100));
  const auto finite = ThetaEnclosure::parse("cf:0,3");
  CHECK(finite.at(5).lo == q(1, 3));
  CHECK(k0_positive(K0Class{q(-1), 3}, finite, 10));
  CHECK_THROWS_AS(ThetaEnclosure::parse("pi"), InvalidInput);
}

TEST_CASE("isomorphism decider") {
  const auto start = std::chrono::steady_clock::now();
  const auto theta = Angle::theta();
  const auto a = decide_isomorphism(theta, kTwoInf, parse_angle("theta+1/4"), kTwoInf);
  CHECK(a.yes);
  CHECK(a.witness["case"] == "difference");
  CHECK(a.witness["denominator"] == "4");
  CHECK(a.witness["divides"].dump() == R"({"2":2})");
  const auto b = decide_isomorphism(theta, kTwoInf, parse_angle("-theta+1/8"), kTwoInf);
  CHECK(b.yes);
  CHECK(b.witness["case"] == "sum");
  CHECK_FALSE(decide_isomorphism(theta, kTwoInf, parse_angle("2*theta"), kTwoInf).yes);
  const auto d = decide_isomorphism(theta, kTwoInf, theta, parse_supernatural("3^inf"));
  CHECK_FALSE(d.yes);
  CHECK(d.witness["failing"] == "delta");
  const auto [amp_angle, amp_delta] = decide_amplification(2, theta, kTwoInf);
  CHECK(amp_angle == parse_angle("theta/2"));
  CHECK(amp_delta.same_factors(kTwoInf));
  CHECK_FALSE(decide_isomorphism(amp_angle, amp_delta, theta, kTwoInf).yes);
  const auto [same_angle, same_delta] = decide_amplification(1, theta, kTwoInf);
  CHECK(same_angle == theta);
  CHECK(same_delta.same_factors(kTwoInf));
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(1));
  CHECK_FALSE(decide_isomorphism(theta, kTwoInf, parse_angle("theta+1/3"), kTwoInf).yes);
  CHECK(decide_isomorphism(theta, kTwoInf, parse_angle("theta+5"), kTwoInf).yes);
  const auto flagged = decide_isomorphism(theta, parse_supernatural("seq:1,2,4"), theta, kTwoInf);
  CHECK(flagged.finite_evidence);
  // Reflexive and symmetric on random data.
  const std::vector<std::string> deltas{"2^inf", "3^inf", "2^inf*3", "6^inf", "1"};
  for (int i = 0; i < 100; ++i) {
    auto rng = case_rng(13, "iso", i);
    const Angle t1{q(uniform_int(rng, -8, 8), uniform_int(rng, 1, 12)), q(uniform_int(rng, -2, 2))};
    const Angle t2{q(uniform_int(rng, -8, 8), uniform_int(rng, 1, 12)), q(uniform_int(rng, -2, 2))};
    const auto d1 = parse_supernatural(deltas[static_cast<std::size_t>(uniform_int(rng, 0, 4))]);
    const auto d2 = parse_supernatural(deltas[static_cast<std::size_t>(uniform_int(rng, 0, 4))]);
    CHECK(decide_isomorphism(t1, d1, t1, d1).yes);
    CHECK(decide_isomorphism(t1, d1, t2, d2).yes == decide_isomorphism(t2, d2, t1, d1).yes);
  }
}

TEST_CASE("finite-model structure deciders") {
  const auto s = decide_simplicity_finite_model(2, StageSequence({1, 2, 4}));
  CHECK_FALSE(s.yes);
  CHECK(s.witness["n"] == 2);
  CHECK(s.witness["subset"] == nlohmann::json::array({0}));
  CHECK(decide_simplicity_finite_model(3, StageSequence({1, 2, 4, 8})).yes);
  CHECK(decide_simplicity_finite_model(1, StageSequence({1, 2})).yes);
  CHECK(decide_trace_uniqueness_finite_model(3, StageSequence({1, 2, 4})).yes);
  CHECK_FALSE(decide_trace_uniqueness_finite_model(2, StageSequence({1, 2})).yes);
  CHECK(decide_trace_uniqueness_finite_model(1, StageSequence({1, 2})).yes);
  for (const auto& sizes : std::vector<std::vector<std::int64_t>>{{1, 2, 4}, {1, 3, 9}, {1, 6}}) {
    const StageSequence seq(sizes);
    for (std::int64_t d = 1; d <= 12; ++d) {
      bool coprime = true, enumerated = true;
      for (const auto n : sizes) {
        coprime = coprime && std::gcd(n, d) == 1;
        enumerated = enumerated && !has_invariant_subset(d, n);
      }
      const auto simple = decide_simplicity_finite_model(d, seq);
      CHECK(simple.yes == coprime);
      CHECK(simple.yes == enumerated);
      CHECK(decide_trace_uniqueness_finite_model(d, seq).yes == coprime);
      if (!simple.yes) {
        const auto n = simple.witness["n"].get<std::int64_t>();
        const auto subset = simple.witness["subset"].get<std::vector<std::int64_t>>();
        CHECK_FALSE(subset.empty());
        CHECK(static_cast<std::int64_t>(subset.size()) < d);
        for (const auto i : subset) CHECK(std::find(subset.begin(), subset.end(), (i + n) % d) != subset.end());
      }
    }
  }
  CHECK(assert_trace_uniqueness_circle(Angle::theta()).yes);
  CHECK_FALSE(assert_trace_uniqueness_circle(parse_angle("1/3")).yes);
}
