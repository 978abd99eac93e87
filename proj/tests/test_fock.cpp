#include <doctest.h>

#include "bdlab/fock.hpp"

using namespace bdlab;

namespace {
const CircleRotation kCircle;
using Space = FockSpace<CircleRotation>;
using Gen = ToeplitzGenerator<CircleFunction>;
CircleFunction z(std::int64_t p = 1, const Scalar& c = Scalar(1)) { return kCircle.monomial(c, p); }
Scalar t(std::int64_t e) { return Scalar::theta_power(make_rational(e)); }
}  // namespace

TEST_CASE("phi and weighted operators") {
  const Space f(kCircle, 1, 3);
  CHECK(f.equal(f.phi(kCircle.unit()), f.identity()));
  const auto pz = f.phi(z());
  CHECK(pz.entries.size() == 3);
  CHECK(pz.entries.at({0, 0}) == z());
  CHECK(pz.entries.at({1, 1}) == z(1, t(-1)));
  CHECK(pz.entries.at({2, 2}) == z(1, t(-2)));
  CHECK(f.phi(kCircle.zero()).entries.empty());

  const Space f4(kCircle, 1, 4);
  const WeightSequence<CircleFunction> ones{{kCircle.unit()}};
  CHECK(f4.equal(f4.weighted(ones, kCircle.unit()), f4.shift()));
  const WeightSequence<CircleFunction> alt{{kCircle.zero(), kCircle.unit()}};
  const auto w = f4.weighted(alt, kCircle.unit());
  CHECK(w.entries.size() == 1);
  CHECK(w.entries.count({2, 1}) == 1);
  CHECK(f4.weighted(ones, kCircle.zero()).entries.empty());
}

TEST_CASE("composition and trust") {
  const Space f(kCircle, 1, 6);
  const auto s = f.shift();
  const auto sts = f.compose(f.adjoint(s), s);
  CHECK(sts.trust == 5);
  CHECK(f.equal(sts, f.identity()));
  // Without the trust window the last level would look like a failure.
  CHECK_FALSE(f.equal_below(sts, f.identity(), 6));
  const auto sst = f.compose(s, f.adjoint(s));
  CHECK(sst.trust == 6);
  CHECK(f.equal(sst, f.sub(f.identity(), f.vacuum_projection())));
  CHECK(f.compose(s, f.zero()).entries.empty());
}

TEST_CASE("right linearity of weighted shifts and adjoint rules") {
  const Space f(kCircle, 1, 8);
  for (int i = 0; i < 30; ++i) {
    auto rng = case_rng(4, "fock-linear", i);
    const WeightSequence<CircleFunction> lambda{{kCircle.sample(rng), kCircle.sample(rng), kCircle.sample(rng)}};
    const auto a = kCircle.sample(rng), c = kCircle.sample(rng);
    CHECK(f.equal(f.weighted(lambda, kCircle.mul(a, c)), f.compose(f.weighted(lambda, a), f.phi(c))));
    const auto x = f.add(f.weighted(lambda, a), f.phi(c));
    const auto y = f.add(f.adjoint(f.creation(a)), f.phi(kCircle.sample(rng)));
    CHECK(f.equal(f.adjoint(f.adjoint(x)), x));
    const auto xy = f.compose(x, y);
    REQUIRE(xy.trust >= 2);
    CHECK(f.equal(f.adjoint(xy), f.compose(f.adjoint(y), f.adjoint(x))));
  }
}

TEST_CASE("vacuum identity") {
  CHECK(check_vacuum_identity(kCircle, kCircle.unit(), kCircle.unit(), 8).empty());
  CHECK(check_vacuum_identity(kCircle, z(), kCircle.unit(), 8).empty());
  CHECK(verify_vacuum_identity(kCircle, 8, 1, 30).passed());
  CHECK(verify_vacuum_identity(FiniteCyclicShift(3), 8, 1, 30).passed());
}

TEST_CASE("block decomposition") {
  const Space f(kCircle, 1, 8);
  auto rng = case_rng(1, "blocks", 0);
  const auto a = kCircle.sample(rng);
  const auto p = block_decompose(f.phi(a), 2);
  CHECK(p.at(0, 1).entries.empty());
  CHECK(p.at(1, 0).entries.empty());
  const auto s = block_decompose(f.shift(), 2);
  CHECK(s.at(0, 0).entries.empty());
  CHECK(s.at(1, 1).entries.empty());
  CHECK(s.at(1, 0).entries.size() == 4);
  // Level 2j+1 -> 2j+2 wraps from block 1 into block 0 one index up.
  CHECK(s.at(0, 1).entries.count({1, 0}) == 1);
  const auto zero = block_decompose(f.zero(), 3);
  for (const auto& b : zero.blocks) CHECK(b.entries.empty());
  const auto x = f.add(f.weighted(WeightSequence<CircleFunction>{{a, z()}}, a), f.adjoint(f.creation(z(2))));
  const auto back = block_reassemble(block_decompose(x, 3), 8);
  CHECK(back.entries.size() == x.entries.size());
  CHECK(f.equal(back, x));
}

TEST_CASE("block equations of periodic weighted shifts") {
  const WeightSequence<CircleFunction> one{{kCircle.unit()}};
  CHECK(check_weighted_blocks(kCircle, one, kCircle.unit(), 4).empty());
  const WeightSequence<CircleFunction> two{{kCircle.unit(), kCircle.unit()}};
  CHECK(check_weighted_blocks(kCircle, two, z(), 8).empty());
  for (int k = 1; k <= 3; ++k) CHECK(verify_weighted_blocks(kCircle, k, 4 * k, 3, 10).passed());
  CHECK(verify_weighted_blocks(FiniteCyclicShift(4), 3, 12, 3, 10).passed());
}

TEST_CASE("block equation with a wrong automorphism power fails") {
  // Sanity: the block check is sensitive; a weight sequence of period 2 checked as if the
  // entries carried alpha^{l+1} would disagree. Emulate by comparing against a shifted weight.
  const WeightSequence<CircleFunction> lambda{{z(), kCircle.unit()}};
  const WeightSequence<CircleFunction> swapped{{kCircle.unit(), z()}};
  const Space f(kCircle, 1, 8);
  CHECK_FALSE(f.equal(f.weighted(lambda, kCircle.unit()), f.weighted(swapped, kCircle.unit())));
}

TEST_CASE("theta block map") {
  const auto id = theta_block_map(kCircle, 1, 3, 5, Gen{Gen::Kind::kPhi, kCircle.unit()});
  const Space f3(kCircle, 3, 5);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(f3.equal(id.at(i, j), i == j ? f3.identity() : f3.zero()));
    }
  }
  const auto tb = theta_block_map(kCircle, 1, 2, 5, Gen{Gen::Kind::kCreation, z()});
  const Space f2(kCircle, 2, 5);
  CHECK(f2.equal(tb.at(0, 1), f2.creation(z(1, t(-1)))));
  CHECK(f2.equal(tb.at(1, 0), f2.phi(z())));
  CHECK(tb.at(0, 0).entries.empty());
  CHECK(tb.at(1, 1).entries.empty());
  const auto same = theta_block_map(kCircle, 2, 2, 5, Gen{Gen::Kind::kCreation, z()});
  CHECK(f2.equal(same.at(0, 0), f2.creation(z())));
  // The formula agrees with block reindexing of T^{(n)}(b), including for n > 1.
  for (const auto [n, m] : std::vector<std::pair<int, int>>{{1, 2}, {2, 4}, {2, 6}, {3, 6}}) {
    auto rng = case_rng(n, "theta-routes", m);
    const auto b = kCircle.sample(rng);
    const Space fm(kCircle, m, 5);
    const FockMatrixAlgebra<CircleRotation> mk(fm, m / n);
    for (const auto kind : {Gen::Kind::kPhi, Gen::Kind::kCreation}) {
      CHECK(mk.equal(theta_block_map(kCircle, n, m, 5, Gen{kind, b}), theta_reindex(kCircle, n, m, 5, Gen{kind, b})));
    }
  }
}

TEST_CASE("compact preservation") {
  CHECK(check_compact_preservation(kCircle, 1, 2, kCircle.unit(), kCircle.unit(), 6).empty());
  CHECK(check_compact_preservation(kCircle, 1, 2, z(), z(2), 6).empty());
  CHECK(verify_compact_preservation(kCircle, 2, 4, 6, 8, 10).passed());
}

TEST_CASE("shuffle reproduces beta on generators") {
  CHECK(verify_shuffle(kCircle, 1, 2, 5, 1, 5).passed());
  CHECK(verify_shuffle(kCircle, 2, 4, 5, 1, 5).passed());
  CHECK(verify_shuffle(kCircle, 2, 6, 5, 1, 3).passed());
}

TEST_CASE("Fock JSON round trip") {
  const Space f(kCircle, 1, 4);
  const auto x = f.add(f.phi(z()), f.shift());
  CHECK(f.equal(f.from_json(f.to_json(x)), x));
  CHECK(f.to_json(f.vacuum_projection()).dump() ==
        R"({"depth":4,"entries":{"0,0":{"z:0":[{"coeff":"1","root":"0","theta":"0"}]}},"trust":4})");
}
