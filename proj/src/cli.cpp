#include "bdlab/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <type_traits>

#include "bdlab/cantor.hpp"
#include "bdlab/coeff.hpp"
#include "bdlab/crossed.hpp"
#include "bdlab/errors.hpp"
#include "bdlab/fock.hpp"
#include "bdlab/invariants.hpp"
#include "bdlab/limits.hpp"
#include "bdlab/parallel.hpp"
#include "bdlab/sequence.hpp"

namespace bdlab {

namespace {

using nlohmann::json;

const std::vector<std::string> kSuites{"gamma-hom",  "gamma-comp", "trace-compat", "fock-id", "fock-blocks",
                                       "compact-preserve", "shuffle", "rho-hom", "rg", "flip",
                                       "psi-flip", "gk-generation", "amplification"};

struct Config {
  std::string sizes = "1,2,4";
  std::string algebra = "circle";
  std::string angle = "theta";
  std::int64_t modulus = 3;
  std::int64_t depth = 8;
  std::uint64_t seed = 1;
  std::size_t count = 20;
  std::size_t budget = 10000;
  bool budget_given = false;
  std::string out;
  std::string in;
  bool serial = false;
  std::int64_t period = 0;
  std::int64_t p = 2;

  Execution mode() const { return serial ? Execution::kSerial : Execution::kParallel; }
  StageSequence sequence() const { return StageSequence(parse_sizes(sizes)); }
};

/// Calls body with the configured coefficient algebra.
template <class Body>
auto with_algebra(const Config& c, Body&& body) {
  if (c.algebra == "circle") return body(CircleRotation(parse_angle(c.angle)));
  if (c.algebra == "cyclic") return body(FiniteCyclicShift(c.modulus));
  throw InvalidInput("unknown algebra '" + c.algebra + "' (use circle or cyclic)");
}

json describe(const CircleRotation& a) { return a.describe(); }
json describe(const FiniteCyclicShift& a) { return a.describe(); }

/// Amplified algebra with alpha_p^p = alpha; only circle rotations have one here.
CircleRotation amplified(const CircleRotation& a, std::int64_t p) { return CircleRotation(a.angle().divided_by(p)); }
CircleRotation amplified(const FiniteCyclicShift&, std::int64_t) {
  throw InvalidInput("amplification needs a p-th root of alpha; use --algebra circle");
}

json config_echo(const Config& c, const json& algebra) {
  return {{"sizes", parse_sizes(c.sizes)}, {"algebra", algebra}, {"seed", c.seed}, {"count", c.count},
          {"depth", c.depth}};
}

struct Run {
  json params;
  Report report;
};

std::vector<Run> run_suite(const std::string& suite, const Config& c, json& algebra_echo) {
  const StageSequence seq = c.sequence();
  const auto mode = c.mode();
  const auto stages = seq.stages();
  std::vector<Run> runs;
  with_algebra(c, [&](const auto& alg) {
    algebra_echo = describe(alg);
    const auto pairs = [&](bool consecutive) {
      std::vector<std::pair<std::int64_t, std::int64_t>> out;
      for (std::int64_t i = 1; i <= stages; ++i) {
        for (std::int64_t j = i + 1; j <= stages; ++j) {
          if (consecutive && j != i + 1) continue;
          out.emplace_back(seq.size(i), seq.size(j));
        }
      }
      return out;
    };
    if (suite == "gamma-hom") {
      for (const auto& [n, m] : pairs(false)) {
        runs.push_back({{{"n", n}, {"m", m}}, verify_gamma_homomorphism(alg, n, m, c.seed, c.count, {}, mode)});
      }
    } else if (suite == "gamma-comp") {
      for (std::int64_t i = 1; i <= stages; ++i) {
        for (std::int64_t j = i + 1; j <= stages; ++j) {
          for (std::int64_t l = j + 1; l <= stages; ++l) {
            const auto n = seq.size(i), k = seq.size(j) / n, r = seq.size(l) / seq.size(j);
            runs.push_back({{{"n", n}, {"k", k}, {"l", r}}, verify_gamma_composition(alg, n, k, r, c.seed, c.count, {}, mode)});
          }
        }
      }
    } else if (suite == "trace-compat") {
      for (const auto& [n, m] : pairs(false)) {
        runs.push_back({{{"n", n}, {"m", m}}, verify_trace_compatibility(alg, n, m, c.seed, c.count, {}, mode)});
      }
    } else if (suite == "fock-id") {
      runs.push_back({{{"depth", c.depth}}, verify_vacuum_identity(alg, c.depth, c.seed, c.count, mode)});
    } else if (suite == "fock-blocks") {
      std::vector<std::int64_t> periods{1, 2, 3};
      if (c.period > 0) periods = {c.period};
      for (const auto k : periods) {
        runs.push_back({{{"period", k}, {"depth", 4 * k}}, verify_weighted_blocks(alg, k, 4 * k, c.seed, c.count, mode)});
      }
    } else if (suite == "compact-preserve") {
      for (const auto& [n, m] : pairs(true)) {
        runs.push_back({{{"n", n}, {"m", m}, {"depth", c.depth}},
                        verify_compact_preservation(alg, n, m, c.depth, c.seed, c.count, mode)});
      }
    } else if (suite == "shuffle") {
      for (const auto& [n, m] : pairs(true)) {
        runs.push_back({{{"n", n}, {"m", m}, {"depth", c.depth}}, verify_shuffle(alg, n, m, c.depth, c.seed, c.count, mode)});
      }
    } else if (suite == "rho-hom") {
      for (std::int64_t k = 1; k <= stages; ++k) {
        runs.push_back({{{"stage", k}}, verify_rho_homomorphism(alg, seq, k, c.seed, c.count, {}, mode)});
      }
    } else if (suite == "rg") {
      for (std::int64_t k = 1; k < stages; ++k) {
        runs.push_back({{{"stage", k}}, verify_rg(alg, seq, k, c.seed, c.count, {}, mode)});
      }
    } else if (suite == "flip") {
      runs.push_back({{{"maxPoints", 64}}, verify_flip_conjugacy(seq, 64, mode)});
    } else if (suite == "psi-flip") {
      for (std::int64_t k = 1; k <= stages; ++k) {
        runs.push_back({{{"stage", k}}, verify_psi_flip(alg, seq, k, c.seed, c.count, {}, mode)});
      }
    } else if (suite == "gk-generation") {
      runs.push_back({json::object(), verify_gk_generation(alg, seq, mode)});
    } else if (suite == "amplification") {
      const auto alg_p = amplified(alg, c.p);
      if constexpr (std::is_same_v<std::decay_t<decltype(alg)>, CircleRotation>) {
        for (const auto& [n, m] : pairs(true)) {
          runs.push_back({{{"p", c.p}, {"n", n}, {"m", m}},
                          verify_amplification_intertwining(alg, alg_p, c.p, n, m, c.seed, c.count, {}, mode)});
        }
      }
    } else {
      throw InvalidInput("unknown suite '" + suite + "'");
    }
    return 0;
  });
  return runs;
}

std::string read_input(const Config& c, std::istream& in) {
  if (c.in.empty() || c.in == "-") return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream file(c.in);
  if (!file) throw InvalidInput("cannot open input file " + c.in);
  return std::string(std::istreambuf_iterator<char>(file), {});
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("input is not valid JSON: ") + e.what());
  }
}

void emit(const Config& c, const json& j, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw InvalidInput("cannot open output file " + c.out);
  file << text;
}

std::pair<Rational, std::int64_t> parse_pair_rational(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidInput(std::string(what) + " must be 'x,y'");
  const Rational a = parse_rational(text.substr(0, comma));
  const Rational b = parse_rational(text.substr(comma + 1));
  if (b.get_den() != 1) throw InvalidInput(std::string(what) + ": second component must be an integer");
  return {a, to_int64(b.get_num())};
}

void add_common(CLI::App* cmd, Config& c) {
  cmd->add_option("--sizes", c.sizes, "size sequence n_1=1 | n_2 | ... (comma separated)");
  cmd->add_option("--algebra", c.algebra, "coefficient algebra: circle or cyclic")->check(CLI::IsMember({"circle", "cyclic"}));
  cmd->add_option("--angle", c.angle, "rotation angle q+r*theta for the circle algebra");
  cmd->add_option("--modulus", c.modulus, "d for the cyclic algebra C(Z/d)")->check(CLI::PositiveNumber);
  cmd->add_option("--depth", c.depth, "Fock truncation depth K")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--count", c.count, "random cases per run");
  cmd->add_option("--budget", c.budget, "refinement budget for theta enclosures")->each([&c](const std::string&) {
    c.budget_given = true;
  });
  cmd->add_option("--out", c.out, "write the JSON result to this file instead of stdout");
  cmd->add_option("--in", c.in, "read the input element from this file (default stdin)");
  cmd->add_flag("--serial", c.serial, "run cases serially");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations in generalized Bunce-Deddens algebras"};
  app.require_subcommand(1);
  Config c;

  auto* verify = app.add_subcommand("verify", "run a verification suite and print its report");
  std::string suite;
  verify->add_option("suite", suite, "suite name")->required();
  verify->add_option("--period", c.period, "weight period for fock-blocks (default: 1, 2 and 3)");
  verify->add_option("--p", c.p, "amplification factor")->check(CLI::PositiveNumber);
  add_common(verify, c);

  auto* apply = app.add_subcommand("apply", "apply a map to an element read as JSON");
  std::string map;
  std::int64_t from = 1, to = 1, stage = 1, block_n = 1;
  apply->add_option("map", map, "gamma, rho, shuffle or psi")->required()->check(
      CLI::IsMember({"gamma", "rho", "shuffle", "psi"}));
  apply->add_option("--from", from, "gamma: source size n")->check(CLI::PositiveNumber);
  apply->add_option("--to", to, "gamma: target size m")->check(CLI::PositiveNumber);
  apply->add_option("--stage", stage, "rho: stage k")->check(CLI::PositiveNumber);
  apply->add_option("--n", block_n, "shuffle: block size n")->check(CLI::PositiveNumber);
  apply->add_option("--p", c.p, "shuffle: number of blocks p")->check(CLI::PositiveNumber);
  add_common(apply, c);

  auto* trace = app.add_subcommand("trace", "matrix trace of a stage element read as JSON");
  add_common(trace, c);

  auto* classify = app.add_subcommand("classify", "decide isomorphism or finite-model structure");
  std::string theta1 = "theta", theta2 = "theta", delta1, delta2;
  std::int64_t amplify = 1;
  bool structure = false;
  classify->add_option("--theta1", theta1, "angle of the first algebra");
  classify->add_option("--theta2", theta2, "angle of the second algebra");
  classify->add_option("--delta1", delta1, "supernatural number of the first algebra (e.g. 2^inf or seq:1,2,4+tail:2)");
  classify->add_option("--delta2", delta2, "supernatural number of the second algebra");
  classify->add_option("--amplify", amplify, "replace the first algebra by its M_p amplification")->check(
      CLI::PositiveNumber);
  classify->add_flag("--structure", structure, "simplicity and trace uniqueness for --algebra/--sizes");
  add_common(classify, c);

  auto* ktheory = app.add_subcommand("ktheory", "K-group presentations and normal forms for a sequence");
  std::string tail, k1, k0, enclosure = "sqrt2-1", precision = "1/1000000";
  std::int64_t kstage = 1;
  ktheory->add_option("--tail", tail, "primes whose exponent is infinite (comma separated)");
  ktheory->add_option("--stage", kstage, "stage of the --k1 class")->check(CLI::PositiveNumber);
  ktheory->add_option("--k1", k1, "stage class 'a,b' to normalize");
  ktheory->add_option("--k0", k0, "class 'q,m' meaning q + m theta");
  ktheory->add_option("--theta-enclosure", enclosure, "sqrt2-1, golden-1 or cf:a0,a1;p1,p2");
  ktheory->add_option("--precision", precision, "width of the printed trace enclosure");
  add_common(ktheory, c);

  std::vector<std::string> argv_storage = args;
  if (argv_storage.empty()) argv_storage.push_back("bdlab");
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!c.budget_given) {
      if (const char* env = std::getenv("BD_LAB_BUDGET")) {
        try {
          c.budget = static_cast<std::size_t>(std::stoull(env));
        } catch (const std::exception&) {
          throw InvalidInput(std::string("BD_LAB_BUDGET is not a number: ") + env);
        }
      }
    }

    if (*verify) {
      if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
        err << "bdlab: unknown suite '" << suite << "'\n";
        return kExitUsage;
      }
      const auto start = std::chrono::steady_clock::now();
      json algebra;
      const auto runs = run_suite(suite, c, algebra);
      std::size_t cases = 0, failures = 0;
      json list = json::array();
      for (const auto& r : runs) {
        cases += r.report.cases;
        failures += r.report.failures.size();
        list.push_back({{"params", r.params}, {"report", r.report.to_json()}});
      }
      emit(c,
           {{"suite", suite},
            {"config", config_echo(c, algebra)},
            {"runs", list},
            {"cases", cases},
            {"failures", failures},
            {"passed", failures == 0}},
           out);
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      err << "bdlab: " << suite << ": " << cases << " cases, " << failures << " failures, " << ms << " ms\n";
      return failures == 0 ? kExitOk : kExitVerificationFailed;
    }

    if (*apply) {
      const json input = parse_json(read_input(c, in));
      with_algebra(c, [&](const auto& alg) {
        using Alg = std::decay_t<decltype(alg)>;
        if (map == "gamma") {
          const ConnectingMap<Alg> g(alg, from, to);
          emit(c, g.target().to_json(g.apply(g.source().from_json(input))), out);
        } else if (map == "rho") {
          const StageSequence seq = c.sequence();
          const Odometer<Alg> od(alg, seq);
          const auto stage_alg = MatrixAlgebra<Alg>::stage(alg, seq.size(stage));
          emit(c, od.to_json(rho(od, stage, stage_alg.from_json(input))), out);
        } else if (map == "shuffle") {
          if constexpr (std::is_same_v<Alg, CircleRotation>) {
            const MatrixAlgebra<Alg> source(alg, c.p * block_n, block_n);
            const MatrixAlgebra<Alg> target(amplified(alg, c.p), c.p * block_n, c.p * block_n);
            const auto image = amplification_shuffle(c.p, block_n, source.from_json(input));
            emit(c, target.to_json(relabel_power(image, c.p * block_n)), out);
          } else {
            amplified(alg, c.p);
          }
        } else {
          const StageSequence seq = c.sequence();
          const Odometer<Alg> od(alg, seq);
          const Odometer<InverseAlpha<Alg>> target(InverseAlpha<Alg>(alg), seq);
          emit(c, target.to_json(psi(target, od.from_json(input))), out);
        }
        return 0;
      });
      return kExitOk;
    }

    if (*trace) {
      const json input = parse_json(read_input(c, in));
      if (!input.is_object() || !input.contains("size") || !input.at("size").is_number_integer()) {
        throw InvalidInput("matrix element must be {\"size\": n, \"entries\": [[...]]}");
      }
      const auto n = input.at("size").get<std::int64_t>();
      if (n < 1) throw InvalidInput("matrix size must be positive");
      with_algebra(c, [&](const auto& alg) {
        using Alg = std::decay_t<decltype(alg)>;
        const auto stage_alg = MatrixAlgebra<Alg>::stage(alg, n);
        const Scalar t = stage_alg.trace(stage_alg.from_json(input));
        json result{{"trace", to_json(t)}};
        if (t.is_rational()) result["value"] = to_string(t.rational_value());
        emit(c, result, out);
        return 0;
      });
      return kExitOk;
    }

    if (*classify) {
      if (structure) {
        const StageSequence seq = c.sequence();
        json result{{"sizes", seq.sizes()}};
        if (c.algebra == "cyclic") {
          result["algebra"] = FiniteCyclicShift(c.modulus).describe();
          result["simplicity"] = to_json(decide_simplicity_finite_model(c.modulus, seq));
          result["traceUniqueness"] = to_json(decide_trace_uniqueness_finite_model(c.modulus, seq));
        } else {
          result["algebra"] = CircleRotation(parse_angle(c.angle)).describe();
          result["traceUniqueness"] = to_json(assert_trace_uniqueness_circle(parse_angle(c.angle)));
        }
        emit(c, result, out);
        return kExitOk;
      }
      if (delta1.empty() || delta2.empty()) throw InvalidInput("classify needs --delta1 and --delta2 (or --structure)");
      Angle a1 = parse_angle(theta1);
      SupernaturalNumber d1 = parse_supernatural(delta1);
      if (amplify > 1) std::tie(a1, d1) = decide_amplification(amplify, a1, d1);
      const Angle a2 = parse_angle(theta2);
      const SupernaturalNumber d2 = parse_supernatural(delta2);
      json result = to_json(decide_isomorphism(a1, d1, a2, d2));
      result["first"] = {{"theta", to_string(a1)}, {"delta", to_json(d1)}};
      result["second"] = {{"theta", to_string(a2)}, {"delta", to_json(d2)}};
      emit(c, result, out);
      return kExitOk;
    }

    // ktheory
    const StageSequence seq = c.sequence();
    const auto delta = parse_supernatural("seq:" + c.sizes + (tail.empty() ? "" : "+tail:" + tail));
    json stages = json::array();
    for (std::int64_t k = 1; k <= seq.stages(); ++k) {
      stages.push_back({{"stage", k}, {"n", seq.size(k)}, {"K0", "Z + Z"}, {"K1", "Z + Z"},
                        {"traceImage", "(1/" + std::to_string(seq.size(k)) + ")Z + theta Z"}});
    }
    json result{{"sizes", seq.sizes()},
                {"delta", to_json(delta)},
                {"K0", {{"group", "Q(delta) + theta Z"}, {"orderUnit", to_json(k0_order_unit())}}},
                {"K1", {{"group", "Q(delta) + Z"}}},
                {"stages", stages}};
    if (!k1.empty()) {
      const auto [a, b] = parse_pair_rational(k1, "--k1");
      if (a.get_den() != 1) throw InvalidInput("--k1: stage classes are integral");
      result["k1"] = {{"stage", kstage}, {"a", a.get_num().get_str()}, {"b", b},
                      {"normalized", to_json(k1_limit_normalize(seq, kstage, a.get_num(), b))}};
    }
    if (!k0.empty()) {
      const auto [q, m] = parse_pair_rational(k0, "--k0");
      const K0Class cls{q, m};
      const auto theta = ThetaEnclosure::parse(enclosure);
      const auto tau = k0_tau_value(cls, theta, parse_rational(precision), c.budget);
      result["k0"] = {{"class", to_json(cls)},
                      {"inQDelta", q_delta_member(q, delta)},
                      {"thetaEnclosure", theta.name()},
                      {"positive", k0_positive(cls, theta, c.budget)},
                      {"tau", {{"lo", to_string(tau.lo)}, {"hi", to_string(tau.hi)}}}};
    }
    emit(c, result, out);
    return kExitOk;
  } catch (const InvalidInput& e) {
    err << "bdlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceLimit& e) {
    err << "bdlab: resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const nlohmann::json::exception& e) {
    err << "bdlab: malformed JSON input: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace bdlab
