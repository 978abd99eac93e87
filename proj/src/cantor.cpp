#include "bdlab/cantor.hpp"

namespace bdlab {

namespace {
void check_digits(const std::vector<std::int64_t>& radii, const std::vector<std::int64_t>& digits) {
  if (digits.size() != radii.size()) throw InvalidInput("digit string length must match the number of radii");
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (radii[i] < 1 || digits[i] < 0 || digits[i] >= radii[i]) throw InvalidInput("digit outside its radix");
  }
}
}  // namespace

std::vector<std::int64_t> index_to_digits(const std::vector<std::int64_t>& radii, std::int64_t index) {
  std::vector<std::int64_t> digits;
  digits.reserve(radii.size());
  std::int64_t total = 1;
  for (const auto m : radii) total *= m;
  if (index < 0 || index >= total) throw InvalidInput("index outside the truncation");
  for (const auto m : radii) {
    digits.push_back(index % m);
    index /= m;
  }
  return digits;
}

std::int64_t digits_to_index(const std::vector<std::int64_t>& radii, const std::vector<std::int64_t>& digits) {
  check_digits(radii, digits);
  std::int64_t index = 0;
  for (std::size_t i = radii.size(); i-- > 0;) index = index * radii[i] + digits[i];
  return index;
}

std::vector<std::int64_t> odometer_step(const std::vector<std::int64_t>& radii, std::vector<std::int64_t> digits,
                                        int direction) {
  check_digits(radii, digits);
  if (direction != 1 && direction != -1) throw InvalidInput("odometer direction must be +1 or -1");
  for (std::size_t i = 0; i < digits.size(); ++i) {
    digits[i] += direction;
    if (digits[i] >= 0 && digits[i] < radii[i]) break;
    digits[i] = direction > 0 ? 0 : radii[i] - 1;
  }
  return digits;
}

std::vector<std::int64_t> flip(const std::vector<std::int64_t>& radii, std::vector<std::int64_t> digits) {
  check_digits(radii, digits);
  for (std::size_t i = 0; i < digits.size(); ++i) digits[i] = radii[i] - 1 - digits[i];
  return digits;
}

Report verify_flip_conjugacy(const StageSequence& seq, std::int64_t max_points, Execution mode) {
  std::vector<std::int64_t> stages;
  for (std::int64_t k = 1; k <= seq.stages(); ++k) {
    if (seq.size(k) <= max_points) stages.push_back(k);
  }
  return run_cases(
      "flip", stages.size(),
      [&](std::size_t i) {
        std::vector<Failure> f;
        const auto k = stages[i];
        const auto radii = seq.radii(k);
        const std::int64_t n = seq.size(k);
        const auto show = [&](const std::vector<std::int64_t>& d) {
          return nlohmann::json{{"stage", k}, {"digits", d}};
        };
        for (std::int64_t j = 0; j < n; ++j) {
          const auto x = index_to_digits(radii, j);
          const auto lhs = flip(radii, odometer_step(radii, x, 1));
          const auto rhs = odometer_step(radii, flip(radii, x), -1);
          if (lhs != rhs) f.push_back(Failure{0, "conjugacy", show(lhs), show(rhs)});
          if (flip(radii, flip(radii, x)) != x) f.push_back(Failure{0, "involution", show(x), show(flip(radii, x))});
          if (digits_to_index(radii, odometer_step(radii, x, 1)) != (j + 1) % n) {
            f.push_back(Failure{0, "step-index", show(x), show(odometer_step(radii, x, 1))});
          }
          if (digits_to_index(radii, flip(radii, x)) != n - 1 - j) {
            f.push_back(Failure{0, "flip-index", show(x), show(flip(radii, x))});
          }
        }
        return f;
      },
      mode);
}

}  // namespace bdlab
