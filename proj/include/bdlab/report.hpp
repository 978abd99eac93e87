#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace bdlab {

struct Failure {
  std::size_t index = 0;  ///< case index within the suite
  std::string check;      ///< which identity failed
  nlohmann::json lhs;
  nlohmann::json rhs;
};

/// Outcome of a verification suite. Failures are kept ordered by case index.
struct Report {
  std::string suite;
  std::size_t cases = 0;
  std::vector<Failure> failures;

  bool passed() const { return failures.empty(); }
  /// Appends another report's cases, re-basing its indices after ours.
  void absorb(const Report& other);
  nlohmann::json to_json() const;
};

}  // namespace bdlab
