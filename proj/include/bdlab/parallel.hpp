#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "bdlab/report.hpp"

namespace bdlab {

enum class Execution { kSerial, kParallel };

/// Default used by the verification suites; the serial path is the reference.
Execution default_execution();
void set_default_execution(Execution mode);

/// Runs body(i) for i in [0, count) and merges the per-case failures in index order,
/// so the report is identical for both execution modes.
template <class Body>
Report run_cases(const char* suite, std::size_t count, Body&& body, Execution mode = default_execution()) {
  std::vector<std::vector<Failure>> per_case(count);
  std::vector<std::exception_ptr> errors(count);
  const auto run_one = [&](std::size_t i) {
    try {
      per_case[i] = body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (mode == Execution::kParallel) {
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) run_one(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Report report{suite, count, {}};
  for (std::size_t i = 0; i < count; ++i) {
    for (auto& f : per_case[i]) {
      f.index = i;
      report.failures.push_back(std::move(f));
    }
  }
  return report;
}

}  // namespace bdlab
