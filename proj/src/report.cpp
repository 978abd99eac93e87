#include "bdlab/report.hpp"

#include <atomic>

#include "bdlab/parallel.hpp"

namespace bdlab {

namespace {
std::atomic<Execution> g_execution{Execution::kParallel};
}

Execution default_execution() { return g_execution.load(std::memory_order_relaxed); }
void set_default_execution(Execution mode) { g_execution.store(mode, std::memory_order_relaxed); }

void Report::absorb(const Report& other) {
  for (const auto& f : other.failures) {
    Failure g = f;
    g.index += cases;
    failures.push_back(std::move(g));
  }
  cases += other.cases;
}

nlohmann::json Report::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& f : failures) {
    list.push_back({{"case", f.index}, {"check", f.check}, {"lhs", f.lhs}, {"rhs", f.rhs}});
  }
  return {{"suite", suite}, {"cases", cases}, {"failures", list}};
}

}  // namespace bdlab
