#include "bdlab/sequence.hpp"

#include <charconv>

#include "bdlab/errors.hpp"

namespace bdlab {

StageSequence::StageSequence(std::vector<std::int64_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw InvalidInput("size sequence must not be empty");
  if (sizes_.front() != 1) throw InvalidInput("size sequence must start with n_1 = 1");
  for (std::size_t i = 1; i < sizes_.size(); ++i) {
    if (sizes_[i] < 1 || sizes_[i] % sizes_[i - 1] != 0) {
      throw InvalidInput("size sequence must satisfy n_k | n_{k+1}: " + std::to_string(sizes_[i - 1]) + " does not divide " +
                         std::to_string(sizes_[i]));
    }
  }
}

std::int64_t StageSequence::size(std::int64_t stage) const {
  if (stage < 1 || stage > stages()) {
    throw InvalidInput("stage " + std::to_string(stage) + " is outside the configured sequence (1.." +
                       std::to_string(stages()) + ")");
  }
  return sizes_[stage - 1];
}

std::int64_t StageSequence::radix(std::int64_t stage) const {
  if (stage < 1 || stage >= stages()) throw InvalidInput("no stage after " + std::to_string(stage));
  return sizes_[stage] / sizes_[stage - 1];
}

std::vector<std::int64_t> StageSequence::radii(std::int64_t stage) const {
  size(stage);
  std::vector<std::int64_t> out;
  for (std::int64_t k = 1; k < stage; ++k) out.push_back(radix(k));
  return out;
}

bool StageSequence::has_repeats() const {
  for (std::size_t i = 1; i < sizes_.size(); ++i) {
    if (sizes_[i] == sizes_[i - 1]) return true;
  }
  return false;
}

std::vector<std::int64_t> parse_sizes(std::string_view text) {
  std::vector<std::int64_t> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) {
      throw InvalidInput("malformed size list: '" + std::string(text) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) throw InvalidInput("empty size list");
  return out;
}

std::string to_string(const StageSequence& s) {
  std::string out;
  for (const auto n : s.sizes()) {
    if (!out.empty()) out += ',';
    out += std::to_string(n);
  }
  return out;
}

}  // namespace bdlab
