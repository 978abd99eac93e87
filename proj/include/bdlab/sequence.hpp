#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bdlab {

/// Finite prefix n_1 = 1 | n_2 | ... | n_K of a Bunce-Deddens size sequence.
/// Stages are numbered from 1, so stage k has size n_k.
class StageSequence {
 public:
  explicit StageSequence(std::vector<std::int64_t> sizes);

  const std::vector<std::int64_t>& sizes() const { return sizes_; }
  std::int64_t stages() const { return static_cast<std::int64_t>(sizes_.size()); }
  std::int64_t size(std::int64_t stage) const;
  /// m_k = n_{k+1} / n_k for k < stages().
  std::int64_t radix(std::int64_t stage) const;
  /// Radii m_1, ..., m_{k-1}: the digit ranges that index the n_k cylinders of depth k.
  std::vector<std::int64_t> radii(std::int64_t stage) const;
  /// True when some ratio equals 1 (allowed, but the sequence is not strictly increasing).
  bool has_repeats() const;

 private:
  std::vector<std::int64_t> sizes_;
};

/// Parses "1,2,4" into sizes; InvalidInput on anything else.
std::vector<std::int64_t> parse_sizes(std::string_view text);
std::string to_string(const StageSequence& s);

}  // namespace bdlab
