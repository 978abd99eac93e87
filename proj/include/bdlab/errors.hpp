#pragma once

#include <stdexcept>
#include <string>

namespace bdlab {

/// Malformed or mismatched input: bad JSON, size/power mismatch, n not dividing m.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured resource guard was hit (degree caps, conductor limit, refinement budget).
class ResourceLimit : public std::runtime_error {
 public:
  explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bdlab
