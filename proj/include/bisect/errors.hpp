#pragma once

#include <stdexcept>
#include <string>

namespace bisect {

// Refusal to start work whose cost would exceed a documented desk-scale guard.
// The CLI maps this to exit code 3; everything else invalid maps to exit code 2.
class guard_error : public std::runtime_error {
 public:
  explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

// Odd total degree where a complete matching is required.
class parity_error : public std::invalid_argument {
 public:
  explicit parity_error(const std::string& what) : std::invalid_argument(what) {}
};

// Edge-type counts that no matching over the given split can realize.
class feasibility_error : public std::invalid_argument {
 public:
  explicit feasibility_error(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed experiment/CLI configuration.
class config_error : public std::invalid_argument {
 public:
  explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace bisect
