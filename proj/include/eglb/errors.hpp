#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace eglb {

// Malformed in-memory inputs: dimension mismatches, values outside their domain.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad run configuration (non-positive learning rate, unknown reference, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File-level problems; the message names the file and line.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Demand that cannot be routed. Carries the gateways whose combined demand
// exceeds the capacity reachable from them (a max-flow min-cut witness).
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& msg, std::vector<int> gateways)
      : std::runtime_error(msg), gateways_(std::move(gateways)) {}

  const std::vector<int>& gateways() const { return gateways_; }

 private:
  std::vector<int> gateways_;
};

}  // namespace eglb
