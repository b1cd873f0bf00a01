#pragma once

#include <stdexcept>
#include <string>

namespace rae {

// Invalid user input: bad weights, malformed files, inconsistent sizes.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A requested quantity is infinite for the given distribution
// (e.g. the objective when p1 = p2 = 0).
class divergence_error : public std::runtime_error {
 public:
  explicit divergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Integrand returned a non-finite value at a quadrature node.
class evaluation_error : public std::runtime_error {
 public:
  evaluation_error(const std::string& msg, double node)
      : std::runtime_error(msg + " at node t=" + std::to_string(node)), node_(node) {}
  double node() const { return node_; }

 private:
  double node_;
};

// Request exceeds a documented implementation limit (e.g. quadrature order).
class capability_error : public std::runtime_error {
 public:
  explicit capability_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rae
