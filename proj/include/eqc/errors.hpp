#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace eqc {

// Argument outside the mathematical domain of an operation (|tau| >= 1, b >= 1, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A model-parameter inequality does not hold. `constraint()` is the violated
// inequality written out, e.g. "0 < phi1 < dphi1".
class constraint_error : public std::invalid_argument {
 public:
  constraint_error(std::string constraint, const std::string& detail)
      : std::invalid_argument("constraint violated: " + constraint + " (" + detail + ")"),
        constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

class index_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class quadrature_error : public std::runtime_error {
 public:
  quadrature_error(double estimate, double error_bound)
      : std::runtime_error("quadrature tolerance not reached: estimate " + std::to_string(estimate) +
                           ", error bound " + std::to_string(error_bound)),
        estimate_(estimate),
        error_bound_(error_bound) {}
  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

class eigensolver_error : public std::runtime_error {
 public:
  eigensolver_error(std::uint64_t seed, const std::string& what)
      : std::runtime_error(what + " (matrix seed " + std::to_string(seed) + ")"), seed_(seed) {}
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace eqc
