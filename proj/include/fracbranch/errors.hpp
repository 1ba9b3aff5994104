// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fracbranch {

// Argument outside the mathematical domain of an operation (e.g. beta > 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Structural precondition violated (non-uniform grid, too few replicates, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed statistical input (empty sample, sparse chi-square cells, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A time-change request reached past the simulated operational horizon.
class CensoringError : public std::runtime_error {
 public:
  CensoringError(const std::string& what, double unreachable_t)
      : std::runtime_error(what), unreachable_t_(unreachable_t) {}
  double unreachable_t() const noexcept { return unreachable_t_; }

 private:
  double unreachable_t_;
};

// An iterative numerical method gave up (ODE step control, quadrature).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested value cannot be delivered at double precision.
class AccuracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A simulation exceeded its event or population budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fracbranch
