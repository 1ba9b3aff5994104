// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "fracbranch/parallel.hpp"

namespace fracbranch::special_fn {

/// A function sampled on a strictly increasing, nonnegative time grid.
struct GridFunction {
  std::vector<double> t_grid;
  std::vector<double> values;
};

/// Throws PreconditionError unless t_grid is strictly increasing, starts at
/// t >= 0 and matches values in length.
void validate(const GridFunction& f);

/// Gamma function for x > 0.
double gamma_fn(double x);

/// Reciprocal gamma, entire; zero at the nonpositive integers.
double reciprocal_gamma(double x);

/// One-parameter Mittag-Leffler function E_beta(x), 0 < beta <= 1.
///
/// Route by argument: power series where its terms stay O(1) (|x| <= 1, or
/// any x > 0), the algebraic asymptotic expansion when its smallest term is
/// below double resolution, and otherwise the Laplace-type integral
///   E_beta(-y) = sin(beta pi)/(beta pi) * int_0^inf e^{-v^{1/beta}} y / (v^2 + 2 v y cos(beta pi) + y^2) dv,
/// whose integrand is positive (no cancellation).
double mittag_leffler(double beta, double x);

/// L1-scheme Caputo derivative of order beta in (0,1) on a uniform grid.
/// Returns values at t_grid[1..], i.e. every node that has history behind it.
GridFunction caputo_l1(const GridFunction& f, double beta,
                       Execution ex = Execution::parallel);

}  // namespace fracbranch::special_fn
