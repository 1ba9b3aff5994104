// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracbranch/parallel.hpp"
#include "fracbranch/random.hpp"
#include "fracbranch/rng.hpp"

namespace fracbranch::gw {
class OffspringLaw;
}

namespace fracbranch::mc {

/// Monte Carlo summary: sample mean, standard error sd / sqrt(n), count.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;

  /// |mean - target| <= sigmas * std_error + allowance
  bool agrees_with(double target, double sigmas = 3.0, double allowance = 0.0) const;
};

McEstimate estimate(std::span<const double> samples);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Critical value c(alpha) sqrt((n+m)/(n m)) of the asymptotic KS law.
double ks_critical(std::size_t n, std::size_t m, double alpha);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  int cells = 0;  // after merging
};

/// Pearson goodness of fit. Adjacent cells are merged left to right until each
/// expected count is >= 5 (a short remainder joins the last merged cell).
/// probs must sum to 1 within 1e-9, so the caller supplies the tail cell.
ChiSquare chi_square_gof(std::span<const std::int64_t> counts, std::span<const double> probs);

/// Two-sample homogeneity test on a shared set of cells, with the same merging
/// rule applied to the pooled expected counts.
ChiSquare chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// Upper quantile of the chi-square law with `dof` degrees of freedom.
double chi_square_critical(int dof, double level);

/// Offspring family indexed by a real scale k whose rescaled GWPs
/// Z_{floor(k t)} / k converge to the Feller diffusion with mechanism
/// b u + c u^2.
struct OffspringFamily {
  std::string name;
  std::function<gw::OffspringLaw(double)> law_at_scale;
  double b = 0.0;
  double c = 0.0;
};

/// Three-point law on {0, 1, 2}: p0 = c + b/(2k), p2 = c - b/(2k),
/// mean 1 - b/k, variance 2c - (b/k)^2. Needs 0 < c <= 1/2 and k >= |b|/(2c).
OffspringFamily feller_limit_family(double b, double c);

/// pmf{1: 1}: every individual replaces itself; limit is the constant path.
OffspringFamily frozen_family();

struct ConvergenceReport {
  std::vector<std::int64_t> levels;
  std::vector<double> scales;  // ~n_n at each level
  std::vector<double> ks_distances;
  double t = 0.0;
  double beta = 1.0;
  std::size_t n_rep = 0;
  std::string header;  // family and waiting-law parameters
};

/// Marginal check of the time-changed scaling limit: at each level n the GW
/// family at scale k = ~n_n is started from round(k x0) individuals, run for
/// N_{n t} generations and divided by its initial size over x0; the result is
/// compared in KS distance against n_rep draws of X(E(t)) for the family's
/// Feller limit.
ConvergenceReport scaling_limit_experiment(const OffspringFamily& family,
                                           const random::WaitingTimeLaw& wait, double beta,
                                           double t, std::span<const std::int64_t> levels,
                                           std::size_t n_rep, const RngStream& rng,
                                           double x0 = 1.0,
                                           Execution ex = Execution::parallel);

}  // namespace fracbranch::mc
