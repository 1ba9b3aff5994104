// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracbranch/rng.hpp"

namespace fracbranch::random {

/// Law of the i.i.d. waiting times between generations.
///
/// pareto: P(J > x) = (x / scale)^{-tail_index} for x >= scale.
/// stable: J = scale * D with E[exp(-s D)] = exp(-s^tail_index).
/// deterministic: J = scale (the classical, untime-changed chain).
class WaitingTimeLaw {
 public:
  enum class Kind { exponential, pareto, stable, deterministic };

  static WaitingTimeLaw exponential(double rate);
  static WaitingTimeLaw pareto(double tail_index, double scale = 1.0);
  static WaitingTimeLaw stable(double tail_index, double scale = 1.0);
  static WaitingTimeLaw deterministic(double period = 1.0);
  /// Pareto law whose scale makes the renewal normaliser exactly n^beta.
  static WaitingTimeLaw pareto_normalized(double tail_index);

  /// Parses "exp:RATE", "pareto:BETA[:SCALE]", "pareto-norm:BETA",
  /// "stable:BETA[:SCALE]" and "unit[:PERIOD]".
  static WaitingTimeLaw parse(const std::string& text);

  Kind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }
  double tail_index() const noexcept { return tail_index_; }
  double scale() const noexcept { return scale_; }

  /// Stability index of the limiting time change: tail_index for pareto and
  /// stable kinds, 1 for the light-tailed kinds.
  double limit_beta() const noexcept;

  double sample(RngStream& rng) const;

  std::string describe() const;

 private:
  WaitingTimeLaw(Kind kind, double rate, double tail_index, double scale)
      : kind_(kind), rate_(rate), tail_index_(tail_index), scale_(scale) {}

  Kind kind_;
  double rate_;
  double tail_index_;
  double scale_;
};

/// Stable subordinator D on a uniform operational-time grid.
struct SubordinatorPath {
  std::vector<double> u_grid;
  std::vector<double> d_values;
};

/// Inverse subordinator E(t) = inf{u : D(u) > t} read off on a time grid.
struct InversePath {
  std::vector<double> t_grid;
  std::vector<double> e_values;
};

/// One-sided stable variable with Laplace transform exp(-s^beta), beta in (0,1).
/// Kanter's representation: two independent uniforms, no rejection.
double sample_one_sided_stable(double beta, RngStream& rng);

/// Marginal E(t) via the exact identity E(t) = (t / D)^beta. beta == 1 gives t.
/// t == 0 returns 0 without consuming randomness.
double sample_inverse_marginal(double beta, double t, RngStream& rng);

SubordinatorPath sample_subordinator_path(double beta, double u_max, std::int64_t n_steps,
                                          RngStream& rng);

/// e_values[i] is the smallest grid u with D(u) > t_grid[i].
/// Throws CensoringError naming the first t at or beyond the path's range.
InversePath invert_path(const SubordinatorPath& d, std::span<const double> t_grid);

/// Grid-resolution inverse subordinator sampled lazily: increments of D on the
/// lattice op_step * {0, 1, ...} are drawn until D exceeds max(t_grid). At most
/// `horizon` operational time is simulated, extended once by doubling, after
/// which CensoringError is raised.
struct LatticeInverse {
  double op_step = 0.0;
  std::vector<std::int64_t> indices;  // E(t_grid[i]) = indices[i] * op_step
};
LatticeInverse sample_inverse_on_lattice(double beta, std::span<const double> t_grid,
                                         double op_step, double horizon, RngStream& rng);

/// Operational horizon for sample_inverse_on_lattice: the 0.999 quantile of
/// E(t_max) estimated from 10^4 marginal samples drawn from `rng`.
double inverse_horizon(double beta, double t_max, RngStream& rng);

/// N_t = max{n >= 0 : J_1 + ... + J_n <= t}.
std::int64_t sample_renewal_count(const WaitingTimeLaw& law, double t, RngStream& rng);

/// Renewal epochs T_1 <= T_2 <= ... up to the first one exceeding t_max.
/// Returns N at each grid time, sharing one renewal path across the grid.
std::vector<std::int64_t> sample_renewal_counts(const WaitingTimeLaw& law,
                                                std::span<const double> t_grid, RngStream& rng);

/// Normalising sequence ~n_n with N_{nt} / ~n_n => E(t), where E inverts the
/// subordinator with Laplace exponent s^beta (beta = limit_beta()).
double renewal_normalizer(const WaitingTimeLaw& law, double n);

}  // namespace fracbranch::random
