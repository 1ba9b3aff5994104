// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "fracbranch/mc.hpp"
#include "fracbranch/parallel.hpp"
#include "fracbranch/path.hpp"
#include "fracbranch/rng.hpp"
#include "fracbranch/special_fn.hpp"

namespace fracbranch::csbp {

/// psi(u) = b u + c u^2 + sum_i w_i (exp(-z_i u) - 1 + z_i u)
class BranchingMechanism {
 public:
  struct Atom {
    double size;
    double weight;
  };

  BranchingMechanism(double b, double c, std::vector<Atom> jumps = {});

  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  const std::vector<Atom>& jumps() const noexcept { return jumps_; }

  /// 2c + sum_i w_i z_i^2
  double beta_tilde() const noexcept;

 private:
  double b_;
  double c_;
  std::vector<Atom> jumps_;
};

double psi_eval(const BranchingMechanism& mech, double u);

/// nu_t(lambda) solving d nu/dt = -psi(nu), nu_0 = lambda, on t_grid
/// (Dormand-Prince 5(4), absolute tolerance 1e-10, relative 1e-12).
special_fn::GridFunction solve_exponent(const BranchingMechanism& mech, double lambda,
                                        std::span<const double> t_grid);

double csbp_mean(const BranchingMechanism& mech, double x, double t);
double csbp_second_moment(const BranchingMechanism& mech, double x, double t);

/// First and second moments of X(E(t)).
double tc_mean(const BranchingMechanism& mech, double x, double t, double beta);
double tc_second_moment(const BranchingMechanism& mech, double x, double t, double beta);

/// Euler-Maruyama for dX = -b X dt + sqrt(2 c X) dW with full truncation,
/// absorbed at zero. Steps live on the lattice step * {0, 1, ...}; every
/// t_grid point must be a lattice point. step <= 0 picks the grid spacing
/// (or 1e-3 for a single-point grid).
PathGrid simulate_feller(double x0, double b, double c, std::span<const double> t_grid,
                         RngStream& rng, double step = 0.0);

/// Exact event-driven Yule process: from state n the next birth follows after
/// an Exp(theta n) time. The returned step path lists the birth times plus t_max.
PathGrid simulate_yule(std::int64_t n0, double theta, double t_max, RngStream& rng,
                       std::int64_t max_events = 10'000'000);

struct FellerSpec {
  double x0;
  double b;
  double c;
};
struct YuleSpec {
  std::int64_t n0;
  double theta;
};

struct TcProcessSpec {
  std::variant<FellerSpec, YuleSpec> inner;
  double beta = 1.0;
};

void validate(const TcProcessSpec& spec);

struct ComposeOptions {
  double op_step = 1e-3;  // operational lattice step (also the Euler step)
  double horizon = 0.0;   // operational horizon; <= 0 resolves it from 10^4 marginals
};

/// Resolves ComposeOptions::horizon once for a whole batch of replicates.
ComposeOptions resolve_compose_options(const TcProcessSpec& spec, double t_max,
                                       ComposeOptions options, const RngStream& rng);

/// X(E(t)) on t_grid: one inverse-subordinator path on the operational lattice,
/// then one independent inner path up to the largest E(t) needed. beta == 1
/// returns the inner path on t_grid directly.
PathGrid compose_time_change(const TcProcessSpec& spec, std::span<const double> t_grid,
                             RngStream& rng, const ComposeOptions& options = {});

/// X(E(t)) at a single time for n_rep replicates, replicate i on rng.substream(i).
std::vector<double> sample_time_changed_marginals(const TcProcessSpec& spec, double t,
                                                  std::size_t n_rep, const RngStream& rng,
                                                  ComposeOptions options = {},
                                                  Execution ex = Execution::parallel);

enum class PmfRoute {
  alternating,  // binomial sum of Mittag-Leffler terms; AccuracyError when it cancels
  mixture,      // quadrature of the geometric Yule law against the law of E(t)
  automatic,    // alternating, falling back to mixture past the cancellation guard
};

/// p_beta(n, t) = sum_{j=1}^n C(n-1, j-1) (-1)^{j-1} E_beta(-theta j t^beta).
double yule_fractional_pmf(std::int64_t n, double t, double theta, double beta,
                           PmfRoute route = PmfRoute::alternating);

/// Covariance of exp(-x nu_{E(t)}(lambda)) and exp(-y nu_{E(t)}(lambda)) over
/// the law of E(t), from n_rep marginal draws.
mc::McEstimate tc_branching_gap(const BranchingMechanism& mech, double x, double y, double lambda,
                                double t, double beta, std::int64_t n_rep, const RngStream& rng,
                                Execution ex = Execution::parallel);

}  // namespace fracbranch::csbp
