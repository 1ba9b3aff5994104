// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "fracbranch/mc.hpp"
#include "fracbranch/parallel.hpp"
#include "fracbranch/path.hpp"
#include "fracbranch/random.hpp"
#include "fracbranch/rng.hpp"

namespace fracbranch::gw {

/// Finite-support offspring distribution; pmf[k] = P(xi = k).
class OffspringLaw {
 public:
  explicit OffspringLaw(std::vector<double> pmf);
  explicit OffspringLaw(const std::map<std::int64_t, double>& pmf);

  const std::vector<double>& pmf() const noexcept { return pmf_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  std::int64_t max_offspring() const noexcept { return static_cast<std::int64_t>(pmf_.size()) - 1; }

  /// Probability generating function sum_k pmf[k] s^k.
  double pgf(double s) const;

  /// Inverse-CDF draw of one offspring count.
  std::int64_t sample(RngStream& rng) const;

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

/// Z_0, Z_1, ...; absorbed at zero.
struct GwPath {
  std::vector<std::int64_t> generations;
};

/// Sum of z i.i.d. offspring counts. Small z draws individuals one by one;
/// large z draws the multinomial offspring histogram by conditional binomials.
std::int64_t gw_step(std::int64_t z, const OffspringLaw& law, RngStream& rng);

GwPath simulate_gw(std::int64_t j, const OffspringLaw& law, std::int64_t n_gen, RngStream& rng);

/// Z_{n_gen} only; stops early on extinction.
std::int64_t gw_generation(std::int64_t j, const OffspringLaw& law, std::int64_t n_gen,
                           RngStream& rng);

/// Z_{N_t} on t_grid with one renewal path per call (step path).
PathGrid simulate_time_changed_gw(std::int64_t j, const OffspringLaw& law,
                                  const random::WaitingTimeLaw& wait,
                                  std::span<const double> t_grid, RngStream& rng);

/// Estimate of K_{j,k}(t) = E_{j+k}[e^{-lambda Z}] - E_j[e^{-lambda Z}] E_k[e^{-lambda Z}]
/// for the renewal-time-changed GWP Z_{N_t}.
///
/// The first term couples two independent subpopulations (from j and k) on one
/// shared renewal draw; the product term uses independent renewal draws.
/// Replicate i runs on rng.substream(i). Requires n_rep >= 1000.
mc::McEstimate branching_inequality_experiment(std::int64_t j, std::int64_t k, double lambda,
                                               double t, const OffspringLaw& law,
                                               const random::WaitingTimeLaw& wait,
                                               std::int64_t n_rep, const RngStream& rng,
                                               Execution ex = Execution::parallel);

}  // namespace fracbranch::gw
