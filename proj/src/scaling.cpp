// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "fracbranch/csbp.hpp"
#include "fracbranch/errors.hpp"
#include "fracbranch/gw.hpp"
#include "fracbranch/mc.hpp"

namespace fracbranch::mc {

ConvergenceReport scaling_limit_experiment(const OffspringFamily& family,
                                           const random::WaitingTimeLaw& wait, double beta,
                                           double t, std::span<const std::int64_t> levels,
                                           std::size_t n_rep, const RngStream& rng, double x0,
                                           Execution ex) {
  if (levels.empty()) throw PreconditionError("scaling experiment needs at least one level");
  if (n_rep < 100) throw PreconditionError("scaling experiment needs n_rep >= 100");
  if (!(t > 0.0)) throw DomainError("t must be positive");
  if (!(x0 > 0.0)) throw DomainError("x0 must be positive");
  if (std::abs(wait.limit_beta() - beta) > 1e-12)
    throw PreconditionError("waiting law has limit index " + std::to_string(wait.limit_beta()) +
                            " but beta = " + std::to_string(beta));

  ConvergenceReport report;
  report.t = t;
  report.beta = beta;
  report.n_rep = n_rep;
  report.header = family.name + " | " + wait.describe() + " | beta=" + std::to_string(beta) +
                  " t=" + std::to_string(t) + " x0=" + std::to_string(x0);

  std::vector<double> reference;
  if (family.c > 0.0) {
    const csbp::TcProcessSpec spec{csbp::FellerSpec{x0, family.b, family.c}, beta};
    reference = csbp::sample_time_changed_marginals(spec, t, n_rep, rng.substream(0), {}, ex);
  } else {
    // Degenerate limit: deterministic decay x0 exp(-b E(t)).
    reference.resize(n_rep);
    const RngStream base = rng.substream(0);
    for_each_index(n_rep, ex, [&](std::size_t i) {
      RngStream stream = base.substream(i);
      reference[i] = x0 * std::exp(-family.b * random::sample_inverse_marginal(beta, t, stream));
    });
  }

  for (std::size_t level_index = 0; level_index < levels.size(); ++level_index) {
    const std::int64_t level = levels[level_index];
    if (level < 1) throw DomainError("levels must be positive");
    const double scale = random::renewal_normalizer(wait, static_cast<double>(level));
    const gw::OffspringLaw law = family.law_at_scale(scale);
    const auto start = std::max<std::int64_t>(1, std::llround(scale * x0));
    const double unit = x0 / static_cast<double>(start);
    const double horizon = static_cast<double>(level) * t;
    const RngStream base = rng.substream(level_index + 1);
    std::vector<double> sample(n_rep);
    for_each_index(n_rep, ex, [&](std::size_t i) {
      RngStream stream = base.substream(i);
      const std::int64_t generations = random::sample_renewal_count(wait, horizon, stream);
      sample[i] = unit * static_cast<double>(gw::gw_generation(start, law, generations, stream));
    });
    report.levels.push_back(level);
    report.scales.push_back(scale);
    report.ks_distances.push_back(ks_two_sample(sample, reference));
  }
  return report;
}

}  // namespace fracbranch::mc
