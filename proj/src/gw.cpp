// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include "fracbranch/gw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "fracbranch/errors.hpp"

namespace fracbranch::gw {

namespace {

constexpr std::int64_t kDirectThreshold = 32;
constexpr std::int64_t kPopulationCap = std::int64_t{1} << 53;

std::vector<double> dense_pmf(const std::map<std::int64_t, double>& pmf) {
  if (pmf.empty()) throw DomainError("offspring pmf is empty");
  if (pmf.begin()->first < 0) throw DomainError("offspring counts must be nonnegative");
  const std::int64_t top = pmf.rbegin()->first;
  if (top > 1'000'000) throw DomainError("offspring support is too large");
  std::vector<double> dense(static_cast<std::size_t>(top) + 1, 0.0);
  for (const auto& [k, p] : pmf) dense[static_cast<std::size_t>(k)] = p;
  return dense;
}

}  // namespace

OffspringLaw::OffspringLaw(const std::map<std::int64_t, double>& pmf)
    : OffspringLaw(dense_pmf(pmf)) {}

OffspringLaw::OffspringLaw(std::vector<double> pmf) : pmf_(std::move(pmf)) {
  if (pmf_.empty()) throw DomainError("offspring pmf is empty");
  double total = 0.0;
  for (double p : pmf_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("offspring probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError("offspring probabilities sum to " + std::to_string(total) + ", not 1");
  while (pmf_.size() > 1 && pmf_.back() == 0.0) pmf_.pop_back();
  cdf_.resize(pmf_.size());
  double running = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < pmf_.size(); ++k) {
    running += pmf_[k];
    cdf_[k] = running;
    mean_ += static_cast<double>(k) * pmf_[k];
    second += static_cast<double>(k) * static_cast<double>(k) * pmf_[k];
  }
  cdf_.back() = 1.0;
  variance_ = second - mean_ * mean_;
}

double OffspringLaw::pgf(double s) const {
  double acc = 0.0;
  for (auto it = pmf_.rbegin(); it != pmf_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

std::int64_t OffspringLaw::sample(RngStream& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::int64_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                            static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

std::int64_t gw_step(std::int64_t z, const OffspringLaw& law, RngStream& rng) {
  if (z < 0) throw DomainError("population size must be nonnegative");
  if (z == 0) return 0;
  std::int64_t total = 0;
  if (z <= kDirectThreshold) {
    for (std::int64_t i = 0; i < z; ++i) total += law.sample(rng);
    return total;
  }
  if (z > kPopulationCap / std::max<std::int64_t>(1, law.max_offspring()))
    throw ResourceError("population exceeds the exact-integer budget");
  // Multinomial histogram: count_k ~ Bin(remaining, p_k / mass_left).
  const auto& pmf = law.pmf();
  std::int64_t remaining = z;
  double mass_left = 1.0;
  for (std::size_t k = 0; k + 1 < pmf.size() && remaining > 0; ++k) {
    if (pmf[k] <= 0.0) continue;
    const double p = mass_left > 0.0 ? std::clamp(pmf[k] / mass_left, 0.0, 1.0) : 1.0;
    std::binomial_distribution<std::int64_t> binomial(remaining, p);
    const std::int64_t count = binomial(rng);
    total += static_cast<std::int64_t>(k) * count;
    remaining -= count;
    mass_left -= pmf[k];
  }
  total += law.max_offspring() * remaining;
  return total;
}

GwPath simulate_gw(std::int64_t j, const OffspringLaw& law, std::int64_t n_gen, RngStream& rng) {
  if (j < 0 || n_gen < 0) throw DomainError("initial size and generation count must be nonnegative");
  GwPath path;
  path.generations.reserve(static_cast<std::size_t>(n_gen) + 1);
  path.generations.push_back(j);
  std::int64_t z = j;
  for (std::int64_t n = 0; n < n_gen; ++n) {
    z = gw_step(z, law, rng);
    path.generations.push_back(z);
  }
  return path;
}

std::int64_t gw_generation(std::int64_t j, const OffspringLaw& law, std::int64_t n_gen,
                           RngStream& rng) {
  if (j < 0 || n_gen < 0) throw DomainError("initial size and generation count must be nonnegative");
  std::int64_t z = j;
  for (std::int64_t n = 0; n < n_gen && z > 0; ++n) z = gw_step(z, law, rng);
  return z;
}

PathGrid simulate_time_changed_gw(std::int64_t j, const OffspringLaw& law,
                                  const random::WaitingTimeLaw& wait,
                                  std::span<const double> t_grid, RngStream& rng) {
  if (j < 0) throw DomainError("initial size must be nonnegative");
  const auto counts = random::sample_renewal_counts(wait, t_grid, rng);
  PathGrid out;
  out.step = true;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.values.reserve(t_grid.size());
  std::int64_t z = j;
  std::int64_t generation = 0;
  for (std::int64_t target : counts) {
    for (; generation < target; ++generation) {
      if (z == 0) {
        generation = target;
        break;
      }
      z = gw_step(z, law, rng);
    }
    out.values.push_back(static_cast<double>(z));
  }
  return out;
}

mc::McEstimate branching_inequality_experiment(std::int64_t j, std::int64_t k, double lambda,
                                               double t, const OffspringLaw& law,
                                               const random::WaitingTimeLaw& wait,
                                               std::int64_t n_rep, const RngStream& rng,
                                               Execution ex) {
  if (n_rep < 1000) throw PreconditionError("branching inequality experiment needs n_rep >= 1000");
  if (j < 0 || k < 0) throw DomainError("initial sizes must be nonnegative");
  if (!(lambda >= 0.0) || !(t >= 0.0)) throw DomainError("lambda and t must be nonnegative");

  const auto n = static_cast<std::size_t>(n_rep);
  std::vector<double> joint(n), first(n), second(n);
  for_each_index(n, ex, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    const std::int64_t shared = random::sample_renewal_count(wait, t, stream);
    const double zj = static_cast<double>(gw_generation(j, law, shared, stream));
    const double zk = static_cast<double>(gw_generation(k, law, shared, stream));
    joint[i] = std::exp(-lambda * (zj + zk));
    const std::int64_t n1 = random::sample_renewal_count(wait, t, stream);
    first[i] = std::exp(-lambda * static_cast<double>(gw_generation(j, law, n1, stream)));
    const std::int64_t n2 = random::sample_renewal_count(wait, t, stream);
    second[i] = std::exp(-lambda * static_cast<double>(gw_generation(k, law, n2, stream)));
  });

  const double mean_joint = mc::estimate(joint).mean;
  const double mean_first = mc::estimate(first).mean;
  const double mean_second = mc::estimate(second).mean;
  // Delta-method influence values of mean(AB) - mean(C) mean(D).
  std::vector<double> influence(n);
  for (std::size_t i = 0; i < n; ++i)
    influence[i] = joint[i] - mean_second * first[i] - mean_first * second[i];
  mc::McEstimate out = mc::estimate(influence);
  out.mean = mean_joint - mean_first * mean_second;
  return out;
}

}  // namespace fracbranch::gw
