// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include "fracbranch/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fracbranch/errors.hpp"
#include "fracbranch/special_fn.hpp"

namespace fracbranch::random {

namespace {

constexpr std::int64_t kMaxRenewals = 2'000'000'000;

void check_stable_index(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("stable index must lie in (0, 1), got " + std::to_string(beta));
}

void check_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw DomainError(std::string(name) + " must be positive and finite");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

WaitingTimeLaw WaitingTimeLaw::exponential(double rate) {
  check_positive(rate, "exponential rate");
  return {Kind::exponential, rate, 1.0, 1.0};
}

WaitingTimeLaw WaitingTimeLaw::pareto(double tail_index, double scale) {
  check_stable_index(tail_index);
  check_positive(scale, "pareto scale");
  return {Kind::pareto, 0.0, tail_index, scale};
}

WaitingTimeLaw WaitingTimeLaw::stable(double tail_index, double scale) {
  check_stable_index(tail_index);
  check_positive(scale, "stable scale");
  return {Kind::stable, 0.0, tail_index, scale};
}

WaitingTimeLaw WaitingTimeLaw::deterministic(double period) {
  check_positive(period, "deterministic period");
  return {Kind::deterministic, 0.0, 1.0, period};
}

WaitingTimeLaw WaitingTimeLaw::pareto_normalized(double tail_index) {
  check_stable_index(tail_index);
  // Gamma(1-beta) scale^beta = 1
  return pareto(tail_index, std::pow(special_fn::gamma_fn(1.0 - tail_index), -1.0 / tail_index));
}

WaitingTimeLaw WaitingTimeLaw::parse(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw DomainError("empty waiting-time law");
  auto number = [&](std::size_t i) {
    if (i >= parts.size()) throw DomainError("waiting-time law '" + text + "' is missing a parameter");
    try {
      std::size_t used = 0;
      const double v = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw DomainError("waiting-time law '" + text + "' has a malformed number");
    }
  };
  const std::string& kind = parts[0];
  if (kind == "exp" && parts.size() == 2) return exponential(number(1));
  if (kind == "pareto" && parts.size() == 2) return pareto(number(1));
  if (kind == "pareto" && parts.size() == 3) return pareto(number(1), number(2));
  if (kind == "pareto-norm" && parts.size() == 2) return pareto_normalized(number(1));
  if (kind == "stable" && parts.size() == 2) return stable(number(1));
  if (kind == "stable" && parts.size() == 3) return stable(number(1), number(2));
  if (kind == "unit" && parts.size() == 1) return deterministic(1.0);
  if (kind == "unit" && parts.size() == 2) return deterministic(number(1));
  throw DomainError("unrecognised waiting-time law '" + text + "'");
}

double WaitingTimeLaw::limit_beta() const noexcept {
  return (kind_ == Kind::pareto || kind_ == Kind::stable) ? tail_index_ : 1.0;
}

double WaitingTimeLaw::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::exponential:
      return rng.exponential() / rate_;
    case Kind::pareto:
      return scale_ * std::pow(rng.uniform(), -1.0 / tail_index_);
    case Kind::stable:
      return scale_ * sample_one_sided_stable(tail_index_, rng);
    case Kind::deterministic:
      return scale_;
  }
  return scale_;
}

std::string WaitingTimeLaw::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::exponential: os << "exp:" << rate_; break;
    case Kind::pareto: os << "pareto:" << tail_index_ << ":" << scale_; break;
    case Kind::stable: os << "stable:" << tail_index_ << ":" << scale_; break;
    case Kind::deterministic: os << "unit:" << scale_; break;
  }
  return os.str();
}

double sample_one_sided_stable(double beta, RngStream& rng) {
  check_stable_index(beta);
  const double phi = std::numbers::pi * rng.uniform();
  const double w = rng.exponential();
  const double ratio = (1.0 - beta) / beta;
  // D = sin(beta phi) sin((1-beta) phi)^{(1-beta)/beta} / (sin(phi)^{1/beta} W^{(1-beta)/beta})
  const double log_d = std::log(std::sin(beta * phi)) +
                       ratio * std::log(std::sin((1.0 - beta) * phi)) -
                       std::log(std::sin(phi)) / beta - ratio * std::log(w);
  return std::exp(log_d);
}

double sample_inverse_marginal(double beta, double t, RngStream& rng) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError("inverse subordinator time must be nonnegative, got " + std::to_string(t));
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError("stable index must lie in (0, 1], got " + std::to_string(beta));
  if (t == 0.0) return 0.0;
  if (beta == 1.0) return t;
  return std::pow(t / sample_one_sided_stable(beta, rng), beta);
}

SubordinatorPath sample_subordinator_path(double beta, double u_max, std::int64_t n_steps,
                                          RngStream& rng) {
  check_stable_index(beta);
  check_positive(u_max, "u_max");
  if (n_steps < 1) throw PreconditionError("subordinator path needs n_steps >= 1");
  const double du = u_max / static_cast<double>(n_steps);
  const double increment_scale = std::pow(du, 1.0 / beta);
  SubordinatorPath path;
  path.u_grid.resize(static_cast<std::size_t>(n_steps) + 1);
  path.d_values.resize(static_cast<std::size_t>(n_steps) + 1);
  path.u_grid[0] = 0.0;
  path.d_values[0] = 0.0;
  for (std::int64_t i = 1; i <= n_steps; ++i) {
    path.u_grid[i] = du * static_cast<double>(i);
    path.d_values[i] = path.d_values[i - 1] + increment_scale * sample_one_sided_stable(beta, rng);
  }
  return path;
}

InversePath invert_path(const SubordinatorPath& d, std::span<const double> t_grid) {
  if (d.u_grid.size() != d.d_values.size() || d.u_grid.empty())
    throw PreconditionError("subordinator path grids differ in length or are empty");
  InversePath out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.e_values.reserve(t_grid.size());
  std::size_t cursor = 0;
  double previous_t = -std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (!(t >= previous_t)) throw PreconditionError("inversion grid must be nondecreasing");
    previous_t = t;
    while (cursor < d.d_values.size() && !(d.d_values[cursor] > t)) ++cursor;
    if (cursor == d.d_values.size())
      throw CensoringError("t = " + std::to_string(t) + " is not reached by the subordinator path (D(u_max) = " +
                               std::to_string(d.d_values.back()) + ")",
                           t);
    out.e_values.push_back(d.u_grid[cursor]);
  }
  return out;
}

LatticeInverse sample_inverse_on_lattice(double beta, std::span<const double> t_grid,
                                         double op_step, double horizon, RngStream& rng) {
  check_stable_index(beta);
  check_positive(op_step, "operational step");
  check_positive(horizon, "operational horizon");
  LatticeInverse out;
  out.op_step = op_step;
  out.indices.reserve(t_grid.size());
  const double increment_scale = std::pow(op_step, 1.0 / beta);
  auto max_steps = static_cast<std::int64_t>(std::ceil(horizon / op_step));
  bool extended = false;
  double d = 0.0;
  std::int64_t index = 0;
  double previous_t = -std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (!(t >= previous_t) || t < 0.0)
      throw PreconditionError("time grid must be nonnegative and nondecreasing");
    previous_t = t;
    while (!(d > t)) {
      if (index == max_steps) {
        if (extended)
          throw CensoringError("t = " + std::to_string(t) + " lies beyond the operational horizon " +
                                   std::to_string(2.0 * horizon),
                               t);
        extended = true;
        max_steps *= 2;
      }
      d += increment_scale * sample_one_sided_stable(beta, rng);
      ++index;
    }
    out.indices.push_back(index);
  }
  return out;
}

double inverse_horizon(double beta, double t_max, RngStream& rng) {
  constexpr int kSamples = 10000;
  if (!(t_max > 0.0)) return 1.0;
  std::vector<double> draws(kSamples);
  for (double& x : draws) x = sample_inverse_marginal(beta, t_max, rng);
  const auto rank = static_cast<std::size_t>(0.999 * kSamples);
  std::nth_element(draws.begin(), draws.begin() + rank, draws.end());
  return std::max(draws[rank], 1e-12);
}

std::int64_t sample_renewal_count(const WaitingTimeLaw& law, double t, RngStream& rng) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError("renewal time must be nonnegative, got " + std::to_string(t));
  if (law.kind() == WaitingTimeLaw::Kind::deterministic)
    return static_cast<std::int64_t>(std::floor(t / law.scale()));
  double epoch = 0.0;
  std::int64_t count = 0;
  while (true) {
    epoch += law.sample(rng);
    if (epoch > t) return count;
    if (++count >= kMaxRenewals) throw ResourceError("renewal count budget exceeded");
  }
}

std::vector<std::int64_t> sample_renewal_counts(const WaitingTimeLaw& law,
                                                std::span<const double> t_grid, RngStream& rng) {
  std::vector<std::int64_t> counts;
  counts.reserve(t_grid.size());
  double next_epoch = 0.0;
  std::int64_t count = 0;
  bool drawn = false;
  double previous_t = -std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    if (!(t >= previous_t) || !(t >= 0.0))
      throw PreconditionError("renewal grid must be nonnegative and nondecreasing");
    previous_t = t;
    if (law.kind() == WaitingTimeLaw::Kind::deterministic) {
      counts.push_back(static_cast<std::int64_t>(std::floor(t / law.scale())));
      continue;
    }
    if (!drawn) {
      next_epoch = law.sample(rng);
      drawn = true;
    }
    while (next_epoch <= t) {
      if (++count >= kMaxRenewals) throw ResourceError("renewal count budget exceeded");
      next_epoch += law.sample(rng);
    }
    counts.push_back(count);
  }
  return counts;
}

double renewal_normalizer(const WaitingTimeLaw& law, double n) {
  check_positive(n, "scale level");
  switch (law.kind()) {
    case WaitingTimeLaw::Kind::exponential:
      return n * law.rate();
    case WaitingTimeLaw::Kind::deterministic:
      return n / law.scale();
    case WaitingTimeLaw::Kind::pareto: {
      // T_n / n^{1/beta} => (Gamma(1-beta) scale^beta)^{1/beta} D
      const double beta = law.tail_index();
      return std::pow(n, beta) /
             (special_fn::gamma_fn(1.0 - beta) * std::pow(law.scale(), beta));
    }
    case WaitingTimeLaw::Kind::stable: {
      const double beta = law.tail_index();
      return std::pow(n, beta) / std::pow(law.scale(), beta);
    }
  }
  return n;
}

}  // namespace fracbranch::random
