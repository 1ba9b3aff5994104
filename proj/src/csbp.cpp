// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include "fracbranch/csbp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "fracbranch/errors.hpp"
#include "fracbranch/random.hpp"

namespace fracbranch::csbp {

namespace {

void check_moment_args(double x, double t) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("initial mass x must be positive");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time t must be nonnegative");
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError("time-change index beta must lie in (0, 1], got " + std::to_string(beta));
}

double psi_raw(const BranchingMechanism& mech, double u) {
  double value = mech.b() * u + mech.c() * u * u;
  for (const auto& atom : mech.jumps())
    value += atom.weight * (std::expm1(-atom.size * u) + atom.size * u);
  return value;
}

// Feller Euler-Maruyama on the lattice step * {0..}, reporting the requested
// (nondecreasing) lattice indices.
std::vector<double> feller_on_lattice(double x0, double b, double c, double step,
                                      std::span<const std::int64_t> indices, RngStream& rng) {
  std::vector<double> out;
  out.reserve(indices.size());
  double x = x0;
  std::int64_t k = 0;
  const double drift = -b * step;
  const double diffusion = 2.0 * c * step;
  for (std::int64_t target : indices) {
    for (; k < target; ++k) {
      if (x <= 0.0) {
        k = target;
        break;
      }
      x += drift * x + std::sqrt(diffusion * x) * rng.normal();
      if (x <= 0.0) x = 0.0;
    }
    out.push_back(x);
  }
  return out;
}

std::vector<std::int64_t> lattice_indices(std::span<const double> t_grid, double step) {
  std::vector<std::int64_t> indices;
  indices.reserve(t_grid.size());
  std::int64_t previous = -1;
  for (double t : t_grid) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("time grid must be nonnegative");
    const double ratio = t / step;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) > 1e-6 * std::max(1.0, nearest))
      throw PreconditionError("grid time " + std::to_string(t) + " is not on the Euler lattice of step " +
                              std::to_string(step));
    const auto index = static_cast<std::int64_t>(nearest);
    if (index <= previous) throw PreconditionError("time grid must be strictly increasing");
    previous = index;
    indices.push_back(index);
  }
  return indices;
}

// P(E(t) > u) = (1/pi) int_0^pi exp(-A(phi) (u t^{-beta})^{1/(1-beta)}) dphi with
// Kanter's A(phi) = [sin(beta phi)^beta sin((1-beta) phi)^{1-beta} / sin(phi)]^{1/(1-beta)}.
double kanter_log_a(double beta, double phi) {
  return (beta * std::log(std::sin(beta * phi)) + (1.0 - beta) * std::log(std::sin((1.0 - beta) * phi)) -
          std::log(std::sin(phi))) /
         (1.0 - beta);
}

double inverse_survival(double beta, double t, double u) {
  using boost::math::quadrature::gauss_kronrod;
  if (u <= 0.0) return 1.0;
  const double log_q = std::log(u / std::pow(t, beta)) / (1.0 - beta);
  auto integrand = [&](double phi) { return std::exp(-std::exp(kanter_log_a(beta, phi) + log_q)); };
  double error = 0.0;
  const double value =
      gauss_kronrod<double, 31>::integrate(integrand, 0.0, std::numbers::pi, 12, 1e-13, &error);
  return value / std::numbers::pi;
}

double pmf_mixture(std::int64_t n, double t, double theta, double beta) {
  using boost::math::quadrature::gauss_kronrod;
  if (t == 0.0) return n == 1 ? 1.0 : 0.0;
  if (beta == 1.0) {
    const double survive = std::exp(-theta * t);
    return survive * std::pow(-std::expm1(-theta * t), static_cast<double>(n - 1));
  }
  const auto nd = static_cast<double>(n);
  // d/du of g(u) = e^{-theta u} (1 - e^{-theta u})^{n-1}
  auto g_prime = [&](double u) {
    const double e = std::exp(-theta * u);
    if (n == 1) return -theta * e;
    const double one_minus = -std::expm1(-theta * u);
    return theta * e * std::pow(one_minus, nd - 2.0) * (nd * e - 1.0);
  };
  auto integrand = [&](double u) { return g_prime(u) * inverse_survival(beta, t, u); };
  // Beyond u_max, P(E(t) > u) < e^{-40}.
  const double log_a0 = std::log(std::pow(beta, beta) * std::pow(1.0 - beta, 1.0 - beta)) / (1.0 - beta);
  const double u_max = std::pow(t, beta) * std::pow(40.0 / std::exp(log_a0), 1.0 - beta);
  std::vector<double> cuts = {0.0, u_max};
  const double peak = std::log(nd) / theta;
  for (double c : {0.5 * peak, peak, peak + 2.0 / theta})
    if (c > 0.0 && c < u_max) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double total = (n == 1) ? 1.0 : 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double error = 0.0;
    total += gauss_kronrod<double, 31>::integrate(integrand, cuts[i], cuts[i + 1], 12, 1e-12, &error);
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace

BranchingMechanism::BranchingMechanism(double b, double c, std::vector<Atom> jumps)
    : b_(b), c_(c), jumps_(std::move(jumps)) {
  if (!std::isfinite(b)) throw DomainError("b must be finite");
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("c must be nonnegative");
  for (const auto& atom : jumps_)
    if (!(atom.size > 0.0) || !(atom.weight > 0.0) || !std::isfinite(atom.size) ||
        !std::isfinite(atom.weight))
      throw DomainError("jump atoms need positive size and weight");
}

double BranchingMechanism::beta_tilde() const noexcept {
  double value = 2.0 * c_;
  for (const auto& atom : jumps_) value += atom.weight * atom.size * atom.size;
  return value;
}

double psi_eval(const BranchingMechanism& mech, double u) {
  if (!(u >= 0.0)) throw DomainError("psi is evaluated on u >= 0 only");
  return psi_raw(mech, u);
}

special_fn::GridFunction solve_exponent(const BranchingMechanism& mech, double lambda,
                                        std::span<const double> t_grid) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 1>;
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
  special_fn::GridFunction out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  special_fn::validate({out.t_grid, std::vector<double>(out.t_grid.size())});
  out.values.reserve(t_grid.size());
  if (t_grid.empty()) return out;

  std::vector<double> times;
  times.reserve(t_grid.size() + 1);
  if (t_grid.front() > 0.0) times.push_back(0.0);
  times.insert(times.end(), t_grid.begin(), t_grid.end());
  const bool skip_origin = t_grid.front() > 0.0;

  auto rhs = [&](const State& nu, State& dnu, double) { dnu[0] = -psi_raw(mech, nu[0]); };
  std::vector<double> recorded;
  recorded.reserve(times.size());
  auto observer = [&](const State& nu, double) { recorded.push_back(std::max(0.0, nu[0])); };
  State state{lambda};
  if (times.size() == 1) {
    recorded.push_back(lambda);
  } else {
    const double dt = std::min(1e-3, 0.1 * (times.back() - times.front()));
    try {
      odeint::integrate_times(
          odeint::make_dense_output(1e-10, 1e-12, odeint::runge_kutta_dopri5<State>()), rhs, state,
          times.begin(), times.end(), dt, observer, odeint::max_step_checker(1'000'000));
    } catch (const std::runtime_error& e) {
      throw NumericalError(std::string("exponent ODE failed (lambda = ") + std::to_string(lambda) +
                           ", b = " + std::to_string(mech.b()) + ", c = " + std::to_string(mech.c()) +
                           "): " + e.what());
    }
  }
  out.values.assign(recorded.begin() + (skip_origin ? 1 : 0), recorded.end());
  return out;
}

double csbp_mean(const BranchingMechanism& mech, double x, double t) {
  check_moment_args(x, t);
  return x * std::exp(-mech.b() * t);
}

double csbp_second_moment(const BranchingMechanism& mech, double x, double t) {
  check_moment_args(x, t);
  const double b = mech.b();
  const double bt = mech.beta_tilde();
  if (b == 0.0) return x * x + x * bt * t;
  const double e1 = std::exp(-b * t);
  const double e2 = std::exp(-2.0 * b * t);
  return x * x * e2 - bt * x / b * (e2 - e1);
}

double tc_mean(const BranchingMechanism& mech, double x, double t, double beta) {
  check_moment_args(x, t);
  check_beta(beta);
  if (beta == 1.0) return csbp_mean(mech, x, t);
  return x * special_fn::mittag_leffler(beta, -mech.b() * std::pow(t, beta));
}

double tc_second_moment(const BranchingMechanism& mech, double x, double t, double beta) {
  check_moment_args(x, t);
  check_beta(beta);
  if (beta == 1.0) return csbp_second_moment(mech, x, t);
  const double b = mech.b();
  const double bt = mech.beta_tilde();
  const double tb = std::pow(t, beta);
  if (b == 0.0) return x * x + x * bt * tb / special_fn::gamma_fn(beta + 1.0);
  const double e1 = special_fn::mittag_leffler(beta, -b * tb);
  const double e2 = special_fn::mittag_leffler(beta, -2.0 * b * tb);
  return x * x * e2 - bt * x / b * (e2 - e1);
}

PathGrid simulate_feller(double x0, double b, double c, std::span<const double> t_grid,
                         RngStream& rng, double step) {
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw DomainError("x0 must be positive");
  if (!std::isfinite(b)) throw DomainError("b must be finite");
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("c must be nonnegative");
  if (t_grid.empty()) return {};
  if (!(step > 0.0)) {
    if (t_grid.size() == 1) {
      step = 1e-3;
    } else {
      step = t_grid[1] - t_grid[0];
      for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (std::abs((t_grid[i] - t_grid[i - 1]) - step) > 1e-8 * step)
          throw PreconditionError("simulate_feller needs a uniform grid (or an explicit step)");
    }
  }
  const auto indices = lattice_indices(t_grid, step);
  PathGrid out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  out.values = feller_on_lattice(x0, b, c, step, indices, rng);
  return out;
}

PathGrid simulate_yule(std::int64_t n0, double theta, double t_max, RngStream& rng,
                       std::int64_t max_events) {
  if (n0 < 1) throw DomainError("Yule process needs n0 >= 1");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta must be positive");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw DomainError("t_max must be nonnegative");
  PathGrid out;
  out.step = true;
  out.t_grid.push_back(0.0);
  out.values.push_back(static_cast<double>(n0));
  double now = 0.0;
  std::int64_t n = n0;
  std::int64_t events = 0;
  while (true) {
    now += rng.exponential() / (theta * static_cast<double>(n));
    if (now > t_max) break;
    if (++events > max_events)
      throw ResourceError("Yule event budget (" + std::to_string(max_events) + ") exhausted before t = " +
                          std::to_string(t_max));
    ++n;
    out.t_grid.push_back(now);
    out.values.push_back(static_cast<double>(n));
  }
  if (out.t_grid.back() < t_max) {
    out.t_grid.push_back(t_max);
    out.values.push_back(static_cast<double>(n));
  }
  return out;
}

void validate(const TcProcessSpec& spec) {
  check_beta(spec.beta);
  if (const auto* f = std::get_if<FellerSpec>(&spec.inner)) {
    if (!(f->x0 > 0.0)) throw DomainError("Feller x0 must be positive");
    if (!std::isfinite(f->b)) throw DomainError("Feller b must be finite");
    if (!(f->c >= 0.0)) throw DomainError("Feller c must be nonnegative");
  } else {
    const auto& y = std::get<YuleSpec>(spec.inner);
    if (y.n0 < 1) throw DomainError("Yule n0 must be >= 1");
    if (!(y.theta > 0.0)) throw DomainError("Yule theta must be positive");
  }
}

ComposeOptions resolve_compose_options(const TcProcessSpec& spec, double t_max,
                                       ComposeOptions options, const RngStream& rng) {
  validate(spec);
  if (!(options.op_step > 0.0)) throw DomainError("operational step must be positive");
  if (options.horizon <= 0.0 && spec.beta < 1.0) {
    RngStream horizon_stream = rng.substream(~std::uint64_t{0});
    options.horizon = random::inverse_horizon(spec.beta, t_max, horizon_stream);
  }
  return options;
}

PathGrid compose_time_change(const TcProcessSpec& spec, std::span<const double> t_grid,
                             RngStream& rng, const ComposeOptions& options) {
  validate(spec);
  if (t_grid.empty()) return {};
  const double t_max = t_grid.back();
  if (spec.beta == 1.0) {
    if (const auto* f = std::get_if<FellerSpec>(&spec.inner))
      return simulate_feller(f->x0, f->b, f->c, t_grid, rng, options.op_step);
    const auto& y = std::get<YuleSpec>(spec.inner);
    const PathGrid path = simulate_yule(y.n0, y.theta, t_max, rng);
    PathGrid out;
    out.step = true;
    out.t_grid.assign(t_grid.begin(), t_grid.end());
    for (double t : t_grid) out.values.push_back(path.value_at(t));
    return out;
  }

  ComposeOptions resolved = options;
  if (resolved.horizon <= 0.0) {
    RngStream horizon_stream = rng.substream(~std::uint64_t{0});
    resolved.horizon = random::inverse_horizon(spec.beta, t_max, horizon_stream);
  }
  const auto inverse =
      random::sample_inverse_on_lattice(spec.beta, t_grid, resolved.op_step, resolved.horizon, rng);
  PathGrid out;
  out.t_grid.assign(t_grid.begin(), t_grid.end());
  if (const auto* f = std::get_if<FellerSpec>(&spec.inner)) {
    out.values = feller_on_lattice(f->x0, f->b, f->c, resolved.op_step, inverse.indices, rng);
    return out;
  }
  const auto& y = std::get<YuleSpec>(spec.inner);
  out.step = true;
  const double u_max = static_cast<double>(inverse.indices.back()) * resolved.op_step;
  const PathGrid path = simulate_yule(y.n0, y.theta, u_max, rng);
  for (std::int64_t index : inverse.indices)
    out.values.push_back(path.value_at(static_cast<double>(index) * resolved.op_step));
  return out;
}

std::vector<double> sample_time_changed_marginals(const TcProcessSpec& spec, double t,
                                                  std::size_t n_rep, const RngStream& rng,
                                                  ComposeOptions options, Execution ex) {
  const ComposeOptions resolved = resolve_compose_options(spec, t, options, rng);
  std::vector<double> out(n_rep);
  const std::array<double, 1> grid{t};
  for_each_index(n_rep, ex, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    out[i] = compose_time_change(spec, grid, stream, resolved).values.front();
  });
  return out;
}

double yule_fractional_pmf(std::int64_t n, double t, double theta, double beta, PmfRoute route) {
  if (n < 1) throw DomainError("Yule pmf is defined for n >= 1");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("t must be nonnegative");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("theta must be positive");
  check_beta(beta);
  if (t == 0.0) return n == 1 ? 1.0 : 0.0;
  if (route == PmfRoute::mixture) return pmf_mixture(n, t, theta, beta);
  // Past a central binomial coefficient of 1e8 the guard below cannot pass.
  if (route == PmfRoute::automatic &&
      std::lgamma(static_cast<double>(n)) - 2.0 * std::lgamma(0.5 * static_cast<double>(n) + 0.5) >
          std::log(1e8))
    return pmf_mixture(n, t, theta, beta);

  // Neumaier-compensated alternating sum.
  const double tb = std::pow(t, beta);
  double sum = 0.0;
  double compensation = 0.0;
  double magnitude = 0.0;
  double binom = 1.0;  // C(n-1, j-1)
  for (std::int64_t j = 1; j <= n; ++j) {
    if (j > 1) binom = binom * static_cast<double>(n - j + 1) / static_cast<double>(j - 1);
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    const double term = sign * binom * special_fn::mittag_leffler(beta, -theta * static_cast<double>(j) * tb);
    magnitude += std::abs(term);
    const double next = sum + term;
    if (std::abs(sum) >= std::abs(term))
      compensation += (sum - next) + term;
    else
      compensation += (term - next) + sum;
    sum = next;
  }
  const double result = sum + compensation;
  if (magnitude > 1e8 * std::abs(result)) {
    if (route == PmfRoute::automatic) return pmf_mixture(n, t, theta, beta);
    throw AccuracyError("alternating Yule pmf sum cancels by a factor " + std::to_string(magnitude / std::abs(result)) +
                        " at n = " + std::to_string(n) + "; use extended precision or the mixture route");
  }
  return std::clamp(result, 0.0, 1.0);
}

mc::McEstimate tc_branching_gap(const BranchingMechanism& mech, double x, double y, double lambda,
                                double t, double beta, std::int64_t n_rep, const RngStream& rng,
                                Execution ex) {
  if (n_rep < 1000) throw PreconditionError("tc_branching_gap needs n_rep >= 1000");
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("initial masses must be nonnegative");
  if (!(t >= 0.0)) throw DomainError("t must be nonnegative");
  check_beta(beta);
  const auto n = static_cast<std::size_t>(n_rep);
  std::vector<double> clock(n);
  for_each_index(n, ex, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    clock[i] = random::sample_inverse_marginal(beta, t, stream);
  });
  std::vector<double> grid = clock;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const auto nu = solve_exponent(mech, lambda, grid);

  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pos = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), clock[i]) - grid.begin());
    a[i] = std::exp(-x * nu.values[pos]);
    b[i] = std::exp(-y * nu.values[pos]);
  }
  // Shifted covariance: exactly zero when every draw coincides.
  double mean_da = 0.0, mean_db = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_da += a[i] - a[0];
    mean_db += b[i] - b[0];
  }
  mean_da /= static_cast<double>(n);
  mean_db /= static_cast<double>(n);
  std::vector<double> products(n);
  for (std::size_t i = 0; i < n; ++i)
    products[i] = ((a[i] - a[0]) - mean_da) * ((b[i] - b[0]) - mean_db);
  return mc::estimate(products);
}

}  // namespace fracbranch::csbp
