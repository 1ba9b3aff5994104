// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include "fracbranch/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracbranch/errors.hpp"

namespace fracbranch::special_fn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTermTolerance = 1e-16;
constexpr int kMaxSeriesTerms = 10000;

void check_order(double beta) {
  if (!(beta > 0.0 && beta <= 1.0))
    throw DomainError("Mittag-Leffler order must lie in (0, 1], got " + std::to_string(beta));
}

// Power series; only called where it does not cancel badly.
double ml_series(double beta, double x) {
  if (x < 0.0) {
    double sum = 0.0;
    double power = 1.0;
    for (int r = 0; r < kMaxSeriesTerms; ++r) {
      const double term = power * reciprocal_gamma(r * beta + 1.0);
      sum += term;
      if (r * beta > 2.0 && std::abs(term) < kTermTolerance * std::max(1.0, std::abs(sum))) break;
      power *= x;
    }
    return sum;
  }
  // x > 0: positive terms, work in logs to survive large intermediate values.
  const double log_x = std::log(x);
  double sum = 0.0;
  double previous = 0.0;
  for (int r = 0; r < kMaxSeriesTerms; ++r) {
    const double term = std::exp(r * log_x - std::lgamma(r * beta + 1.0));
    sum += term;
    if (!std::isfinite(sum)) return std::numeric_limits<double>::infinity();
    if (r > 0 && term < previous && term < kTermTolerance * sum) break;
    previous = term;
  }
  return sum;
}

// Algebraic expansion E_beta(-y) ~ sum_k (-1)^{k+1} y^{-k} / Gamma(1 - beta k),
// truncated at its smallest term. Returns NaN if that term is not negligible.
double ml_asymptotic(double beta, double y) {
  double sum = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  double power = 1.0;
  for (int k = 1; k < 400; ++k) {
    power /= y;
    const double rg = reciprocal_gamma(1.0 - beta * k);
    if (!std::isfinite(rg)) break;
    const double term = ((k % 2 == 1) ? 1.0 : -1.0) * power * rg;
    if (term == 0.0) {
      if (power == 0.0) break;
      continue;
    }
    const double magnitude = std::abs(term);
    if (magnitude > smallest) break;
    smallest = magnitude;
    sum += term;
    if (magnitude < 1e-17 * std::abs(sum)) return sum;
  }
  if (smallest < 1e-16 * std::abs(sum)) return sum;
  return std::numeric_limits<double>::quiet_NaN();
}

double ml_integral(double beta, double y) {
  using boost::math::quadrature::gauss_kronrod;
  const double cos_bp = std::cos(beta * kPi);
  const double sin_bp = std::sin(beta * kPi);
  const double inv_beta = 1.0 / beta;
  auto integrand = [&](double v) {
    const double shifted = v + y * cos_bp;
    const double denom = shifted * shifted + y * y * sin_bp * sin_bp;
    return std::exp(-std::pow(v, inv_beta)) * y / denom;
  };
  // Truncate where exp(-v^{1/beta}) < e^{-600}; keeping clear of underflow stops
  // the relative error test from chasing an all-zero segment.
  const double v_max = std::pow(600.0, beta);
  std::vector<double> cuts = {0.0, 1.0, v_max};
  if (cos_bp < 0.0) {
    // Near-resonant denominator around v = -y cos(beta pi), width ~ y sin(beta pi).
    const double centre = -y * cos_bp;
    const double width = y * sin_bp;
    for (double k : {-64.0, -8.0, -1.0, 0.0, 1.0, 8.0, 64.0})
      if (const double c = centre + k * width; c > 0.0 && c < 0.9 * v_max) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double error = 0.0;
    total += gauss_kronrod<double, 61>::integrate(integrand, cuts[i], cuts[i + 1], 15, 1e-12,
                                                  &error);
  }
  return sin_bp / (beta * kPi) * total;
}

}  // namespace

void validate(const GridFunction& f) {
  if (f.t_grid.size() != f.values.size())
    throw PreconditionError("grid and values differ in length");
  if (!f.t_grid.empty() && !(f.t_grid.front() >= 0.0))
    throw PreconditionError("grid must start at t >= 0");
  for (std::size_t i = 1; i < f.t_grid.size(); ++i)
    if (!(f.t_grid[i] > f.t_grid[i - 1]))
      throw PreconditionError("grid must be strictly increasing");
}

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("gamma_fn requires a positive finite argument, got " + std::to_string(x));
  return std::tgamma(x);
}

double reciprocal_gamma(double x) {
  if (x > 0.0) {
    if (x < 170.0) return 1.0 / std::tgamma(x);
    return std::exp(-std::lgamma(x));
  }
  const double nearest = std::round(x);
  if (x == nearest) return 0.0;
  // Reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi, with sin(pi x) reduced
  // around the nearest integer to keep it accurate.
  const double reduced = x - nearest;
  const double sign = (static_cast<long long>(nearest) % 2 == 0) ? 1.0 : -1.0;
  const double sin_pix = sign * std::sin(kPi * reduced);
  const double one_minus_x = 1.0 - x;
  if (one_minus_x < 170.0) return std::tgamma(one_minus_x) * sin_pix / kPi;
  return std::copysign(std::exp(std::lgamma(one_minus_x) + std::log(std::abs(sin_pix) / kPi)),
                       sin_pix);
}

double mittag_leffler(double beta, double x) {
  check_order(beta);
  if (std::isnan(x)) throw DomainError("Mittag-Leffler argument is NaN");
  if (x == 0.0) return 1.0;
  if (beta == 1.0) return std::exp(x);
  if (x > 0.0 || x >= -1.0) return ml_series(beta, x);
  if (std::isinf(x)) return 0.0;
  const double y = -x;
  const double asymptotic = ml_asymptotic(beta, y);
  if (!std::isnan(asymptotic)) return asymptotic;
  return ml_integral(beta, y);
}

GridFunction caputo_l1(const GridFunction& f, double beta, Execution ex) {
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("Caputo order must lie in (0, 1), got " + std::to_string(beta));
  validate(f);
  const std::size_t n_points = f.t_grid.size();
  if (n_points < 2) throw PreconditionError("caputo_l1 needs at least two grid points");
  const double h = (f.t_grid.back() - f.t_grid.front()) / static_cast<double>(n_points - 1);
  for (std::size_t i = 1; i < n_points; ++i) {
    const double step = f.t_grid[i] - f.t_grid[i - 1];
    if (std::abs(step - h) > 1e-8 * h) throw PreconditionError("caputo_l1 requires a uniform grid");
  }

  // b_j = (j+1)^{1-beta} - j^{1-beta}
  std::vector<double> weights(n_points - 1);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double jd = static_cast<double>(j);
    weights[j] = std::pow(jd + 1.0, 1.0 - beta) - std::pow(jd, 1.0 - beta);
  }
  std::vector<double> increments(n_points - 1);
  for (std::size_t k = 0; k + 1 < n_points; ++k) increments[k] = f.values[k + 1] - f.values[k];

  const double scale = std::pow(h, -beta) / gamma_fn(2.0 - beta);
  GridFunction out;
  out.t_grid.assign(f.t_grid.begin() + 1, f.t_grid.end());
  out.values.assign(n_points - 1, 0.0);
  for_each_index(n_points - 1, ex, [&](std::size_t idx) {
    const std::size_t n = idx + 1;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += weights[j] * increments[n - 1 - j];
    out.values[idx] = scale * acc;
  });
  return out;
}

}  // namespace fracbranch::special_fn
