// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include "fracbranch/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "fracbranch/errors.hpp"
#include "fracbranch/gw.hpp"

namespace fracbranch::mc {

namespace {

struct Merged {
  std::vector<double> observed_a;
  std::vector<double> observed_b;
  std::vector<double> expected;
};

// Left-to-right merge until each cell's expected count reaches 5; a short
// remainder is folded into the last merged cell.
void merge_cells(Merged& m) {
  Merged out;
  double ea = 0.0, eb = 0.0, ex = 0.0;
  for (std::size_t i = 0; i < m.expected.size(); ++i) {
    ea += m.observed_a[i];
    eb += m.observed_b.empty() ? 0.0 : m.observed_b[i];
    ex += m.expected[i];
    if (ex >= 5.0) {
      out.observed_a.push_back(ea);
      out.observed_b.push_back(eb);
      out.expected.push_back(ex);
      ea = eb = ex = 0.0;
    }
  }
  if (ex > 0.0 || ea > 0.0 || eb > 0.0) {
    if (out.expected.empty()) {
      out.observed_a.push_back(ea);
      out.observed_b.push_back(eb);
      out.expected.push_back(ex);
    } else {
      out.observed_a.back() += ea;
      out.observed_b.back() += eb;
      out.expected.back() += ex;
    }
  }
  m = std::move(out);
}

}  // namespace

bool McEstimate::agrees_with(double target, double sigmas, double allowance) const {
  return std::abs(mean - target) <= sigmas * std_error + allowance;
}

McEstimate estimate(std::span<const double> samples) {
  McEstimate out;
  out.n = static_cast<std::int64_t>(samples.size());
  if (samples.empty()) return out;
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (double x : samples) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  out.mean = mean;
  if (count > 1) {
    const double variance = m2 / static_cast<double>(count - 1);
    out.std_error = std::sqrt(variance / static_cast<double>(count));
  }
  return out;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw PreconditionError("KS test needs two nonempty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
  if (n == 0 || m == 0) throw PreconditionError("KS critical value needs positive sample sizes");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const auto nd = static_cast<double>(n);
  const auto md = static_cast<double>(m);
  return c * std::sqrt((nd + md) / (nd * md));
}

ChiSquare chi_square_gof(std::span<const std::int64_t> counts, std::span<const double> probs) {
  if (counts.size() != probs.size() || counts.empty())
    throw PreconditionError("chi-square needs matching, nonempty count and probability cells");
  const double total_prob = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total_prob - 1.0) > 1e-9)
    throw PreconditionError("cell probabilities sum to " + std::to_string(total_prob) + ", not 1");
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
  Merged m;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    m.observed_a.push_back(static_cast<double>(counts[i]));
    m.expected.push_back(n * probs[i]);
  }
  merge_cells(m);
  ChiSquare out;
  for (std::size_t i = 0; i < m.expected.size(); ++i) {
    const double diff = m.observed_a[i] - m.expected[i];
    out.statistic += diff * diff / m.expected[i];
  }
  out.cells = static_cast<int>(m.expected.size());
  out.dof = out.cells - 1;
  return out;
}

ChiSquare chi_square_two_sample(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size() || a.empty()) throw PreconditionError("two-sample chi-square needs matching cells");
  const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::int64_t{0}));
  const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::int64_t{0}));
  if (na == 0.0 || nb == 0.0) throw PreconditionError("two-sample chi-square needs nonempty samples");
  Merged m;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m.observed_a.push_back(static_cast<double>(a[i]));
    m.observed_b.push_back(static_cast<double>(b[i]));
    // pooled expected count of the smaller sample drives the merging
    m.expected.push_back(static_cast<double>(a[i] + b[i]) * std::min(na, nb) / (na + nb));
  }
  merge_cells(m);
  ChiSquare out;
  for (std::size_t i = 0; i < m.expected.size(); ++i) {
    const double pooled = m.observed_a[i] + m.observed_b[i];
    const double ea = pooled * na / (na + nb);
    const double eb = pooled * nb / (na + nb);
    out.statistic += (m.observed_a[i] - ea) * (m.observed_a[i] - ea) / ea +
                     (m.observed_b[i] - eb) * (m.observed_b[i] - eb) / eb;
  }
  out.cells = static_cast<int>(m.expected.size());
  out.dof = out.cells - 1;
  return out;
}

double chi_square_critical(int dof, double level) {
  if (dof < 1) throw PreconditionError("chi-square critical value needs dof >= 1");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0, 1)");
  const boost::math::chi_squared_distribution<double> law(dof);
  return boost::math::quantile(boost::math::complement(law, level));
}

OffspringFamily feller_limit_family(double b, double c) {
  if (!std::isfinite(b)) throw DomainError("b must be finite");
  if (!(c > 0.0 && c <= 0.5)) throw DomainError("three-point family needs 0 < c <= 1/2");
  OffspringFamily family;
  family.name = "three-point(b=" + std::to_string(b) + ", c=" + std::to_string(c) + ")";
  family.b = b;
  family.c = c;
  family.law_at_scale = [b, c](double k) {
    const double shift = b / (2.0 * k);
    const double p0 = c + shift;
    const double p2 = c - shift;
    if (!(k > 0.0) || p0 < 0.0 || p2 < 0.0)
      throw DomainError("scale k = " + std::to_string(k) + " is too small for the three-point family");
    return gw::OffspringLaw(std::vector<double>{p0, std::max(0.0, 1.0 - p0 - p2), p2});
  };
  return family;
}

OffspringFamily frozen_family() {
  OffspringFamily family;
  family.name = "frozen";
  family.law_at_scale = [](double) { return gw::OffspringLaw(std::vector<double>{0.0, 1.0}); };
  return family;
}

}  // namespace fracbranch::mc
