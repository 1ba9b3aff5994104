// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracbranch/errors.hpp"
#include "fracbranch/gw.hpp"
#include "fracbranch/mc.hpp"

using namespace fracbranch;
using namespace fracbranch::mc;

TEST_CASE("estimate") {
  const std::vector<double> x = {1, 2, 3, 4};
  const auto e = estimate(x);
  CHECK(e.mean == 2.5);
  CHECK(e.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(e.n == 4);
  CHECK(e.agrees_with(2.5 + 3 * e.std_error));
  CHECK_FALSE(e.agrees_with(2.5 + 3.01 * e.std_error));
  CHECK(e.agrees_with(4.0, 0.0, 1.5));
}

TEST_CASE("two-sample KS") {
  const std::vector<double> a = {1, 2, 3, 4};
  const std::vector<double> b = {3, 4, 5, 6};
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample(a, b) == doctest::Approx(0.5));
  const std::vector<double> ties = {0, 0, 0, 1};
  const std::vector<double> other = {0, 1, 1, 1};
  CHECK(ks_two_sample(ties, other) == doctest::Approx(0.5));
  CHECK(ks_critical(100, 100, 0.01) == doctest::Approx(1.6276 * std::sqrt(0.02)).epsilon(1e-4));
  CHECK(ks_critical(50, 200, 0.001) == doctest::Approx(1.9495 * std::sqrt(250.0 / 10000.0)).epsilon(1e-4));
}

TEST_CASE("chi-square") {
  CHECK(chi_square_critical(3, 0.01) == doctest::Approx(11.345).epsilon(1e-4));
  const std::vector<std::int64_t> counts = {10, 20, 30, 40};
  const std::vector<double> probs = {0.1, 0.2, 0.3, 0.4};
  const auto perfect = chi_square_gof(counts, probs);
  CHECK(perfect.statistic == 0.0);
  CHECK(perfect.dof == 3);
  // expected 2, 2, 4, 92: first three merge into one cell of 8
  const std::vector<std::int64_t> skewed = {3, 3, 2, 92};
  const std::vector<double> skew_probs = {0.02, 0.02, 0.04, 0.92};
  const auto merged = chi_square_gof(skewed, skew_probs);
  CHECK(merged.cells == 2);
  CHECK(merged.statistic == doctest::Approx(0.0));
  const std::vector<double> short_probs = {0.1, 0.2, 0.3, 0.3};
  CHECK_THROWS_AS(chi_square_gof(counts, short_probs), PreconditionError);
  const std::vector<std::int64_t> a = {30, 30, 40};
  const std::vector<std::int64_t> b = {60, 60, 80};
  CHECK(chi_square_two_sample(a, b).statistic == doctest::Approx(0.0));
}

TEST_CASE("three-point Feller family") {
  const auto family = feller_limit_family(1.0, 0.5);
  const auto law = family.law_at_scale(10.0);
  CHECK(law.mean() == doctest::Approx(0.9));
  CHECK(law.variance() == doctest::Approx(1.0 - 0.01));
  CHECK_THROWS_AS(family.law_at_scale(0.5), DomainError);
  CHECK_THROWS_AS(feller_limit_family(1.0, 0.7), DomainError);
  CHECK(frozen_family().law_at_scale(3.0).mean() == 1.0);
}

TEST_CASE("frozen family has an exact scaling limit") {
  const std::vector<std::int64_t> levels = {10, 100};
  const auto report = scaling_limit_experiment(frozen_family(), random::WaitingTimeLaw::pareto_normalized(0.6),
                                               0.6, 1.0, levels, 500, RngStream(51));
  REQUIRE(report.ks_distances.size() == 2);
  CHECK(report.ks_distances[0] == 0.0);
  CHECK(report.ks_distances[1] == 0.0);
  CHECK(report.scales[1] == doctest::Approx(std::pow(100.0, 0.6)));
  CHECK_THROWS_AS(scaling_limit_experiment(frozen_family(), random::WaitingTimeLaw::exponential(1.0), 0.6, 1.0,
                                           levels, 500, RngStream(51)),
                  PreconditionError);
}
