// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include "verify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fracbranch/csbp.hpp"
#include "fracbranch/errors.hpp"
#include "fracbranch/gw.hpp"
#include "fracbranch/mc.hpp"
#include "fracbranch/random.hpp"

namespace fracbranch::cli {

namespace {

const std::vector<MomentPreset> kMomentPresets = {
    {"feller-sub", 1.0, 1.0, 1.0, 0.5, 1.0, 100'000, 1e-3, 0.01, 0.02},
    {"feller-super", 1.0, -0.5, 0.5, 0.7, 1.0, 100'000, 1e-3, 0.01, 0.02},
    {"feller-crit", 1.0, 0.0, 0.5, 0.7, 1.0, 100'000, 1e-3, 0.01, 0.02},
};

const std::vector<YulePreset> kYulePresets = {
    {"yule-frac", 1.0, 0.6, 1.0, 100'000, 40, 0.01, 1e-6, 5000},
};

const std::vector<InequalityPreset> kInequalityPresets = {
    {"gw-inequality", {{0, 0.74}, {5, 0.26}}, 1, 1, 2.0, {0.4, 0.6, 0.8}, {0.5, 1.0, 2.0}, 100'000, 0.6, 1.0},
};

const std::vector<ScalingPreset> kScalingPresets = {
    {"scaling", 1.0, 0.5, 1.0, 1.0, {50, 200, 800}, 10'000, 0.6, 0.08, 0.05},
};

template <class Preset>
const Preset& find(const std::vector<Preset>& presets, std::string_view name, std::string_view kind) {
  for (const auto& p : presets)
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : presets) known += (known.empty() ? "" : ", ") + p.name;
  throw InputError("--preset: '" + std::string(name) + "' is not a " + std::string(kind) + " preset (known: " +
                   known + ")");
}

std::string tag(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

CheckRow agreement(std::string check, const mc::McEstimate& e, double target, double allowance) {
  return {std::move(check), e.mean, target, e.std_error, e.agrees_with(target, 3.0, allowance)};
}

}  // namespace

const MomentPreset& moment_preset(std::string_view name) { return find(kMomentPresets, name, "moments"); }
const YulePreset& yule_preset(std::string_view name) { return find(kYulePresets, name, "pmf"); }
const InequalityPreset& inequality_preset(std::string_view name) {
  return find(kInequalityPresets, name, "branching-inequality");
}
const ScalingPreset& scaling_preset(std::string_view name) { return find(kScalingPresets, name, "scaling"); }

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kMomentPresets) names.push_back(p.name);
  for (const auto& p : kYulePresets) names.push_back(p.name);
  for (const auto& p : kInequalityPresets) names.push_back(p.name);
  for (const auto& p : kScalingPresets) names.push_back(p.name);
  return names;
}

std::vector<CheckRow> verify_moments(const MomentPreset& p, std::uint64_t seed, std::size_t n_rep,
                                     Execution ex) {
  const std::size_t reps = n_rep ? n_rep : p.n_rep;
  const csbp::TcProcessSpec spec{csbp::FellerSpec{p.x0, p.b, p.c}, p.beta};
  csbp::ComposeOptions options;
  options.op_step = p.op_step;
  const auto draws = csbp::sample_time_changed_marginals(spec, p.t, reps, RngStream(seed, 1), options, ex);
  std::vector<double> squares(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) squares[i] = draws[i] * draws[i];
  const csbp::BranchingMechanism mech(p.b, p.c);
  return {
      agreement("mean", mc::estimate(draws), csbp::tc_mean(mech, p.x0, p.t, p.beta), p.mean_allowance),
      agreement("second_moment", mc::estimate(squares), csbp::tc_second_moment(mech, p.x0, p.t, p.beta),
                p.second_allowance),
  };
}

std::vector<CheckRow> verify_pmf(const YulePreset& p, std::uint64_t seed, std::size_t n_rep, Execution ex) {
  const std::size_t reps = n_rep ? n_rep : p.n_rep;
  const csbp::TcProcessSpec spec{csbp::YuleSpec{1, p.theta}, p.beta};
  const auto draws = csbp::sample_time_changed_marginals(spec, p.t, reps, RngStream(seed, 2), {}, ex);

  const auto cells = static_cast<std::size_t>(p.cells);
  std::vector<std::int64_t> counts(cells + 1, 0);
  for (double v : draws) ++counts[std::min(static_cast<std::size_t>(v) - 1, cells)];
  std::vector<double> probs(cells + 1, 0.0);
  double head = 0.0;
  for (std::size_t n = 1; n <= cells; ++n)
    head += probs[n - 1] =
        csbp::yule_fractional_pmf(static_cast<std::int64_t>(n), p.t, p.theta, p.beta, csbp::PmfRoute::automatic);
  probs[cells] = std::max(0.0, 1.0 - head);
  const auto gof = mc::chi_square_gof(counts, probs);
  const double critical = mc::chi_square_critical(gof.dof, p.level);

  double partial = head;
  std::int64_t n = p.cells;
  while (partial < 1.0 - p.tail && n < p.n_cap)
    partial += csbp::yule_fractional_pmf(++n, p.t, p.theta, p.beta, csbp::PmfRoute::automatic);

  std::vector<double> sizes(draws.begin(), draws.end());
  const double mean_target = special_fn::mittag_leffler(p.beta, p.theta * std::pow(p.t, p.beta));
  return {
      {"chi_square", gof.statistic, critical, 0.0, gof.statistic < critical},
      {"partial_sum_n" + std::to_string(n), partial, 1.0 - p.tail, 0.0, partial >= 1.0 - p.tail},
      agreement("mean", mc::estimate(sizes), mean_target, 0.0),
  };
}

std::vector<CheckRow> verify_inequality(const InequalityPreset& p, std::uint64_t seed, std::size_t n_rep,
                                        Execution ex) {
  const auto reps = static_cast<std::int64_t>(n_rep ? n_rep : p.n_rep);
  const gw::OffspringLaw law(p.offspring);
  std::vector<CheckRow> rows;
  std::uint64_t stream = 100;
  for (double beta : p.betas) {
    for (double lambda : p.lambdas) {
      const auto wait = random::WaitingTimeLaw::pareto(beta);
      const auto k = gw::branching_inequality_experiment(p.j, p.k, lambda, p.t, law, wait, reps,
                                                         RngStream(seed, stream++), ex);
      const std::string point = "beta" + tag(beta) + "_lambda" + tag(lambda);
      rows.push_back({"K_" + point, k.mean, 0.0, k.std_error, k.mean >= -3.0 * k.std_error});
      if (beta == p.focus_beta && lambda == p.focus_lambda)
        rows.push_back({"K_positive_" + point, k.mean, 0.0, k.std_error, k.mean > 3.0 * k.std_error});
    }
  }
  return rows;
}

std::vector<CheckRow> verify_scaling(const ScalingPreset& p, std::uint64_t seed, std::size_t n_rep,
                                     Execution ex) {
  const std::size_t reps = n_rep ? n_rep : p.n_rep;
  const auto family = mc::feller_limit_family(p.b, p.c);
  const double noise = std::sqrt(2.0 / static_cast<double>(reps));
  std::vector<CheckRow> rows;
  auto run = [&](double beta, const random::WaitingTimeLaw& wait, double final_bound, std::uint64_t stream) {
    const auto report =
        mc::scaling_limit_experiment(family, wait, beta, p.t, p.levels, reps, RngStream(seed, stream), p.x0, ex);
    const std::string prefix = "ks_beta" + tag(beta) + "_level";
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      const double d = report.ks_distances[i];
      if (i == 0) {
        rows.push_back({prefix + std::to_string(report.levels[i]), d,
                        std::numeric_limits<double>::quiet_NaN(), noise, true});
      } else {
        const double bound = report.ks_distances[i - 1] + 2.0 * noise;
        rows.push_back({prefix + std::to_string(report.levels[i]), d, bound, noise, d <= bound});
      }
    }
    const double last = report.ks_distances.back();
    rows.push_back({"ks_final_beta" + tag(beta), last, final_bound, noise, last < final_bound});
  };
  run(p.beta, random::WaitingTimeLaw::pareto_normalized(p.beta), p.final_bound, 200);
  run(1.0, random::WaitingTimeLaw::deterministic(), p.control_final_bound, 201);
  return rows;
}

}  // namespace fracbranch::cli
