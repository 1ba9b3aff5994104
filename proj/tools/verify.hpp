// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

// Named verification bundles and the checks behind `verify`.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fracbranch/parallel.hpp"

namespace fracbranch::cli {

struct CheckRow {
  std::string check;
  double estimate = 0.0;
  double target = 0.0;
  double std_error = 0.0;
  bool pass = false;
};

/// X(E(t)) for a Feller branching diffusion started at x0.
struct MomentPreset {
  std::string name;
  double x0;
  double b;
  double c;
  double beta;
  double t;
  std::size_t n_rep;
  double op_step;
  double mean_allowance;    // Euler bias allowance on the mean
  double second_allowance;  // and on the second moment
};

struct YulePreset {
  std::string name;
  double theta;
  double beta;
  double t;
  std::size_t n_rep;
  std::int64_t cells;  // n = 1..cells plus one tail cell
  double level;
  double tail;  // partial sum must reach 1 - tail
  std::int64_t n_cap;
};

struct InequalityPreset {
  std::string name;
  std::map<std::int64_t, double> offspring;
  std::int64_t j;
  std::int64_t k;
  double t;
  std::vector<double> betas;    // Pareto(beta) waits with scale 1
  std::vector<double> lambdas;
  std::size_t n_rep;
  double focus_beta;
  double focus_lambda;
};

struct ScalingPreset {
  std::string name;
  double b;
  double c;
  double x0;
  double t;
  std::vector<std::int64_t> levels;
  std::size_t n_rep;
  double beta;  // fractional run uses pareto-norm:beta waits
  double final_bound;
  double control_final_bound;  // beta = 1 with unit waits
};

const MomentPreset& moment_preset(std::string_view name);
const YulePreset& yule_preset(std::string_view name);
const InequalityPreset& inequality_preset(std::string_view name);
const ScalingPreset& scaling_preset(std::string_view name);

/// Every preset name, for listing and reproducibility checks.
std::vector<std::string> preset_names();

// n_rep == 0 keeps the preset's replicate count.
std::vector<CheckRow> verify_moments(const MomentPreset& p, std::uint64_t seed, std::size_t n_rep = 0,
                                     Execution ex = Execution::parallel);
std::vector<CheckRow> verify_pmf(const YulePreset& p, std::uint64_t seed, std::size_t n_rep = 0,
                                 Execution ex = Execution::parallel);
std::vector<CheckRow> verify_inequality(const InequalityPreset& p, std::uint64_t seed,
                                        std::size_t n_rep = 0, Execution ex = Execution::parallel);
std::vector<CheckRow> verify_scaling(const ScalingPreset& p, std::uint64_t seed, std::size_t n_rep = 0,
                                     Execution ex = Execution::parallel);

}  // namespace fracbranch::cli
