// SPDX-FileCopyrightText: 2026 fracbranch authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracbranch/csbp.hpp"
#include "fracbranch/errors.hpp"
#include "fracbranch/gw.hpp"
#include "fracbranch/random.hpp"
#include "fracbranch/special_fn.hpp"
#include "verify.hpp"

namespace fracbranch::cli {

namespace {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format(double v) {
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}
std::string format(std::int64_t v) { return std::to_string(v); }
std::string format(std::size_t v) { return std::to_string(v); }
std::string format(bool v) { return v ? "true" : "false"; }
std::string format(const std::string& v) { return v; }

class Csv {
 public:
  explicit Csv(std::string header) : text_(std::move(header) + "\n") {}

  template <class... Cells>
  void row(const Cells&... cells) {
    std::string line;
    ((line += (line.empty() ? "" : ",") + format(cells)), ...);
    text_ += line + "\n";
  }

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

// Opened before any sampling so an unwritable path fails fast.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw OutputError("cannot open output file '" + path + "'");
    out_ = file_.get();
  }

  void write(const std::string& text) {
    *out_ << text;
    out_->flush();
    if (!*out_) throw OutputError("failed writing output");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

const CLI::Validator kBeta(
    [](std::string& in) -> std::string {
      double v = 0.0;
      if (!CLI::detail::lexical_cast(in, v) || !(v > 0.0 && v <= 1.0)) return "must lie in (0, 1], got " + in;
      return {};
    },
    "in (0,1]");

const CLI::Validator kFinite(
    [](std::string& in) -> std::string {
      double v = 0.0;
      if (!CLI::detail::lexical_cast(in, v) || !std::isfinite(v)) return "must be a finite number, got " + in;
      return {};
    },
    "finite");

std::map<std::int64_t, double> parse_offspring(const std::string& text) {
  std::map<std::int64_t, double> pmf;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("--offspring: expected k:p pairs, got '" + item + "'");
    try {
      pmf[std::stoll(item.substr(0, colon))] += std::stod(item.substr(colon + 1));
    } catch (const std::logic_error&) {
      throw InputError("--offspring: malformed pair '" + item + "'");
    }
  }
  return pmf;
}

// --config FILE: a JSON object whose keys are flag names without dashes.
// Flags given on the command line win over the file.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file name");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream file(path);
  if (!file) throw InputError("--config: cannot read '" + path + "'");
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("--config: " + std::string(e.what()));
  }
  if (!config.is_object()) throw InputError("--config: top level must be an object");
  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  auto scalar = [&](const std::string& key, const nlohmann::json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number()) return format(v.get<double>());
    throw InputError("--config: key '" + key + "' must hold a number, string or list");
  };
  for (const auto& [key, value] : config.items()) {
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      args.push_back(flag);
      for (const auto& v : value) args.push_back(scalar(key, v));
    } else {
      args.push_back(flag);
      args.push_back(scalar(key, value));
    }
  }
  return args;
}

struct Common {
  std::uint64_t seed = 42;
  std::string output = "-";
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  cmd->add_option("--output,-o", common.output, "Output file ('-' for stdout)")->capture_default_str();
}

std::vector<double> uniform_grid(double t_max, std::int64_t steps) {
  std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
  for (std::int64_t i = 0; i <= steps; ++i) grid[static_cast<std::size_t>(i)] = t_max * static_cast<double>(i) / static_cast<double>(steps);
  return grid;
}

struct SimulateArgs {
  std::string process = "feller";
  double beta = 1.0, b = 1.0, c = 1.0, x0 = 1.0, theta = 1.0, t_max = 1.0, op_step = 1e-3;
  std::int64_t n0 = 1, steps = 100, n_rep = 1, j = 1;
  std::string offspring = "0:0.25,1:0.5,2:0.25";
  std::string wait = "pareto:0.6";
};

std::string simulate(const SimulateArgs& a, std::uint64_t seed) {
  const auto grid = uniform_grid(a.t_max, a.steps);
  Csv csv("replicate,t,value");
  const RngStream base(seed, 3);
  std::vector<PathGrid> paths(static_cast<std::size_t>(a.n_rep));
  if (a.process == "gw") {
    const gw::OffspringLaw law(parse_offspring(a.offspring));
    const auto wait = random::WaitingTimeLaw::parse(a.wait);
    for_each_index(paths.size(), Execution::parallel, [&](std::size_t i) {
      RngStream rng = base.substream(i);
      paths[i] = gw::simulate_time_changed_gw(a.j, law, wait, grid, rng);
    });
  } else {
    csbp::TcProcessSpec spec{csbp::FellerSpec{a.x0, a.b, a.c}, a.beta};
    if (a.process == "yule") spec.inner = csbp::YuleSpec{a.n0, a.theta};
    const auto options = csbp::resolve_compose_options(spec, a.t_max, {a.op_step, 0.0}, base);
    for_each_index(paths.size(), Execution::parallel, [&](std::size_t i) {
      RngStream rng = base.substream(i);
      paths[i] = csbp::compose_time_change(spec, grid, rng, options);
    });
  }
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (std::size_t k = 0; k < grid.size(); ++k) csv.row(i, grid[k], paths[i].values[k]);
  return csv.text();
}

struct MomentsArgs {
  double beta = 1.0, b = 1.0, c = 1.0, x = 1.0, t_max = 4.0;
  std::int64_t steps = 100;
};

std::string moments(const MomentsArgs& a) {
  const csbp::BranchingMechanism mech(a.b, a.c);
  Csv csv("t,mean,second_moment,variance");
  for (double t : uniform_grid(a.t_max, a.steps)) {
    const double m1 = csbp::tc_mean(mech, a.x, t, a.beta);
    const double m2 = csbp::tc_second_moment(mech, a.x, t, a.beta);
    csv.row(t, m1, m2, m2 - m1 * m1);
  }
  return csv.text();
}

struct PmfArgs {
  double theta = 1.0, beta = 1.0, t = 1.0;
  std::int64_t n_max = 10;
  std::string route = "automatic";
};

std::string pmf(const PmfArgs& a) {
  static const std::map<std::string, csbp::PmfRoute> routes = {{"alternating", csbp::PmfRoute::alternating},
                                                               {"mixture", csbp::PmfRoute::mixture},
                                                               {"automatic", csbp::PmfRoute::automatic}};
  Csv csv("n,probability");
  for (std::int64_t n = 1; n <= a.n_max; ++n)
    csv.row(n, csbp::yule_fractional_pmf(n, a.t, a.theta, a.beta, routes.at(a.route)));
  return csv.text();
}

std::string ml_eval(double beta, const std::vector<double>& xs) {
  Csv csv("beta,x,value");
  for (double x : xs) csv.row(beta, x, special_fn::mittag_leffler(beta, x));
  return csv.text();
}

std::string check_table(const std::vector<CheckRow>& rows, bool& all_pass) {
  Csv csv("check,estimate,target,std_error,pass");
  all_pass = true;
  for (const auto& r : rows) {
    csv.row(r.check, r.estimate, r.target, r.std_error, r.pass);
    all_pass = all_pass && r.pass;
  }
  return csv.text();
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-fractional branching processes: simulation, moments and verification"};
  app.name("fracbranch");
  app.require_subcommand(1);

  Common common;
  std::function<std::string()> action;
  bool checks_failed = false;

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Sample paths of X(E(t)) or a time-changed GWP");
  simulate_cmd->add_option("--process", sim.process, "feller, yule or gw")
      ->check(CLI::IsMember({"feller", "yule", "gw"}))->capture_default_str();
  simulate_cmd->add_option("--beta", sim.beta, "Time-change index")->check(kBeta)->capture_default_str();
  simulate_cmd->add_option("--b", sim.b, "Feller drift parameter")->check(kFinite)->capture_default_str();
  simulate_cmd->add_option("--c", sim.c, "Feller diffusion parameter")->check(CLI::NonNegativeNumber)->capture_default_str();
  simulate_cmd->add_option("--x0", sim.x0, "Feller initial mass")->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--theta", sim.theta, "Yule birth rate")->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--n0", sim.n0, "Yule initial size")->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--t-max", sim.t_max, "Final time")->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--steps", sim.steps, "Grid intervals on [0, t-max]")->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--n-rep", sim.n_rep, "Number of paths")->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--op-step", sim.op_step, "Operational lattice / Euler step")->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--offspring", sim.offspring, "GW offspring pmf as k:p,k:p,...")->capture_default_str();
  simulate_cmd->add_option("--wait", sim.wait, "GW waiting-time law (exp:R, pareto:B[:S], pareto-norm:B, stable:B[:S], unit[:P])")->capture_default_str();
  simulate_cmd->add_option("--j", sim.j, "GW initial size")->check(CLI::NonNegativeNumber)->capture_default_str();
  add_common(simulate_cmd, common);
  simulate_cmd->callback([&] { action = [&] { return simulate(sim, common.seed); }; });

  MomentsArgs mom;
  auto* moments_cmd = app.add_subcommand("moments", "First and second moments of X(E(t)) on a time grid");
  moments_cmd->add_option("--beta", mom.beta, "Time-change index")->check(kBeta)->capture_default_str();
  moments_cmd->add_option("--b", mom.b, "Drift parameter")->check(kFinite)->capture_default_str();
  moments_cmd->add_option("--c", mom.c, "Diffusion parameter")->check(CLI::NonNegativeNumber)->capture_default_str();
  moments_cmd->add_option("--x", mom.x, "Initial mass")->check(CLI::PositiveNumber)->capture_default_str();
  moments_cmd->add_option("--t-max", mom.t_max, "Final time")->check(CLI::PositiveNumber)->capture_default_str();
  moments_cmd->add_option("--steps", mom.steps, "Grid intervals")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(moments_cmd, common);
  moments_cmd->callback([&] { action = [&] { return moments(mom); }; });

  PmfArgs pm;
  auto* pmf_cmd = app.add_subcommand("pmf", "Fractional Yule probability mass function");
  pmf_cmd->add_option("--theta", pm.theta, "Birth rate")->check(CLI::PositiveNumber)->capture_default_str();
  pmf_cmd->add_option("--beta", pm.beta, "Time-change index")->check(kBeta)->capture_default_str();
  pmf_cmd->add_option("--t", pm.t, "Time")->check(CLI::NonNegativeNumber)->capture_default_str();
  pmf_cmd->add_option("--n-max", pm.n_max, "Largest population size")->check(CLI::PositiveNumber)->capture_default_str();
  pmf_cmd->add_option("--route", pm.route, "alternating, mixture or automatic")
      ->check(CLI::IsMember({"alternating", "mixture", "automatic"}))->capture_default_str();
  add_common(pmf_cmd, common);
  pmf_cmd->callback([&] { action = [&] { return pmf(pm); }; });

  double ml_beta = 0.5;
  std::vector<double> ml_x;
  auto* ml_cmd = app.add_subcommand("ml-eval", "Evaluate the Mittag-Leffler function E_beta(x)");
  ml_cmd->add_option("--beta", ml_beta, "Order")->check(kBeta)->capture_default_str();
  ml_cmd->add_option("--x", ml_x, "Arguments")->required()->check(kFinite);
  add_common(ml_cmd, common);
  ml_cmd->callback([&] { action = [&] { return ml_eval(ml_beta, ml_x); }; });

  auto* verify_cmd = app.add_subcommand("verify", "Run a preset verification bundle");
  verify_cmd->require_subcommand(1);
  std::size_t verify_reps = 0;
  std::map<std::string, std::string> presets;
  auto add_verify = [&](const std::string& name, const std::string& help, const std::string& default_preset,
                        std::function<std::vector<CheckRow>()> body) {
    auto* cmd = verify_cmd->add_subcommand(name, help);
    presets[name] = default_preset;
    cmd->add_option("--preset", presets[name], "Preset name")->capture_default_str();
    cmd->add_option("--n-rep", verify_reps, "Override the preset's replicate count")->check(CLI::PositiveNumber);
    add_common(cmd, common);
    cmd->callback([&, body] {
      action = [&, body] {
        bool all_pass = true;
        std::string text = check_table(body(), all_pass);
        checks_failed = !all_pass;
        return text;
      };
    });
  };
  add_verify("moments", "Monte Carlo moments of X(E(t)) against closed forms", "feller-sub",
             [&] { return verify_moments(moment_preset(presets["moments"]), common.seed, verify_reps); });
  add_verify("pmf", "Time-changed Yule marginals against the fractional pmf", "yule-frac",
             [&] { return verify_pmf(yule_preset(presets["pmf"]), common.seed, verify_reps); });
  add_verify("branching-inequality", "Sign of the branching-inequality gap", "gw-inequality",
             [&] { return verify_inequality(inequality_preset(presets["branching-inequality"]), common.seed, verify_reps); });
  add_verify("scaling", "KS distances of rescaled GWPs to the time-changed Feller limit", "scaling",
             [&] { return verify_scaling(scaling_preset(presets["scaling"]), common.seed, verify_reps); });

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    Sink sink(common.output, out);
    const std::string text = action();
    sink.write(text);
    if (checks_failed) {
      err << "verification failed\n";
      return kCheckFailed;
    }
    return kOk;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << "\n";
    return kUnwritableOutput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const CensoringError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const AccuracyError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace fracbranch::cli
