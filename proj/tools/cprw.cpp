// cprw: command-line front end for the walk simulators and exact oracles.
//
//   cprw run --config exp.json [--seed N] [--set key=value]... [--out DIR] [--threads N]
//   cprw exact cp-law --p 0.5 --n 4
//   cprw exact cp-escape --p 0.5 --steps 12
//   cprw exact rwrs-law --n 6 [--walk JSON] [--scenery JSON]
//   cprw scaling --config exp.json [...same overrides as run]
//
// Exit codes: 0 success, 1 runtime failure, 2 config error, 3 resource cap.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cprw/config.hpp"
#include "cprw/cp_exact.hpp"
#include "cprw/error.hpp"
#include "cprw/harness.hpp"
#include "cprw/rwrs_exact.hpp"

namespace {

using nlohmann::json;

struct RunFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  std::optional<std::string> out_dir;
  int threads = 1;
  bool quiet = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--seed", flags.seed, "override master_seed");
  cmd->add_option("--set", flags.overrides, "override a config key: dotted.key=value");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--threads", flags.threads, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet", flags.quiet, "no progress counter on stderr");
}

cprw::Config resolve(const RunFlags& flags) {
  std::ifstream in(flags.config_path);
  if (!in) throw cprw::ConfigError("cannot read config file '" + flags.config_path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw cprw::ConfigError("config '" + flags.config_path + "' is not valid JSON: " + e.what());
  }
  for (const auto& o : flags.overrides) cprw::apply_override(doc, o);
  if (flags.seed) doc["master_seed"] = *flags.seed;
  if (flags.out_dir) doc["output"]["dir"] = *flags.out_dir;
  return cprw::parse_config(doc);
}

cprw::ExperimentResult execute(const cprw::Config& config, const RunFlags& flags) {
  cprw::RunOptions options;
  options.threads = flags.threads;
  if (!flags.quiet) {
    const std::int64_t every = std::max<std::int64_t>(1, config.spec.trials / 100);
    options.progress = [every](std::int64_t done, std::int64_t total) {
      if (done % every == 0 || done == total) {
        std::fprintf(stderr, "\rtrials %lld/%lld", static_cast<long long>(done),
                     static_cast<long long>(total));
        if (done == total) std::fputc('\n', stderr);
      }
    };
  }
  return cprw::run_experiment(config.spec, options);
}

std::filesystem::path output_file(const cprw::Config& config, const std::string& name) {
  const std::filesystem::path dir(config.output.dir);
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

int cmd_run(const RunFlags& flags) {
  const cprw::Config config = resolve(flags);
  const cprw::ExperimentResult result = execute(config, flags);
  std::ostringstream csv;
  cprw::write_csv(csv, result, config.spec.confidence);
  const auto csv_path = output_file(config, config.output.csv);
  write_text(csv_path, csv.str());
  const auto summary_path = output_file(config, config.output.summary);
  write_text(summary_path, cprw::summary_json(config, result).dump(2) + "\n");
  std::cout << csv_path.string() << "\n" << summary_path.string() << "\n";
  return 0;
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

int cmd_scaling(const RunFlags& flags) {
  const cprw::Config config = resolve(flags);
  const cprw::ExperimentSpec& spec = config.spec;
  std::optional<cprw::Statistic> statistic;
  std::vector<std::pair<double, double>> points;
  if (config.scaling) statistic = config.scaling->statistic;
  if (config.scaling && !config.scaling->points.empty()) {
    points = config.scaling->points;
  } else {
    if (!statistic) statistic = spec.outputs.front();
    if (std::find(spec.outputs.begin(), spec.outputs.end(), *statistic) == spec.outputs.end()) {
      throw cprw::ConfigError("scaling.statistic must be one of the requested outputs");
    }
    const cprw::ExperimentResult result = execute(config, flags);
    for (std::int64_t n : spec.sizes) {
      points.emplace_back(static_cast<double>(n), result.row(*statistic, n).stats.mean());
    }
  }
  cprw::ScalingFit fit;
  try {
    fit = cprw::scaling_fit(points);
  } catch (const cprw::InvalidArgument& e) {
    throw cprw::ConfigError(e.what());
  }
  json pts = json::array();
  for (const auto& [n, v] : points) pts.push_back({n, v});
  const json report{
      {"model", cprw::model_name(spec.model)},
      {"statistic", statistic ? json(cprw::to_string(*statistic)) : json(nullptr)},
      {"slope", fit.slope},
      {"intercept", fit.intercept},
      {"residual_norm", fit.residual_norm},
      {"slope_stderr", nullable(fit.slope_stderr)},
      {"confidence", spec.confidence},
      {"slope_ci_half", nullable(fit.slope_ci_half_width(spec.confidence))},
      {"expected_exponent",
       statistic ? nullable(cprw::expected_exponent(spec.model, *statistic)) : json(nullptr)},
      {"points", pts},
      {"master_seed", spec.master_seed},
  };
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (flags.out_dir) write_text(output_file(config, "scaling.json"), text);
  return 0;
}

std::string exact_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.15g", x);
  return buf;
}

cprw::LatticeLaw law_from_text(const std::string& text, const char* what) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error&) {
    doc = json{{"kind", text}};
  }
  json wrapper{{"model", {{"type", "rwrs"}, {what, doc}}}, {"sizes", {1}}};
  const cprw::Config c = cprw::parse_config(wrapper);
  const auto& m = std::get<cprw::RwrsModel>(c.spec.model);
  return std::string(what) == "walk" ? m.walk : m.scenery;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oriented-lattice walks and random walks in random scenery"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run a Monte Carlo experiment, write CSV and JSON");
  add_run_flags(run, run_flags);

  RunFlags scaling_flags;
  auto* scaling = app.add_subcommand("scaling", "fit log(estimate) against log(n)");
  add_run_flags(scaling, scaling_flags);

  auto* exact = app.add_subcommand("exact", "print exact laws by enumeration");
  exact->require_subcommand(1);
  double p = 0.5;
  int n = 0;
  int steps = 1;
  std::string walk = "simple_symmetric";
  std::string scenery = "rademacher";
  auto* cp_law = exact->add_subcommand("cp-law", "law of M_n");
  cp_law->add_option("--p", p, "horizontal probability");
  cp_law->add_option("--n", n, "number of steps")->required();
  auto* cp_escape = exact->add_subcommand("cp-escape", "P(no return to 0 in 1..L)");
  cp_escape->add_option("--p", p, "horizontal probability");
  cp_escape->add_option("--steps,-L", steps, "truncation horizon L")->required();
  auto* rwrs_law = exact->add_subcommand("rwrs-law", "law of Z_n");
  rwrs_law->add_option("--n", n, "number of steps")->required();
  rwrs_law->add_option("--walk", walk, "walk law: kind name or JSON object");
  rwrs_law->add_option("--scenery", scenery, "scenery law: kind name or JSON object");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags);
    if (scaling->parsed()) return cmd_scaling(scaling_flags);
    std::cout.precision(15);
    if (cp_law->parsed()) {
      std::cout << "x,y,probability\n";
      for (const auto& [site, prob] : cprw::exact_annealed_law(p, n)) {
        std::cout << site.x << ',' << site.y << ',' << exact_number(prob) << "\n";
      }
    } else if (cp_escape->parsed()) {
      std::cout << "steps,no_return_probability\n"
                << steps << ',' << exact_number(cprw::exact_no_return_probability(p, steps))
                << "\n";
    } else if (rwrs_law->parsed()) {
      const auto model = cprw::RwrsModel::from_laws(law_from_text(walk, "walk"),
                                                    law_from_text(scenery, "scenery"));
      std::cout << "z,probability\n";
      for (const auto& [z, prob] : cprw::exact_rwrs_law(model, n)) {
        std::cout << z << ',' << exact_number(prob) << "\n";
      }
    }
    return 0;
  } catch (const cprw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cprw::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const cprw::ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
