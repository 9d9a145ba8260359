#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cprw/harness.hpp"

namespace cprw {

struct OutputPaths {
  std::string dir = ".";
  std::string csv = "results.csv";
  std::string summary = "summary.json";
  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

/// Precomputed (n, estimate) pairs for `cprw scaling`; when absent the
/// experiment is run and the first output statistic is fitted.
struct ScalingInput {
  std::optional<Statistic> statistic;
  std::vector<std::pair<double, double>> points;
  friend bool operator==(const ScalingInput&, const ScalingInput&) = default;
};

/// JSON experiment document. Schema (defaults in brackets):
///
///   model        {"type": "cp", "p": [0.5]}
///              | {"type": "rwrs", "walk": LAW, "scenery": LAW,
///                 "alpha": [from walk], "beta": [from scenery]}
///              | {"type": "limit", "alpha_law": STABLE, "beta_law": STABLE,
///                 "space_mesh": [0 = default]}
///   sizes        list of positive integers, strictly increasing
///   trials       [1000]
///   horizon      [0]
///   master_seed  [1]
///   outputs      list of statistic names [model default]
///   confidence   [0.99]
///   max_work     [4e9]
///   output       {"dir": ["."], "csv": ["results.csv"], "summary": ["summary.json"]}
///   scaling      {"statistic": name, "points": [[n, v], ...]}  (optional)
///
///   LAW    {"kind": "rademacher" | "simple_symmetric"}
///        | {"kind": "ternary", "p0": x} | {"kind": "lazy_vertical", "p": x}
///        | {"kind": "pareto_tail", "index": a, "tail_constant": [0 = largest]}
///   STABLE {"index": a, "a1": [1], "a2": [0]}
///
/// Unknown keys are rejected with ConfigError.
struct Config {
  ExperimentSpec spec;
  OutputPaths output;
  std::optional<ScalingInput> scaling;
  friend bool operator==(const Config&, const Config&) = default;
};

/// Throws ConfigError on schema or validity problems and ResourceCapError
/// when the requested work exceeds max_work.
Config parse_config(const nlohmann::json& doc);
Config load_config(const std::string& path);

/// Fully resolved document; parse_config(to_json(c)) == c.
nlohmann::json to_json(const Config& config);

/// Sets a dotted key ("model.p", "output.dir") in a raw document. The value
/// is read as JSON when it parses, else taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Writes "n,statistic,mean,ci_half,trials" rows; ci_half is empty when
/// undefined. Doubles use the shortest round-trip representation.
void write_csv(std::ostream& out, const ExperimentResult& result, double confidence);

nlohmann::json summary_json(const Config& config, const ExperimentResult& result);

/// Field quoted per RFC 4180 when it contains a comma, quote or line break.
std::string csv_field(const std::string& field);
std::string format_double(double x);

}  // namespace cprw
