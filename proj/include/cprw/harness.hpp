#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cprw/rwrs.hpp"
#include "cprw/stable.hpp"
#include "cprw/stats.hpp"

namespace cprw {

/// Per-trial observables. Normalized variants divide by the model's size:
/// n for ratios, n^(3/4) for the oriented-lattice first coordinate, a_n for
/// the RWRS; limit-model statistics are taken directly on Delta.
enum class Statistic {
  range,             // distinct sites (cp) or levels (rwrs) among times 0..n
  range_ratio,       // range / n
  range_norm,        // rwrs: range / a_n
  first_range,       // cp: distinct first coordinates
  first_range_norm,  // cp: first_range / n^(3/4)
  spread,            // cp: (max - min) M^(1) / n^(3/4); rwrs: (max - min) Z / a_n; limit: sup - inf
  sup,               // rwrs: max Z / a_n; limit: sup Delta
  inf,               // limit: inf Delta
  vn,                // rwrs: sum_y N_n(y)^2
  vn_beta,           // rwrs: sum_y N_n(y)^beta
  z_vn,              // rwrs: sum_x (#{1 <= k <= n : Z_k = x})^2
  escape,            // cp/rwrs: 1 if the process avoids 0 at times 1..n
};

std::string to_string(Statistic s);
Statistic statistic_from_string(const std::string& name);

struct CpModel {
  double p = 0.5;
  friend bool operator==(const CpModel&, const CpModel&) = default;
};

struct LimitModel {
  StableLaw alpha_law{2.0, 0.5, 0.0};
  StableLaw beta_law{2.0, 0.5, 0.0};
  double space_mesh = 0.0;  // 0 selects default_space_mesh(alpha_law)
  friend bool operator==(const LimitModel&, const LimitModel&) = default;
};

using ModelSpec = std::variant<CpModel, RwrsModel, LimitModel>;

std::string model_name(const ModelSpec& model);

struct ExperimentSpec {
  ModelSpec model = CpModel{};
  std::vector<std::int64_t> sizes;  // path lengths; time meshes for the limit model
  std::int64_t trials = 1000;
  std::int64_t horizon = 0;  // > 0: escape is evaluated at this horizon only
  std::uint64_t master_seed = 1;
  std::vector<Statistic> outputs;
  double confidence = 0.99;
  double max_work = 4e9;  // cap on trials x simulated steps

  /// Throws ConfigError for inconsistent specs and ResourceCapError when
  /// the work estimate exceeds max_work.
  void validate() const;
  double work() const;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Statistics a model supports, in canonical order.
std::vector<Statistic> supported_statistics(const ModelSpec& model);
std::vector<Statistic> default_statistics(const ModelSpec& model);

struct RunOptions {
  int threads = 1;
  bool keep_samples = false;
  /// Called after each finished trial with (done, total).
  std::function<void(std::int64_t, std::int64_t)> progress;
};

struct ResultRow {
  std::int64_t n = 0;
  Statistic statistic = Statistic::range;
  TrialStats stats;
  std::vector<double> samples;  // per trial, in trial order, when requested
};

struct ExperimentResult {
  std::vector<ResultRow> rows;

  /// Throws std::out_of_range when absent.
  const ResultRow& row(Statistic s, std::int64_t n) const;
};

/// Trial i uses stream id i of master_seed (and seeds derived from it for
/// environments and sceneries). Each trial simulates one path up to the
/// largest size and records every statistic at every size along the way.
/// Results depend only on the spec, never on the thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Monte Carlo estimate of P(no return to 0 at times 1..horizon).
TrialStats estimate_escape(const ModelSpec& model, std::int64_t horizon, std::int64_t trials,
                           std::uint64_t master_seed, int threads = 1);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_norm = 0.0;
  /// Residual-based standard error of the slope; needs >= 3 points.
  std::optional<double> slope_stderr;
  std::size_t points = 0;

  /// Two-sided Student-t interval half-width for the slope.
  std::optional<double> slope_ci_half_width(double confidence) const;
};

/// Least squares of log(estimate) on log(n). Needs >= 3 points with
/// positive coordinates; throws InvalidArgument otherwise.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points);

struct ConvergenceReport {
  struct Entry {
    std::int64_t n = 0;
    double mean = 0.0;
    double dispersion = 0.0;  // sample variance across trials
    std::optional<double> ci_half_width;
  };
  std::vector<Entry> entries;
  std::vector<double> drift;  // mean[i+1] - mean[i]
  bool dispersion_shrinking = true;
};

/// Per-size dispersion and drift of a ratio such as range / n; flags any
/// size at which the dispersion fails to shrink. Needs >= 2 sizes.
ConvergenceReport convergence_diagnostic(
    const std::vector<std::pair<std::int64_t, TrialStats>>& series, double confidence = 0.99);

/// Growth exponent of E[statistic] in n predicted for the model, when one is known.
std::optional<double> expected_exponent(const ModelSpec& model, Statistic s);

}  // namespace cprw
