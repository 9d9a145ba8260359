#include "cprw/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>
#include <boost/math/distributions/students_t.hpp>
#include <Eigen/Dense>

#include "cprw/cp_walk.hpp"
#include "cprw/error.hpp"
#include "cprw/limit_process.hpp"
#include "cprw/site_table.hpp"

namespace cprw {

namespace {

constexpr std::uint64_t kLimitPurpose = 0x6c696d;  // "lim"

constexpr std::pair<Statistic, const char*> kStatisticNames[] = {
    {Statistic::range, "range"},
    {Statistic::range_ratio, "range_ratio"},
    {Statistic::range_norm, "range_norm"},
    {Statistic::first_range, "first_range"},
    {Statistic::first_range_norm, "first_range_norm"},
    {Statistic::spread, "spread"},
    {Statistic::sup, "sup"},
    {Statistic::inf, "inf"},
    {Statistic::vn, "vn"},
    {Statistic::vn_beta, "vn_beta"},
    {Statistic::z_vn, "z_vn"},
    {Statistic::escape, "escape"},
};

struct Slot {
  std::int64_t n;
  Statistic statistic;
};

// Rows in output order: sizes ascending, statistics in request order; a
// fixed escape horizon contributes one trailing row.
std::vector<Slot> layout(const ExperimentSpec& spec) {
  std::vector<Slot> slots;
  for (std::int64_t n : spec.sizes) {
    for (Statistic s : spec.outputs) {
      if (s == Statistic::escape && spec.horizon > 0) continue;
      slots.push_back({n, s});
    }
  }
  if (spec.horizon > 0 &&
      std::find(spec.outputs.begin(), spec.outputs.end(), Statistic::escape) !=
          spec.outputs.end()) {
    slots.push_back({spec.horizon, Statistic::escape});
  }
  return slots;
}

bool wants(const std::vector<Slot>& slots, Statistic s) {
  return std::any_of(slots.begin(), slots.end(), [s](const Slot& x) { return x.statistic == s; });
}

// Checkpoints: distinct n in ascending order with the slot indices due there.
struct Checkpoint {
  std::int64_t n;
  std::vector<std::size_t> slots;
};

std::vector<Checkpoint> checkpoints(const std::vector<Slot>& slots) {
  std::vector<Checkpoint> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Checkpoint& c) { return c.n == slots[i].n; });
    if (it == out.end()) {
      out.push_back({slots[i].n, {i}});
    } else {
      it->slots.push_back(i);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Checkpoint& a, const Checkpoint& b) { return a.n < b.n; });
  return out;
}

class CpTrialRunner {
 public:
  CpTrialRunner(const CpModel& model, const ExperimentSpec& spec, const std::vector<Slot>& slots)
      : model_(model), spec_(spec), slots_(slots), checkpoints_(checkpoints(slots)),
        need_range_(wants(slots, Statistic::range) || wants(slots, Statistic::range_ratio)) {}

  void run(std::uint64_t trial, double* out) {
    const Environment env(annealed_environment_seed(spec_.master_seed, trial));
    RngStream rng = derive_stream(spec_.master_seed, trial);
    CpWalker walker(model_.p, env, rng);
    visited_.clear();
    if (need_range_) visited_.insert(pack_site({0, 0}));
    std::int64_t xmin = 0;
    std::int64_t xmax = 0;
    bool returned = false;
    std::int64_t step = 0;
    for (const Checkpoint& cp : checkpoints_) {
      for (; step < cp.n; ++step) {
        walker.advance();
        const Site pos = walker.position();
        if (need_range_) visited_.insert(pack_site(pos));
        xmin = std::min(xmin, pos.x);
        xmax = std::max(xmax, pos.x);
        if (pos.x == 0 && pos.y == 0) returned = true;
      }
      const double n = static_cast<double>(cp.n);
      for (std::size_t idx : cp.slots) {
        const auto range = static_cast<double>(visited_.size());
        const auto columns = static_cast<double>(xmax - xmin + 1);
        double v = 0.0;
        switch (slots_[idx].statistic) {
          case Statistic::range: v = range; break;
          case Statistic::range_ratio: v = range / n; break;
          case Statistic::first_range: v = columns; break;
          case Statistic::first_range_norm: v = columns / std::pow(n, 0.75); break;
          case Statistic::spread: v = (columns - 1.0) / std::pow(n, 0.75); break;
          case Statistic::escape: v = returned ? 0.0 : 1.0; break;
          default: throw std::logic_error("statistic not available for the cp model");
        }
        out[idx] = v;
      }
    }
  }

 private:
  const CpModel& model_;
  const ExperimentSpec& spec_;
  const std::vector<Slot>& slots_;
  std::vector<Checkpoint> checkpoints_;
  bool need_range_;
  absl::flat_hash_set<std::uint64_t> visited_;
};

class RwrsTrialRunner {
 public:
  RwrsTrialRunner(const RwrsModel& model, const ExperimentSpec& spec,
                  const std::vector<Slot>& slots)
      : model_(model), spec_(spec), slots_(slots), checkpoints_(checkpoints(slots)),
        need_range_(wants(slots, Statistic::range) || wants(slots, Statistic::range_ratio) ||
                    wants(slots, Statistic::range_norm)),
        need_local_time_(wants(slots, Statistic::vn) || wants(slots, Statistic::vn_beta)),
        need_levels_(wants(slots, Statistic::z_vn)) {}

  void run(std::uint64_t trial, double* out) {
    const Scenery scenery(model_.scenery, scenery_seed(spec_.master_seed, trial));
    RngStream rng = derive_stream(spec_.master_seed, trial);
    RwrsWalker walker(model_, scenery, rng);
    levels_seen_.clear();
    level_counts_.clear();
    local_time_.clear();
    if (need_range_) levels_seen_.insert(0);
    std::int64_t zmin = 0;
    std::int64_t zmax = 0;
    std::int64_t self_intersections = 0;
    std::int64_t level_intersections = 0;
    bool returned = false;
    std::int64_t step = 0;
    for (const Checkpoint& cp : checkpoints_) {
      for (; step < cp.n; ++step) {
        walker.advance();
        const std::int64_t z = walker.z();
        if (need_range_) levels_seen_.insert(z);
        if (need_local_time_) {
          auto& count = local_time_.get(walker.position(), [](std::int64_t) { return 0; });
          self_intersections += 2 * count + 1;
          ++count;
        }
        if (need_levels_) {
          auto& count = level_counts_[z];
          level_intersections += 2 * count + 1;
          ++count;
        }
        zmin = std::min(zmin, z);
        zmax = std::max(zmax, z);
        if (z == 0) returned = true;
      }
      const double n = static_cast<double>(cp.n);
      const double a_n = normalizer_a(model_.alpha, model_.beta, std::max(n, 2.0));
      for (std::size_t idx : cp.slots) {
        const auto range = static_cast<double>(levels_seen_.size());
        double v = 0.0;
        switch (slots_[idx].statistic) {
          case Statistic::range: v = range; break;
          case Statistic::range_ratio: v = range / n; break;
          case Statistic::range_norm: v = range / a_n; break;
          case Statistic::spread: v = static_cast<double>(zmax - zmin) / a_n; break;
          case Statistic::sup: v = static_cast<double>(zmax) / a_n; break;
          case Statistic::vn: v = static_cast<double>(self_intersections); break;
          case Statistic::vn_beta: v = current_v_beta(); break;
          case Statistic::z_vn: v = static_cast<double>(level_intersections); break;
          case Statistic::escape: v = returned ? 0.0 : 1.0; break;
          default: throw std::logic_error("statistic not available for the rwrs model");
        }
        out[idx] = v;
      }
    }
  }

 private:
  double current_v_beta() const {
    ExactSum total;
    local_time_.for_each([&](std::int64_t, std::int64_t count) {
      if (count > 0) total.add(std::pow(static_cast<double>(count), model_.beta));
    });
    return total.value();
  }

  const RwrsModel& model_;
  const ExperimentSpec& spec_;
  const std::vector<Slot>& slots_;
  std::vector<Checkpoint> checkpoints_;
  bool need_range_;
  bool need_local_time_;
  bool need_levels_;
  absl::flat_hash_set<std::int64_t> levels_seen_;
  absl::flat_hash_map<std::int64_t, std::int64_t> level_counts_;
  SiteTable<std::int64_t> local_time_;
};

class LimitTrialRunner {
 public:
  LimitTrialRunner(const LimitModel& model, const ExperimentSpec& spec,
                   const std::vector<Slot>& slots)
      : model_(model), spec_(spec), slots_(slots),
        space_mesh_(model.space_mesh > 0.0 ? model.space_mesh
                                           : default_space_mesh(model.alpha_law)) {}

  void run(std::uint64_t trial, double* out) {
    for (std::int64_t m : spec_.sizes) {
      RngStream rng =
          derive_stream(child_seed(spec_.master_seed, kLimitPurpose, static_cast<std::uint64_t>(m)),
                        trial);
      const Eigen::VectorXd path =
          sample_delta_path(model_.alpha_law, model_.beta_law, m, space_mesh_, rng);
      const PathFunctionals f = functionals(path);
      for (std::size_t idx = 0; idx < slots_.size(); ++idx) {
        if (slots_[idx].n != m) continue;
        switch (slots_[idx].statistic) {
          case Statistic::spread: out[idx] = f.spread; break;
          case Statistic::sup: out[idx] = f.sup; break;
          case Statistic::inf: out[idx] = f.inf; break;
          default: throw std::logic_error("statistic not available for the limit model");
        }
      }
    }
  }

 private:
  const LimitModel& model_;
  const ExperimentSpec& spec_;
  const std::vector<Slot>& slots_;
  double space_mesh_;
};

template <class Runner, class Model>
void run_trials(const Model& model, const ExperimentSpec& spec, const std::vector<Slot>& slots,
                const RunOptions& options, std::vector<double>& values) {
  const auto trials = spec.trials;
  const std::size_t width = slots.size();
  std::atomic<std::int64_t> next{0};
  std::atomic<std::int64_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      Runner runner(model, spec, slots);
      for (std::int64_t i = next++; i < trials; i = next++) {
        runner.run(static_cast<std::uint64_t>(i), values.data() + static_cast<std::size_t>(i) * width);
        const std::int64_t finished = ++done;
        if (options.progress) {
          std::lock_guard lock(progress_mutex);
          options.progress(finished, trials);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = trials;
    }
  };

  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::string to_string(Statistic s) {
  for (const auto& [stat, name] : kStatisticNames) {
    if (stat == s) return name;
  }
  return "unknown";
}

Statistic statistic_from_string(const std::string& name) {
  for (const auto& [stat, n] : kStatisticNames) {
    if (name == n) return stat;
  }
  throw ConfigError("unknown statistic '" + name + "'");
}

std::string model_name(const ModelSpec& model) {
  switch (model.index()) {
    case 0: return "cp";
    case 1: return "rwrs";
    default: return "limit";
  }
}

std::vector<Statistic> supported_statistics(const ModelSpec& model) {
  using S = Statistic;
  switch (model.index()) {
    case 0:
      return {S::range, S::range_ratio, S::first_range, S::first_range_norm, S::spread, S::escape};
    case 1:
      return {S::range, S::range_ratio, S::range_norm, S::spread, S::sup,
              S::vn,    S::vn_beta,     S::z_vn,       S::escape};
    default:
      return {S::spread, S::sup, S::inf};
  }
}

std::vector<Statistic> default_statistics(const ModelSpec& model) {
  switch (model.index()) {
    case 0: return {Statistic::range_ratio};
    case 1: return {Statistic::range};
    default: return {Statistic::spread};
  }
}

double ExperimentSpec::work() const {
  const double t = static_cast<double>(trials);
  if (std::holds_alternative<LimitModel>(model)) {
    double total = 0.0;
    for (auto m : sizes) total += static_cast<double>(m);
    return t * total;
  }
  std::int64_t longest = horizon;
  for (auto n : sizes) longest = std::max(longest, n);
  return t * static_cast<double>(longest);
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (sizes.empty()) throw ConfigError("sizes must not be empty");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw ConfigError("sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw ConfigError("sizes must be strictly increasing");
  }
  if (horizon < 0) throw ConfigError("horizon must be >= 0");
  if (outputs.empty()) throw ConfigError("outputs must not be empty");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
  const auto supported = supported_statistics(model);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (std::find(supported.begin(), supported.end(), outputs[i]) == supported.end()) {
      throw ConfigError("statistic '" + to_string(outputs[i]) + "' is not available for the " +
                        model_name(model) + " model");
    }
    if (std::find(outputs.begin(), outputs.begin() + static_cast<std::ptrdiff_t>(i),
                  outputs[i]) != outputs.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw ConfigError("duplicate statistic '" + to_string(outputs[i]) + "'");
    }
  }
  try {
    std::visit(
        [](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, CpModel>) {
            validate_horizontal_probability(m.p);
          } else if constexpr (std::is_same_v<M, RwrsModel>) {
            m.validate();
          } else {
            m.alpha_law.validate();
            m.beta_law.validate();
            if (m.space_mesh < 0.0) throw InvalidArgument("space_mesh must be >= 0");
          }
        },
        model);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (!(work() <= max_work)) {
    throw ResourceCapError("requested work " + std::to_string(work()) + " exceeds max_work " +
                           std::to_string(max_work));
  }
}

const ResultRow& ExperimentResult::row(Statistic s, std::int64_t n) const {
  for (const auto& r : rows) {
    if (r.statistic == s && r.n == n) return r;
  }
  throw std::out_of_range("no row for " + to_string(s) + " at n = " + std::to_string(n));
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  spec.validate();
  const std::vector<Slot> slots = layout(spec);
  std::vector<double> values(static_cast<std::size_t>(spec.trials) * slots.size(), 0.0);
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, CpModel>) {
          run_trials<CpTrialRunner>(m, spec, slots, options, values);
        } else if constexpr (std::is_same_v<M, RwrsModel>) {
          run_trials<RwrsTrialRunner>(m, spec, slots, options, values);
        } else {
          run_trials<LimitTrialRunner>(m, spec, slots, options, values);
        }
      },
      spec.model);

  ExperimentResult result;
  result.rows.reserve(slots.size());
  for (std::size_t j = 0; j < slots.size(); ++j) {
    ResultRow row{slots[j].n, slots[j].statistic, {}, {}};
    if (options.keep_samples) row.samples.reserve(static_cast<std::size_t>(spec.trials));
    for (std::int64_t i = 0; i < spec.trials; ++i) {
      const double v = values[static_cast<std::size_t>(i) * slots.size() + j];
      row.stats.add(v);
      if (options.keep_samples) row.samples.push_back(v);
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

TrialStats estimate_escape(const ModelSpec& model, std::int64_t horizon, std::int64_t trials,
                           std::uint64_t master_seed, int threads) {
  if (horizon < 1) throw InvalidArgument("escape horizon must be >= 1");
  if (std::holds_alternative<LimitModel>(model)) {
    throw InvalidArgument("escape is defined for the cp and rwrs models");
  }
  ExperimentSpec spec;
  spec.model = model;
  spec.sizes = {horizon};
  spec.trials = trials;
  spec.master_seed = master_seed;
  spec.outputs = {Statistic::escape};
  spec.max_work = std::numeric_limits<double>::infinity();
  RunOptions options;
  options.threads = threads;
  return run_experiment(spec, options).rows.front().stats;
}

std::optional<double> ScalingFit::slope_ci_half_width(double confidence) const {
  if (!slope_stderr || points < 3) return std::nullopt;
  const boost::math::students_t_distribution<double> t(static_cast<double>(points - 2));
  return boost::math::quantile(t, 0.5 + confidence / 2.0) * *slope_stderr;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw InvalidArgument("scaling fit needs at least 3 points");
  const auto k = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(k, 2);
  Eigen::VectorXd target(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto [n, v] = points[static_cast<std::size_t>(i)];
    if (!(n > 0.0) || !(v > 0.0)) {
      throw InvalidArgument("scaling fit needs positive sizes and estimates");
    }
    design(i, 0) = 1.0;
    design(i, 1) = std::log(n);
    target(i) = std::log(v);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
  const Eigen::VectorXd residual = design * coef - target;

  ScalingFit fit;
  fit.intercept = coef(0);
  fit.slope = coef(1);
  fit.residual_norm = residual.norm();
  fit.points = points.size();
  const Eigen::VectorXd centered = design.col(1).array() - design.col(1).mean();
  const double sxx = centered.squaredNorm();
  if (sxx > 0.0) {
    fit.slope_stderr = std::sqrt(residual.squaredNorm() / static_cast<double>(k - 2) / sxx);
  }
  return fit;
}

ConvergenceReport convergence_diagnostic(
    const std::vector<std::pair<std::int64_t, TrialStats>>& series, double confidence) {
  if (series.size() < 2) throw InvalidArgument("convergence diagnostic needs >= 2 sizes");
  ConvergenceReport report;
  for (const auto& [n, stats] : series) {
    report.entries.push_back({n, stats.mean(), stats.variance(), stats.ci_half_width(confidence)});
  }
  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    report.drift.push_back(report.entries[i].mean - report.entries[i - 1].mean);
    if (report.entries[i].dispersion > report.entries[i - 1].dispersion) {
      report.dispersion_shrinking = false;
    }
  }
  return report;
}

std::optional<double> expected_exponent(const ModelSpec& model, Statistic s) {
  if (const auto* cp = std::get_if<CpModel>(&model)) {
    (void)cp;
    switch (s) {
      case Statistic::range: return 1.0;
      case Statistic::first_range: return 0.75;
      case Statistic::range_ratio:
      case Statistic::first_range_norm:
      case Statistic::spread:
      case Statistic::escape: return 0.0;
      default: return std::nullopt;
    }
  }
  if (const auto* rw = std::get_if<RwrsModel>(&model)) {
    const double alpha = rw->alpha;
    const double beta = rw->beta;
    const double a_exp = alpha > 1.0 ? exponent_delta(alpha, beta) : 1.0 / beta;
    const bool transient_z = beta < 1.0;
    switch (s) {
      case Statistic::range: return transient_z ? 1.0 : a_exp;
      case Statistic::range_ratio: return transient_z ? 0.0 : a_exp - 1.0;
      case Statistic::range_norm:
      case Statistic::spread:
      case Statistic::sup: return 0.0;
      case Statistic::vn: return alpha > 1.0 ? 2.0 - 1.0 / alpha : 1.0;
      case Statistic::vn_beta: return alpha > 1.0 ? beta * exponent_delta(alpha, beta) : 1.0;
      case Statistic::z_vn: return transient_z ? 1.0 : 2.0 - a_exp;
      case Statistic::escape: return 0.0;
      default: return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace cprw
