#include "cprw/limit_process.hpp"

#include <algorithm>
#include <cmath>

#include "cprw/cp_walk.hpp"
#include "cprw/error.hpp"

namespace cprw {

namespace {

void require_local_time(double alpha) {
  if (!(alpha > 1.0)) {
    throw InvalidArgument("local time and the Kesten-Spitzer integral need alpha > 1");
  }
}

void require_mesh(std::int64_t time_mesh, double space_mesh) {
  if (time_mesh < 1) throw InvalidArgument("time mesh must be >= 1");
  if (!(space_mesh > 0.0)) throw InvalidArgument("space mesh must be positive");
}

std::int64_t steps_up_to(double t, std::int64_t time_mesh) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("t must lie in [0, 1]");
  const auto j = static_cast<std::int64_t>(std::floor(t * static_cast<double>(time_mesh) *
                                                      (1.0 + 1e-12)));
  return std::min(j, time_mesh);
}

}  // namespace

Eigen::VectorXd sample_y_path(const StableLaw& law, std::int64_t time_mesh, RngStream& rng) {
  if (time_mesh < 1) throw InvalidArgument("time mesh must be >= 1");
  const StableSampler sampler(law);
  const double scale = std::pow(static_cast<double>(time_mesh), -1.0 / law.index);
  Eigen::VectorXd path(time_mesh + 1);
  path(0) = 0.0;
  for (std::int64_t j = 1; j <= time_mesh; ++j) path(j) = path(j - 1) + scale * sampler(rng);
  return path;
}

std::int64_t cell_of(double x, double space_mesh) {
  return static_cast<std::int64_t>(std::floor(x / space_mesh));
}

double LocalTimeEstimate::at(double x) const {
  const std::int64_t k = cell_of(x, space_mesh) - first_cell;
  if (k < 0 || k >= density.size()) return 0.0;
  return density(k);
}

LocalTimeEstimate estimate_local_time(const Eigen::VectorXd& y_path, double space_mesh, double t,
                                      double alpha) {
  require_local_time(alpha);
  const std::int64_t time_mesh = y_path.size() - 1;
  require_mesh(time_mesh, space_mesh);
  const std::int64_t last = steps_up_to(t, time_mesh);

  LocalTimeEstimate out;
  out.space_mesh = space_mesh;
  out.t = t;
  if (last == 0) return out;
  std::int64_t lo = cell_of(y_path(1), space_mesh);
  std::int64_t hi = lo;
  for (std::int64_t j = 2; j <= last; ++j) {
    const std::int64_t c = cell_of(y_path(j), space_mesh);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  out.first_cell = lo;
  out.density = Eigen::VectorXd::Zero(hi - lo + 1);
  const double unit = 1.0 / (static_cast<double>(time_mesh) * space_mesh);
  for (std::int64_t j = 1; j <= last; ++j) {
    out.density(cell_of(y_path(j), space_mesh) - lo) += unit;
  }
  return out;
}

ScenerySpaceIncrements::ScenerySpaceIncrements(const StableLaw& beta_law, double space_mesh,
                                               std::uint64_t seed)
    : sampler_(beta_law),
      scale_(std::pow(space_mesh, 1.0 / beta_law.index)),
      zero_(false),
      positive_stream_(derive_stream(seed, 0)),
      negative_stream_(derive_stream(seed, 1)) {
  require_mesh(1, space_mesh);
}

ScenerySpaceIncrements::ScenerySpaceIncrements(double space_mesh, bool zero)
    : sampler_(StableLaw{}),
      scale_(space_mesh),
      zero_(zero),
      positive_stream_(0, 0),
      negative_stream_(0, 1) {}

ScenerySpaceIncrements ScenerySpaceIncrements::zero(double space_mesh) {
  return ScenerySpaceIncrements(space_mesh, true);
}

void ScenerySpaceIncrements::extend(std::vector<double>& wing, RngStream& stream,
                                    std::size_t size) {
  while (wing.size() < size) wing.push_back(scale_ * sampler_(stream));
}

double ScenerySpaceIncrements::operator()(std::int64_t cell) {
  if (zero_) return 0.0;
  if (cell >= 0) {
    const auto k = static_cast<std::size_t>(cell);
    extend(positive_, positive_stream_, k + 1);
    return positive_[k];
  }
  const auto k = static_cast<std::size_t>(-cell - 1);
  extend(negative_, negative_stream_, k + 1);
  return negative_[k];
}

LimitGrid sample_limit_grid(const StableLaw& alpha_law, const StableLaw& beta_law,
                            std::int64_t time_mesh, double space_mesh, RngStream& rng) {
  require_mesh(time_mesh, space_mesh);
  beta_law.validate();
  LimitGrid grid;
  grid.time_mesh = time_mesh;
  grid.space_mesh = space_mesh;
  grid.alpha = alpha_law.index;
  grid.y_path = sample_y_path(alpha_law, time_mesh, rng);

  std::int64_t lo = 0;
  std::int64_t hi = 0;
  for (std::int64_t j = 0; j <= time_mesh; ++j) {
    const std::int64_t c = cell_of(grid.y_path(j), space_mesh);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  ScenerySpaceIncrements u(beta_law, space_mesh, rng.next_u64());
  grid.first_cell = lo;
  grid.u_increments.resize(hi - lo + 1);
  // Draw the wings outward from 0 so the realized values do not depend on
  // the occupied range.
  for (std::int64_t c = 0; c <= hi; ++c) grid.u_increments(c - lo) = u(c);
  for (std::int64_t c = -1; c >= lo; --c) grid.u_increments(c - lo) = u(c);
  return grid;
}

Eigen::VectorXd kesten_spitzer_path(const LimitGrid& grid) {
  require_local_time(grid.alpha);
  const double unit = 1.0 / (static_cast<double>(grid.time_mesh) * grid.space_mesh);
  Eigen::VectorXd delta(grid.time_mesh + 1);
  delta(0) = 0.0;
  for (std::int64_t j = 1; j <= grid.time_mesh; ++j) {
    const std::int64_t c = cell_of(grid.y_path(j), grid.space_mesh) - grid.first_cell;
    delta(j) = delta(j - 1) + unit * grid.u_increments(c);
  }
  return delta;
}

Eigen::VectorXd kesten_spitzer_at(const LimitGrid& grid, const std::vector<double>& t_grid) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(t_grid.size()));
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const LocalTimeEstimate lt = grid.local_time(t_grid[i]);
    const Eigen::Index offset = lt.first_cell - grid.first_cell;
    out(static_cast<Eigen::Index>(i)) =
        lt.density.size() == 0
            ? 0.0
            : lt.density.dot(grid.u_increments.segment(offset, lt.density.size()));
  }
  return out;
}

Eigen::VectorXd kesten_spitzer_sample(const StableLaw& alpha_law, const StableLaw& beta_law,
                                      std::int64_t time_mesh, double space_mesh,
                                      const std::vector<double>& t_grid, RngStream& rng) {
  require_local_time(alpha_law.index);
  const LimitGrid grid = sample_limit_grid(alpha_law, beta_law, time_mesh, space_mesh, rng);
  const Eigen::VectorXd full = kesten_spitzer_path(grid);
  Eigen::VectorXd out(static_cast<Eigen::Index>(t_grid.size()));
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = full(steps_up_to(t_grid[i], time_mesh));
  }
  return out;
}

Eigen::VectorXd sample_delta_path(const StableLaw& alpha_law, const StableLaw& beta_law,
                                  std::int64_t time_mesh, double space_mesh, RngStream& rng) {
  alpha_law.validate();
  if (alpha_law.index <= 1.0) return sample_y_path(beta_law, time_mesh, rng);
  return kesten_spitzer_path(sample_limit_grid(alpha_law, beta_law, time_mesh, space_mesh, rng));
}

double default_space_mesh(const StableLaw& alpha_law) {
  alpha_law.validate();
  return 2.26 * alpha_law.scale() / 1024.0;
}

PathFunctionals functionals(const Eigen::Ref<const Eigen::VectorXd>& path) {
  if (path.size() == 0 || path(0) != 0.0) {
    throw InvalidArgument("path functionals need a path started at 0");
  }
  PathFunctionals f;
  f.sup = path.maxCoeff();
  f.inf = path.minCoeff();
  f.spread = f.sup - f.inf;
  return f;
}

double k_p(double p) {
  validate_horizontal_probability(p);
  return p / std::pow(1.0 - p, 0.25);
}

}  // namespace cprw
