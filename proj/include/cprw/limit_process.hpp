#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cprw/rng.hpp"
#include "cprw/stable.hpp"

namespace cprw {

/// Functionals of a path started at 0.
struct PathFunctionals {
  double sup = 0.0;
  double inf = 0.0;
  double spread = 0.0;
};

/// Stable Levy path on the grid t_j = j/m: Y(0) = 0 and i.i.d. increments
/// m^(-1/index) times a draw of `law`. Returns m + 1 values.
Eigen::VectorXd sample_y_path(const StableLaw& law, std::int64_t time_mesh, RngStream& rng);

/// Occupation-density estimate of the local time on cells [c h, (c+1) h):
///   L_t(x) ~ #{1 <= j <= t m : Y(t_j) in cell(x)} / (m h).
struct LocalTimeEstimate {
  double space_mesh = 0.0;
  double t = 0.0;
  std::int64_t first_cell = 0;
  Eigen::VectorXd density;

  /// Value on the cell containing x (0 outside the estimate's support).
  double at(double x) const;
  /// h * sum of densities; equals floor(t m)/m.
  double occupation() const { return space_mesh * density.sum(); }
};

std::int64_t cell_of(double x, double space_mesh);

/// Throws InvalidArgument when alpha <= 1 (no local time).
LocalTimeEstimate estimate_local_time(const Eigen::VectorXd& y_path, double space_mesh, double t,
                                      double alpha);

/// Scenery-process increments over space cells. Cells c >= 0 take the c-th
/// draw of one stream and cells c < 0 the (-c-1)-th draw of an independent
/// one, so U(x), x >= 0 and U(-x), x >= 0 are independent wings and any
/// range of cells is reproducible. Each increment is h^(1/beta) S_beta.
class ScenerySpaceIncrements {
 public:
  ScenerySpaceIncrements(const StableLaw& beta_law, double space_mesh, std::uint64_t seed);

  /// All increments identically zero.
  static ScenerySpaceIncrements zero(double space_mesh);

  double operator()(std::int64_t cell);

 private:
  ScenerySpaceIncrements(double space_mesh, bool zero);
  void extend(std::vector<double>& wing, RngStream& stream, std::size_t size);

  StableSampler sampler_;
  double scale_;
  bool zero_;
  RngStream positive_stream_;
  RngStream negative_stream_;
  std::vector<double> positive_;
  std::vector<double> negative_;
};

/// One discretized realization of (Y, U) with its local time.
struct LimitGrid {
  std::int64_t time_mesh = 0;
  double space_mesh = 0.0;
  double alpha = 2.0;
  Eigen::VectorXd y_path;
  std::int64_t first_cell = 0;
  Eigen::VectorXd u_increments;  // over the occupied cells, from first_cell

  LocalTimeEstimate local_time(double t) const {
    return estimate_local_time(y_path, space_mesh, t, alpha);
  }
};

LimitGrid sample_limit_grid(const StableLaw& alpha_law, const StableLaw& beta_law,
                            std::int64_t time_mesh, double space_mesh, RngStream& rng);

/// Delta_t = sum over cells of L_t(x) dU(x) at t = 0, 1/m, ..., 1.
/// Uses the running form Delta_{t_j} - Delta_{t_{j-1}} = dU(cell(Y(t_j))) / (m h).
Eigen::VectorXd kesten_spitzer_path(const LimitGrid& grid);

/// Delta at each t in t_grid from the explicit sum over cells.
Eigen::VectorXd kesten_spitzer_at(const LimitGrid& grid, const std::vector<double>& t_grid);

/// Delta on t_grid for a fresh (Y, U). Throws InvalidArgument when alpha <= 1.
Eigen::VectorXd kesten_spitzer_sample(const StableLaw& alpha_law, const StableLaw& beta_law,
                                      std::int64_t time_mesh, double space_mesh,
                                      const std::vector<double>& t_grid, RngStream& rng);

/// Limit process of the normalized RWRS on the full grid: the Kesten-Spitzer
/// process when alpha > 1, the scenery process U itself (c = 1) otherwise.
Eigen::VectorXd sample_delta_path(const StableLaw& alpha_law, const StableLaw& beta_law,
                                  std::int64_t time_mesh, double space_mesh, RngStream& rng);

/// Cell width giving roughly 2^10 occupied cells for Y on [0, 1].
double default_space_mesh(const StableLaw& alpha_law);

PathFunctionals functionals(const Eigen::Ref<const Eigen::VectorXd>& path);

/// p / (1 - p)^(1/4).
double k_p(double p);

}  // namespace cprw
