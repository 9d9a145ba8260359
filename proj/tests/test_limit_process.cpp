#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "cprw/error.hpp"
#include "cprw/limit_process.hpp"
#include "cprw/stats.hpp"

using namespace cprw;

namespace {

const StableLaw kStandardBm{2.0, 0.5, 0.0};

}  // namespace

TEST_CASE("Y path: start, variance, self-similarity") {
  RngStream rng = derive_stream(1, 0);
  const StableLaw law{2.0, 0.8, 0.0};
  TrialStats end;
  const int paths = 20000;
  for (int i = 0; i < paths; ++i) {
    const Eigen::VectorXd y = sample_y_path(law, 64, rng);
    REQUIRE(y.size() == 65);
    REQUIRE(y(0) == 0.0);
    end.add(y(64));
  }
  const double var = 2.0 * law.a1;
  CHECK(std::abs(end.variance() - var) < 4.0 * var * std::sqrt(2.0 / (paths - 1)));

  const StableLaw stable{1.5, 1.0, 0.3};
  std::vector<double> half, scaled;
  RngStream a = derive_stream(2, 0);
  for (int i = 0; i < paths; ++i) {
    half.push_back(sample_y_path(stable, 32, a)(16));
    scaled.push_back(std::pow(2.0, -1.0 / 1.5) * sample_y_path(stable, 32, a)(32));
  }
  CHECK(ks_two_sample(half, scaled).p_value > 1e-3);
  CHECK_THROWS_AS(sample_y_path(stable, 0, a), InvalidArgument);
}

TEST_CASE("local time of a constant path") {
  const Eigen::VectorXd y = Eigen::VectorXd::Zero(101);
  const double h = 0.25;
  const LocalTimeEstimate full = estimate_local_time(y, h, 1.0, 2.0);
  CHECK(full.density.size() == 1);
  CHECK(full.at(0.0) == doctest::Approx(1.0 / h));
  CHECK(full.at(0.3) == 0.0);
  const LocalTimeEstimate part = estimate_local_time(y, h, 0.3, 2.0);
  CHECK(part.at(0.1) == doctest::Approx(0.3 / h));
  CHECK(estimate_local_time(y, h, 0.0, 2.0).occupation() == 0.0);
  CHECK_THROWS_AS(estimate_local_time(y, h, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(estimate_local_time(y, h, 1.5, 2.0), InvalidArgument);
  CHECK_THROWS_AS(estimate_local_time(y, 0.0, 1.0, 2.0), InvalidArgument);
}

TEST_CASE("occupation identity on sampled grids") {
  RngStream rng = derive_stream(3, 0);
  for (std::int64_t m : {100, 1000, 4096}) {
    for (int i = 0; i < 20; ++i) {
      const LimitGrid g = sample_limit_grid(kStandardBm, kStandardBm, m, 0.01, rng);
      for (double t : {0.25, 1.0}) {
        const LocalTimeEstimate lt = g.local_time(t);
        REQUIRE(lt.density.minCoeff() >= 0.0);
        REQUIRE(std::abs(lt.occupation() - t) <= 2.0 / std::sqrt(static_cast<double>(m)));
      }
    }
  }
}

TEST_CASE("local time at zero: mean against a refined run and the closed form") {
  // For standard BM, E[L_1(0)] = sqrt(2 / pi).
  const int paths = 3000;
  auto mean_l0 = [&](std::int64_t m, double h, std::uint64_t seed) {
    RngStream rng = derive_stream(seed, 0);
    TrialStats st;
    for (int i = 0; i < paths; ++i) {
      const Eigen::VectorXd y = sample_y_path(kStandardBm, m, rng);
      // cell straddling 0
      const Eigen::VectorXd shifted = y.array() + h / 2.0;
      st.add(estimate_local_time(shifted, h, 1.0, 2.0).at(h / 2.0));
    }
    return st.mean();
  };
  const double coarse = mean_l0(1024, 0.08, 4);
  const double fine = mean_l0(10240, 0.02, 5);
  CHECK(std::abs(coarse - fine) < 0.1 * fine);
  CHECK(std::abs(fine - std::sqrt(2.0 / std::numbers::pi)) < 0.1 * fine);
}

TEST_CASE("Kesten-Spitzer path: zero scenery, explicit sum, start at zero") {
  RngStream rng = derive_stream(6, 0);
  LimitGrid g = sample_limit_grid(kStandardBm, kStandardBm, 2048, 0.02, rng);
  const Eigen::VectorXd delta = kesten_spitzer_path(g);
  CHECK(delta(0) == 0.0);
  const std::vector<double> ts{0.0, 0.1, 0.5, 0.77, 1.0};
  const Eigen::VectorXd explicit_sum = kesten_spitzer_at(g, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(std::floor(ts[i] * 2048 * (1 + 1e-12)));
    CHECK(explicit_sum(static_cast<Eigen::Index>(i)) ==
          doctest::Approx(delta(j)).epsilon(1e-9).scale(1.0));
  }

  g.u_increments.setZero();
  CHECK(kesten_spitzer_path(g).cwiseAbs().maxCoeff() == 0.0);

  ScenerySpaceIncrements zero = ScenerySpaceIncrements::zero(0.1);
  CHECK(zero(5) == 0.0);
  CHECK(zero(-5) == 0.0);

  CHECK_THROWS_AS(kesten_spitzer_sample(StableLaw{1.0, 1, 0}, kStandardBm, 64, 0.1, ts, rng),
                  InvalidArgument);
}

TEST_CASE("scenery increments are reproducible per cell and scaled by h^(1/beta)") {
  ScenerySpaceIncrements a(StableLaw{1.5, 1, 0}, 0.1, 9);
  ScenerySpaceIncrements b(StableLaw{1.5, 1, 0}, 0.1, 9);
  const double a_neg = a(-3);
  const double a_pos = a(10);
  CHECK(b(10) == a_pos);
  CHECK(b(-3) == a_neg);

  ScenerySpaceIncrements g(StableLaw{2, 1, 0}, 0.04, 10);
  TrialStats st;
  for (int c = -20000; c < 20000; ++c) st.add(g(c));
  // variance 2 a1 h^(2/beta)
  CHECK(st.variance() == doctest::Approx(2.0 * 0.04).epsilon(0.03));
}

TEST_CASE("Delta_1: symmetric mean, variance oracle and mesh refinement") {
  // E[Delta_1^2] = E int L_1(x)^2 dx = int int (2 pi |t - s|)^(-1/2) ds dt = 8 / (3 sqrt(2 pi))
  const double oracle = 8.0 / (3.0 * std::sqrt(2.0 * std::numbers::pi));
  const int paths = 10000;
  const std::vector<double> t1{1.0};
  auto run = [&](std::int64_t m, double h, std::uint64_t seed) {
    RngStream rng = derive_stream(seed, 0);
    TrialStats st;
    for (int i = 0; i < paths; ++i) {
      st.add(kesten_spitzer_sample(kStandardBm, kStandardBm, m, h, t1, rng)(0));
    }
    return st;
  };
  const TrialStats coarse = run(1024, 0.04, 11);
  const TrialStats fine = run(4096, 0.02, 12);
  CHECK(std::abs(coarse.mean()) < 4.0 * std::sqrt(coarse.variance() / paths));
  CHECK(std::abs(coarse.variance() - fine.variance()) < 0.1 * fine.variance());
  CHECK(std::abs(fine.variance() - oracle) < 0.1 * oracle);
}

TEST_CASE("default space mesh spans about a thousand cells") {
  const double h = default_space_mesh(kStandardBm);
  RngStream rng = derive_stream(13, 0);
  TrialStats cells;
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd y = sample_y_path(kStandardBm, 4096, rng);
    cells.add((y.maxCoeff() - y.minCoeff()) / h);
  }
  CHECK(cells.mean() > 600);
  CHECK(cells.mean() < 1600);
}

TEST_CASE("path functionals") {
  const PathFunctionals zero = functionals(Eigen::VectorXd::Zero(10));
  CHECK(zero.sup == 0.0);
  CHECK(zero.inf == 0.0);
  CHECK(zero.spread == 0.0);
  const PathFunctionals up = functionals(Eigen::VectorXd::LinSpaced(11, 0.0, 2.5));
  CHECK(up.inf == 0.0);
  CHECK(up.sup == 2.5);
  CHECK(up.spread == 2.5);
  Eigen::VectorXd bad(3);
  bad << 1.0, 0.0, 2.0;
  CHECK_THROWS_AS(functionals(bad), InvalidArgument);
}

TEST_CASE("expected supremum of standard Brownian motion") {
  // Reflection principle: E[sup_{[0,1]} W] = E|W_1| = sqrt(2 / pi).
  const double oracle = std::sqrt(2.0 / std::numbers::pi);
  RngStream rng = derive_stream(14, 0);
  TrialStats sup;
  for (int i = 0; i < 20000; ++i) {
    sup.add(functionals(sample_delta_path(StableLaw{0.8, 1, 0}, kStandardBm, 4096, 0.0, rng)).sup);
  }
  CHECK(std::abs(sup.mean() - oracle) < 0.03 * oracle);
}

TEST_CASE("K_p") {
  CHECK(k_p(0.5) == doctest::Approx(std::pow(2.0, -0.75)).epsilon(1e-14));
  CHECK(k_p(0.5) == doctest::Approx(0.5946).epsilon(1e-4));
  CHECK(k_p(0.75) == doctest::Approx(0.75 / std::pow(0.25, 0.25)).epsilon(1e-14));
  CHECK(k_p(0.75) == doctest::Approx(1.0607).epsilon(1e-4));
  CHECK(k_p(1e-9) < 1e-8);
  CHECK_THROWS_AS(k_p(1.0), InvalidArgument);
}
