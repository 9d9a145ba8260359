#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "cprw/error.hpp"
#include "cprw/lattice.hpp"
#include "cprw/stable.hpp"
#include "cprw/stats.hpp"

using namespace cprw;

namespace {

std::complex<double> empirical_cf(const std::vector<double>& xs, double u) {
  std::complex<double> s = 0.0;
  for (double x : xs) s += std::polar(1.0, u * x);
  return s / static_cast<double>(xs.size());
}

std::vector<double> draws(const StableLaw& law, int n, std::uint64_t seed) {
  RngStream rng = derive_stream(seed, 0);
  const StableSampler sampler(law);
  std::vector<double> xs(n);
  for (auto& x : xs) x = sampler(rng);
  return xs;
}

}  // namespace

TEST_CASE("stable law validation") {
  CHECK_NOTHROW(StableLaw{2, 1, 0}.validate());
  CHECK_NOTHROW(StableLaw{1.5, 1, 0.5}.validate());
  CHECK_THROWS_AS((StableLaw{2.5, 1, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((StableLaw{0, 1, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((StableLaw{1.5, 0, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((StableLaw{1, 1, 0.1}.validate()), InvalidArgument);
  CHECK_THROWS_AS((StableLaw{2, 1, 0.1}.validate()), InvalidArgument);
  // |a2/a1| <= |tan(pi 1.5/2)| = 1
  CHECK_THROWS_AS((StableLaw{1.5, 1, 1.2}.validate()), InvalidArgument);
  RngStream rng = derive_stream(1, 1);
  CHECK_THROWS_AS((sample_stable(StableLaw{3, 1, 0}, rng)), InvalidArgument);
}

TEST_CASE("characteristic function formula") {
  const StableLaw law{1.5, 1.0, 0.5};
  const auto v = law.characteristic_function(2.0);
  const double m = std::pow(2.0, 1.5);
  CHECK(v.real() == doctest::Approx(std::exp(-m) * std::cos(-0.5 * m)));
  CHECK(v.imag() == doctest::Approx(std::exp(-m) * std::sin(-0.5 * m)));
  CHECK(std::abs(law.characteristic_function(0.0) - 1.0) < 1e-15);
}

TEST_CASE("empirical characteristic function matches the target") {
  const int n = 100000;
  const double tol = 4.0 / std::sqrt(static_cast<double>(n));
  for (const StableLaw& law : {StableLaw{2, 1, 0}, StableLaw{1.5, 1, 0.5}, StableLaw{1, 1, 0},
                               StableLaw{0.8, 1, 0}, StableLaw{0.6, 0.7, -0.5},
                               StableLaw{1.2, 2.0, 1.0}}) {
    CAPTURE(law.index);
    CAPTURE(law.a2);
    const auto xs = draws(law, n, 17);
    for (double u : {-1.0, 0.3, 1.0, 3.0}) {
      CAPTURE(u);
      CHECK(std::abs(empirical_cf(xs, u) - law.characteristic_function(u)) < tol);
    }
  }
}

TEST_CASE("gaussian case: variance 2 a1 and centered") {
  const int n = 1000000;
  const auto xs = draws(StableLaw{2, 1, 0}, n, 3);
  TrialStats st;
  for (double x : xs) st.add(x);
  CHECK(std::abs(st.mean()) < 4.0 * std::sqrt(2.0 / n));
  CHECK(st.variance() == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("cauchy case has median zero") {
  const int n = 100001;
  auto xs = draws(StableLaw{1, 1, 0}, n, 4);
  std::nth_element(xs.begin(), xs.begin() + n / 2, xs.end());
  // median of n Cauchy draws has sd about pi / (2 sqrt(n))
  CHECK(std::abs(xs[n / 2]) < 4.0 * std::numbers::pi / (2.0 * std::sqrt(n)));
}

TEST_CASE("index 2 sampler agrees with a gaussian sampler (two-sample KS)") {
  const int n = 100000;
  const double a1 = 0.7;
  const auto xs = draws(StableLaw{2, a1, 0}, n, 21);
  RngStream rng = derive_stream(22, 0);
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0 * a1));
  std::vector<double> ys(n);
  for (auto& y : ys) y = normal(rng);
  CHECK(ks_two_sample(xs, ys).p_value > 1e-3);
}

TEST_CASE("sampler is deterministic given the stream") {
  CHECK(draws(StableLaw{1.3, 1, 0.2}, 100, 8) == draws(StableLaw{1.3, 1, 0.2}, 100, 8));
}

TEST_CASE("rademacher draws are +-1 and centered") {
  RngStream rng = derive_stream(31, 0);
  const auto law = LatticeLaw::rademacher();
  std::int64_t sum = 0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const auto x = sample_lattice(law, rng);
    REQUIRE((x == 1 || x == -1));
    sum += x;
  }
  CHECK(std::abs(static_cast<double>(sum) / n) < 4e-3);
}

TEST_CASE("ternary zero mass") {
  RngStream rng = derive_stream(32, 0);
  const auto law = LatticeLaw::ternary(0.5);
  int zeros = 0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) zeros += sample_lattice(law, rng) == 0;
  CHECK(std::abs(zeros / static_cast<double>(n) - 0.5) < 4.0 * std::sqrt(0.25 / n));
  CHECK(law.pmf(0) == 0.5);
  CHECK(law.pmf(1) == 0.25);
  CHECK(law.pmf(2) == 0.0);
}

TEST_CASE("lattice law parameters are validated") {
  CHECK_THROWS_AS(LatticeLaw::ternary(1.0), InvalidArgument);
  CHECK_THROWS_AS(LatticeLaw::lazy_vertical(0.0), InvalidArgument);
  CHECK_THROWS_AS(LatticeLaw::pareto_tail(2.0), InvalidArgument);
  CHECK_THROWS_AS(LatticeLaw::pareto_tail(1.5, 10.0), InvalidArgument);
  CHECK_THROWS_AS(lattice_kind_from_string("gaussian"), InvalidArgument);
  CHECK(lattice_kind_from_string("pareto_tail") == LatticeLaw::Kind::pareto_tail);
}

TEST_CASE("pareto tail: pmf, tail sums and sampled tail frequencies") {
  const double a = 1.5;
  const auto law = LatticeLaw::pareto_tail(a);
  // Independent tail oracle: direct partial sums plus an integral remainder.
  auto tail = [&](std::int64_t t) {
    double s = 0.0;
    const std::int64_t cut = 2000000;
    for (std::int64_t k = t + 1; k <= cut; ++k) s += std::pow(static_cast<double>(k), -1.0 - a);
    s += std::pow(cut + 0.5, -a) / a;
    return 2.0 * law.tail_constant() * s;
  };
  CHECK(law.zero_mass() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(law.tail_probability(0) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::int64_t t : {1, 10, 20, 40}) {
    CAPTURE(t);
    CHECK(law.tail_probability(t) == doctest::Approx(tail(t)).epsilon(1e-6));
  }
  // t^a P(|X| > t) is close to its limit 2c/a already at t = 10.
  const double limit = 2.0 * law.tail_constant() / a;
  for (std::int64_t t : {10, 20, 40}) {
    CHECK(std::pow(static_cast<double>(t), a) * tail(t) == doctest::Approx(limit).epsilon(0.1));
  }

  RngStream rng = derive_stream(33, 0);
  const int n = 1000000;
  int over10 = 0, over20 = 0, over40 = 0;
  for (int i = 0; i < n; ++i) {
    const auto x = std::abs(sample_lattice(law, rng));
    REQUIRE(x >= 1);
    over10 += x > 10;
    over20 += x > 20;
    over40 += x > 40;
  }
  for (auto [t, count] : {std::pair{10, over10}, {20, over20}, {40, over40}}) {
    CAPTURE(t);
    const double p = tail(t);
    CHECK(std::abs(count / static_cast<double>(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("pareto law with an atom at zero") {
  const auto law = LatticeLaw::pareto_tail(0.8, 0.2);
  CHECK(law.zero_mass() > 0.0);
  double total = law.pmf(0);
  for (int k = 1; k <= 200000; ++k) total += 2.0 * law.pmf(k);
  total += 2.0 * 0.2 * std::pow(200000.5, -0.8) / 0.8;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
  RngStream rng = derive_stream(34, 0);
  int zeros = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) zeros += sample_lattice(law, rng) == 0;
  const double p0 = law.zero_mass();
  CHECK(std::abs(zeros / static_cast<double>(n) - p0) < 4.0 * std::sqrt(p0 * (1 - p0) / n));
}

TEST_CASE("attractor of finite-support laws is gaussian with half the variance") {
  CHECK(LatticeLaw::simple_symmetric().attractor() == StableLaw{2, 0.5, 0});
  CHECK(LatticeLaw::ternary(0.5).attractor() == StableLaw{2, 0.25, 0});
  CHECK(LatticeLaw::pareto_tail(1.5).stable_index() == 1.5);
}

TEST_CASE("normalized pareto sums approach the attractor") {
  const double a = 1.5;
  const auto law = LatticeLaw::pareto_tail(a);
  const StableLaw target = law.attractor();
  const int sums = 20000;
  const int terms = 1000;
  RngStream rng = derive_stream(35, 0);
  std::vector<double> xs(sums);
  for (auto& x : xs) {
    std::int64_t s = 0;
    for (int k = 0; k < terms; ++k) s += sample_lattice(law, rng);
    x = static_cast<double>(s) / std::pow(terms, 1.0 / a);
  }
  for (double u : {0.3, 1.0}) {
    CAPTURE(u);
    CHECK(std::abs(empirical_cf(xs, u) - target.characteristic_function(u)) < 0.03);
  }
}
