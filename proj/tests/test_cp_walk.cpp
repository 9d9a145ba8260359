#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "cprw/cp_exact.hpp"
#include "cprw/cp_walk.hpp"
#include "cprw/error.hpp"
#include "cprw/stats.hpp"

using namespace cprw;

namespace {

// Brute-force annealed oracle: average the quenched law over every
// orientation of rows -n..n, propagating (site, returned) distributions.
struct BruteForce {
  std::map<Site, double> law;
  std::vector<double> no_return;  // index L = 0..n
};

BruteForce brute_force(double p, int n) {
  BruteForce out;
  out.no_return.assign(n + 1, 0.0);
  const int rows = 2 * n + 1;
  const double env_weight = std::ldexp(1.0, -rows);
  for (std::uint32_t mask = 0; mask < (1u << rows); ++mask) {
    auto eps = [&](std::int64_t y) { return (mask >> (y + n)) & 1u ? 1 : -1; };
    std::map<std::pair<Site, bool>, double> dist{{{Site{}, false}, 1.0}};
    out.no_return[0] += env_weight;
    for (int k = 1; k <= n; ++k) {
      std::map<std::pair<Site, bool>, double> next;
      for (const auto& [state, w] : dist) {
        const auto [s, hit] = state;
        const Site moves[3] = {{s.x + eps(s.y), s.y}, {s.x, s.y + 1}, {s.x, s.y - 1}};
        const double probs[3] = {p, (1 - p) / 2, (1 - p) / 2};
        for (int m = 0; m < 3; ++m) {
          const bool h = hit || (moves[m] == Site{});
          next[{moves[m], h}] += w * probs[m];
        }
      }
      dist = std::move(next);
      for (const auto& [state, w] : dist) {
        if (!state.second) out.no_return[k] += env_weight * w;
      }
    }
    for (const auto& [state, w] : dist) out.law[state.first] += env_weight * w;
  }
  return out;
}

// 1 + #{k < n : M_k not revisited at times k+1..n}
std::int64_t quadratic_range(const CPPath& path) {
  const std::size_t n = path.n();
  std::int64_t r = 1;
  for (std::size_t k = 0; k < n; ++k) {
    bool revisited = false;
    for (std::size_t j = k + 1; j <= n && !revisited; ++j) {
      revisited = path.positions[j] == path.positions[k];
    }
    r += !revisited;
  }
  return r;
}

CPPath path_from_steps(const std::vector<Step>& steps, const Environment& env) {
  CPPath path;
  path.positions.push_back({0, 0});
  Site s{};
  for (Step st : steps) {
    if (st == Step::H) s.x += env.orientation(s.y);
    if (st == Step::U) ++s.y;
    if (st == Step::D) --s.y;
    path.steps.push_back(st);
    path.positions.push_back(s);
  }
  return path;
}

double tv(const std::map<Site, double>& a, const std::map<Site, double>& b) {
  return total_variation(a, b);
}

}  // namespace

TEST_CASE("annealed simulation basics") {
  const CPPath empty = simulate_annealed(0.5, 0, 1);
  CHECK(empty.positions == std::vector<Site>{{0, 0}});
  CHECK(empty.n() == 0);
  CHECK_THROWS_AS(simulate_annealed(0.0, 3, 1), InvalidArgument);
  CHECK_THROWS_AS(simulate_annealed(1.0, 3, 1), InvalidArgument);
  CHECK(simulate_annealed(0.3, 50, 7, 4).positions == simulate_annealed(0.3, 50, 7, 4).positions);
}

TEST_CASE("annealed two-step return and first-step frequencies") {
  const int trials = 1000000;
  int returns = 0;
  int first_h = 0;
  for (int i = 0; i < trials; ++i) {
    const CPPath path = simulate_annealed(0.5, 2, 2024, static_cast<std::uint64_t>(i));
    returns += path.positions[2] == Site{};
    first_h += path.steps[0] == Step::H;
  }
  auto within = [&](int count, double q) {
    return std::abs(count / static_cast<double>(trials) - q) <
           4.0 * std::sqrt(q * (1 - q) / trials);
  };
  CHECK(within(returns, 0.125));
  CHECK(within(first_h, 0.5));
}

TEST_CASE("quenched walk in a constant environment with p near one") {
  const Environment env = Environment::constant(1);
  RngStream rng = derive_stream(3, 0);
  const CPPath path = simulate_quenched(env, 1.0 - 1e-12, 1000, rng);
  for (std::size_t k = 0; k <= 1000; ++k) {
    REQUIRE(path.positions[k] == Site{static_cast<std::int64_t>(k), 0});
  }
  CHECK_THROWS_AS(Environment::constant(0), InvalidArgument);
}

TEST_CASE("quenched walk is deterministic and valid") {
  const Environment env(99);
  RngStream a = derive_stream(5, 1);
  RngStream b = derive_stream(5, 1);
  const CPPath pa = simulate_quenched(env, 0.4, 500, a);
  const CPPath pb = simulate_quenched(env, 0.4, 500, b);
  CHECK(pa.positions == pb.positions);
  CHECK(is_valid_path(pa, env));
  CHECK(env.orientation(7) == env.orientation(7));
  CHECK(std::abs(env.orientation(-3)) == 1);
}

TEST_CASE("environment rows are balanced across seeds") {
  int plus = 0;
  const int n = 100000;
  for (int s = 0; s < n; ++s) plus += Environment(static_cast<std::uint64_t>(s)).orientation(5) == 1;
  CHECK(std::abs(plus - n / 2.0) < 4.0 * std::sqrt(n / 4.0));
}

TEST_CASE("quenched law averaged over environments matches the annealed law") {
  const double p = 0.5;
  std::map<Site, double> mixed;
  const int envs = 1000;
  const int paths = 200;
  for (int e = 0; e < envs; ++e) {
    const Environment env(static_cast<std::uint64_t>(1000 + e));
    RngStream rng = derive_stream(77, static_cast<std::uint64_t>(e));
    for (int k = 0; k < paths; ++k) {
      mixed[simulate_quenched(env, p, 2, rng).positions.back()] += 1.0 / (envs * paths);
    }
  }
  CHECK(tv(mixed, exact_annealed_law(p, 2)) < 0.05);
}

TEST_CASE("skew-product generator: one-step law, M4 law, determinism") {
  const double p = 0.3;
  std::map<Site, int> one;
  RngStream rng = derive_stream(8, 0);
  const int n1 = 400000;
  for (int i = 0; i < n1; ++i) ++one[skew_product_path(p, 1, rng).positions.back()];
  const std::map<Site, double> expected{
      {{1, 0}, p / 2}, {{-1, 0}, p / 2}, {{0, 1}, (1 - p) / 2}, {{0, -1}, (1 - p) / 2}};
  CHECK(one.size() == 4);
  for (const auto& [site, q] : expected) {
    CHECK(std::abs(one[site] / static_cast<double>(n1) - q) < 4.0 * std::sqrt(q * (1 - q) / n1));
  }

  std::map<Site, double> law4;
  const int n4 = 1000000;
  RngStream rng4 = derive_stream(9, 0);
  for (int i = 0; i < n4; ++i) law4[skew_product_path(0.5, 4, rng4).positions.back()] += 1.0 / n4;
  CHECK(tv(law4, exact_annealed_law(0.5, 4)) < 0.02);

  RngStream a = derive_stream(10, 0);
  RngStream b = derive_stream(10, 0);
  CHECK(skew_product_path(0.5, 200, a).positions == skew_product_path(0.5, 200, b).positions);
}

TEST_CASE("exact annealed law: examples and normalization") {
  const auto law1 = exact_annealed_law(0.5, 1);
  CHECK(law1.size() == 4);
  for (const auto& [site, q] : law1) CHECK(q == 0.25);
  CHECK(exact_annealed_law(0.5, 2).at(Site{0, 0}) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(exact_annealed_law(0.5, 0).at(Site{0, 0}) == 1.0);
  for (double p : {0.1, 0.5, 0.9}) {
    for (int n : {3, 9, 12}) {
      double total = 0.0;
      for (const auto& [site, q] : exact_annealed_law(p, n)) total += q;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(exact_annealed_law(0.5, kMaxExactCpSteps + 1), ResourceCapError);
  CHECK_THROWS_AS(exact_annealed_law(0.0, 2), InvalidArgument);
}

TEST_CASE("exact oracles agree with brute-force environment averaging") {
  for (double p : {0.3, 0.5, 0.7}) {
    for (int n : {1, 2, 3, 4, 5}) {
      CAPTURE(p);
      CAPTURE(n);
      const BruteForce bf = brute_force(p, n);
      const auto law = exact_annealed_law(p, n);
      CHECK(law.size() == bf.law.size());
      for (const auto& [site, q] : bf.law) CHECK(law.at(site) == doctest::Approx(q).epsilon(1e-12));
      for (int L = 1; L <= n; ++L) {
        CHECK(exact_no_return_probability(p, L) == doctest::Approx(bf.no_return[L]).epsilon(1e-12));
      }
      CHECK(exact_return_probability(p, n) ==
            doctest::Approx(bf.law.count(Site{}) ? bf.law.at(Site{}) : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("no-return probabilities") {
  CHECK(exact_no_return_probability(0.5, 1) == 1.0);
  CHECK(exact_no_return_probability(0.5, 2) == doctest::Approx(0.875).epsilon(1e-15));
  CHECK(exact_no_return_probability(0.5, 12) == doctest::Approx(0.766444921493530).epsilon(1e-12));
  for (double p : {0.2, 0.5, 0.8}) {
    double prev = 1.0;
    for (int L = 1; L <= kMaxExactCpSteps; ++L) {
      const double q = exact_no_return_probability(p, L);
      // returns happen at even times only
      if (L % 2 == 1) {
        CHECK(q == doctest::Approx(prev).epsilon(1e-13));
      } else {
        CHECK(q < prev);
      }
      prev = q;
    }
  }
  CHECK_THROWS_AS(exact_no_return_probability(0.5, 15), ResourceCapError);
}

TEST_CASE("return probabilities: parity, examples, decay") {
  for (int n = 1; n <= 13; n += 2) CHECK(exact_return_probability(0.5, n) == 0.0);
  CHECK(exact_return_probability(0.5, 2) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(exact_return_probability(0.5, 4) < exact_return_probability(0.5, 2));
  CHECK(exact_return_probability(0.5, 4) == doctest::Approx(0.0546875).epsilon(1e-14));

  // Least-squares slope of log P(M_n = 0) against log n over even n.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (int n = 2; n <= 14; n += 2) {
    const double x = std::log(n);
    const double y = std::log(exact_return_probability(0.5, n));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  CHECK(slope < -0.8);
}

TEST_CASE("range functionals on small paths") {
  CPPath one;
  one.positions = {{0, 0}};
  CHECK(range_sites(one) == 1);
  CHECK(range_first_coordinate(one) == 1);

  CPPath back;
  back.positions = {{0, 0}, {1, 0}, {0, 0}};
  back.steps = {Step::H, Step::H};
  CHECK(range_sites(back) == 2);

  CPPath vertical;
  vertical.positions = {{0, 0}, {0, 1}, {0, 2}, {0, 1}};
  vertical.steps = {Step::U, Step::U, Step::D};
  CHECK(range_first_coordinate(vertical) == 1);
  CHECK(first_coordinate_decomposition(vertical, Environment(1)) == 0);

  CPPath xs;
  xs.positions = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}};
  xs.steps = {Step::H, Step::U, Step::H, Step::H};
  CHECK(range_first_coordinate(xs) == 3);
}

TEST_CASE("first-coordinate decomposition by hand") {
  const Environment env = Environment::with_rows(0, {1});
  const CPPath path = path_from_steps({Step::H, Step::H, Step::U}, env);
  CHECK(path.positions.back() == Site{2, 1});
  CHECK(horizontal_local_time(path).counts.at(0) == 2);
  CHECK(first_coordinate_decomposition(path, env) == 2);

  const Environment flipped = Environment::with_rows(0, {-1});
  CHECK_THROWS_AS(first_coordinate_decomposition(path, flipped), InvalidArgument);
  CHECK_FALSE(is_valid_path(path, flipped));
}

TEST_CASE("exhaustive identities for n <= 8 over steps and row orientations") {
  for (int n = 0; n <= 8; ++n) {
    std::vector<Step> steps(n);
    std::int64_t sequences = 1;
    for (int i = 0; i < n; ++i) sequences *= 3;
    const int rows = 2 * n + 1;
    for (std::int64_t code = 0; code < sequences; ++code) {
      std::int64_t c = code;
      std::int64_t y = 0;
      std::uint32_t used = 0;  // rows carrying an H step
      for (int i = 0; i < n; ++i) {
        steps[i] = static_cast<Step>(c % 3);
        c /= 3;
        if (steps[i] == Step::H) used |= 1u << (y + n);
        y += steps[i] == Step::U ? 1 : (steps[i] == Step::D ? -1 : 0);
      }
      // Orientations only matter on used rows: enumerate those.
      std::vector<int> bits;
      for (int r = 0; r < rows; ++r) {
        if (used >> r & 1u) bits.push_back(r);
      }
      for (std::uint32_t m = 0; m < (1u << bits.size()); ++m) {
        std::vector<int> orient(rows, 1);
        for (std::size_t b = 0; b < bits.size(); ++b) orient[bits[b]] = (m >> b & 1u) ? -1 : 1;
        const Environment env = Environment::with_rows(-n, orient);
        const CPPath path = path_from_steps(steps, env);
        REQUIRE(is_valid_path(path, env));
        const auto r = range_sites(path);
        REQUIRE(r == quadratic_range(path));
        REQUIRE(r <= n + 1);
        REQUIRE(first_coordinate_decomposition(path, env) == path.positions.back().x);
        std::int64_t lo = 0, hi = 0;
        for (const Site& s : path.positions) {
          lo = std::min(lo, s.x);
          hi = std::max(hi, s.x);
        }
        REQUIRE(range_first_coordinate(path) == hi - lo + 1);
      }
    }
  }
}

TEST_CASE("randomized identities on annealed paths") {
  RngStream lengths = derive_stream(41, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(1 + lengths.below(2000));
    const CPPath path = simulate_annealed(0.5, n, 41, static_cast<std::uint64_t>(trial));
    const Environment env(annealed_environment_seed(41, static_cast<std::uint64_t>(trial)));
    REQUIRE(is_valid_path(path, env));
    REQUIRE(range_sites(path) == quadratic_range(path));
    REQUIRE(first_coordinate_decomposition(path, env) == path.positions.back().x);
    std::int64_t total_h = 0;
    for (const auto& [row, count] : horizontal_local_time(path).counts) total_h += count;
    REQUIRE(total_h == std::count(path.steps.begin(), path.steps.end(), Step::H));
  }
}

TEST_CASE("range is nondecreasing along a path") {
  const CPPath path = simulate_annealed(0.5, 3000, 12);
  std::set<Site> seen;
  std::size_t prev = 0;
  for (const Site& s : path.positions) {
    seen.insert(s);
    REQUIRE(seen.size() >= prev);
    prev = seen.size();
  }
  CHECK(static_cast<std::int64_t>(seen.size()) == range_sites(path));
}
