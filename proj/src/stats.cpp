#include "cprw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "cprw/error.hpp"

namespace cprw {

void ExactSum::add(double x) {
  std::size_t kept = 0;
  for (double y : partials_) {
    if (std::abs(x) < std::abs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[kept++] = lo;
    x = hi;
  }
  partials_.resize(kept);
  partials_.push_back(x);
}

void ExactSum::merge(const ExactSum& other) {
  for (double p : other.partials_) add(p);
}

double ExactSum::value() const {
  std::size_t n = partials_.size();
  if (n == 0) return 0.0;
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  // Round half-even across the remaining partials.
  if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

void TrialStats::add(double x) {
  ++count_;
  sum_.add(x);
  const double sq = x * x;
  sum_squares_.add(sq);
  sum_squares_.add(std::fma(x, x, -sq));
}

void TrialStats::merge(const TrialStats& other) {
  count_ += other.count_;
  sum_.merge(other.sum_);
  sum_squares_.merge(other.sum_squares_);
}

double TrialStats::mean() const {
  return count_ == 0 ? 0.0 : sum() / static_cast<double>(count_);
}

double TrialStats::variance() const {
  if (count_ < 2) return 0.0;
  // n * sum(x^2) - (sum x)^2, accumulated without rounding
  const double n = static_cast<double>(count_);
  ExactSum d;
  auto add_product = [&d](double a, double b) {
    const double hi = a * b;
    d.add(hi);
    d.add(std::fma(a, b, -hi));
  };
  for (double q : sum_squares_.partials()) add_product(n, q);
  const auto& s = sum_.partials();
  for (double a : s) {
    for (double b : s) add_product(-a, b);
  }
  return std::max(0.0, d.value() / (n * (n - 1.0)));
}

std::optional<double> TrialStats::ci_half_width(double confidence) const {
  if (count_ < 2) return std::nullopt;
  return normal_two_sided_quantile(confidence) *
         std::sqrt(variance() / static_cast<double>(count_));
}

double normal_two_sided_quantile(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidArgument("confidence must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(),
                               0.5 + confidence / 2.0);
}

ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed,
                               const std::vector<double>& expected,
                               std::int64_t observed_outside) {
  if (observed.size() != expected.size()) {
    throw InvalidArgument("observed and expected categories differ in number");
  }
  std::int64_t total = observed_outside;
  double mass = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    total += observed[i];
    mass += expected[i];
  }
  if (total == 0) throw InvalidArgument("chi-square test needs observations");
  const double n = static_cast<double>(total);

  std::vector<std::pair<double, double>> cells;  // (observed, expected count)
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected[i] * n;
    if (e < 5.0) {
      pooled_obs += static_cast<double>(observed[i]);
      pooled_exp += e;
    } else {
      cells.emplace_back(static_cast<double>(observed[i]), e);
    }
  }
  pooled_obs += static_cast<double>(observed_outside);
  pooled_exp += std::max(0.0, 1.0 - mass) * n;
  if (pooled_obs > 0.0 || pooled_exp > 0.0) {
    if (pooled_exp <= 0.0) return {std::numeric_limits<double>::infinity(), 0, 0.0};
    cells.emplace_back(pooled_obs, pooled_exp);
  }

  ChiSquareResult r;
  for (const auto& [o, e] : cells) r.statistic += (o - e) * (o - e) / e;
  r.degrees_of_freedom = static_cast<int>(cells.size()) - 1;
  if (r.degrees_of_freedom < 1) {
    r.p_value = 1.0;
    return r;
  }
  r.p_value = boost::math::cdf(
      boost::math::complement(boost::math::chi_squared_distribution<double>(r.degrees_of_freedom),
                              r.statistic));
  return r;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double total = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    total += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  return std::clamp(2.0 * total, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("KS test needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

}  // namespace cprw
