#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace cprw {

/// Exact floating-point accumulator (Shewchuk non-overlapping partials).
/// value() is the correctly rounded sum of everything added, so the result
/// does not depend on the order of additions or merges.
class ExactSum {
 public:
  void add(double x);
  void merge(const ExactSum& other);
  double value() const;
  /// Non-overlapping terms whose exact sum is the accumulated total.
  const std::vector<double>& partials() const { return partials_; }

 private:
  std::vector<double> partials_;
};

/// Running sample statistics with order-independent merging.
class TrialStats {
 public:
  void add(double x);
  void merge(const TrialStats& other);

  std::int64_t count() const { return count_; }
  double sum() const { return sum_.value(); }
  double mean() const;
  /// Unbiased sample variance; 0 for fewer than two samples.
  double variance() const;
  /// Normal-approximation half-width of the two-sided CI for the mean;
  /// empty for fewer than two samples.
  std::optional<double> ci_half_width(double confidence) const;

  friend bool operator==(const TrialStats& a, const TrialStats& b) {
    return a.count_ == b.count_ && a.sum() == b.sum() &&
           a.sum_squares_.value() == b.sum_squares_.value();
  }

 private:
  std::int64_t count_ = 0;
  ExactSum sum_;
  ExactSum sum_squares_;
};

/// Two-sided standard normal quantile z with P(|N| <= z) = confidence.
double normal_two_sided_quantile(double confidence);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit. `observed[i]` counts outcomes of category i
/// with model probability `expected[i]`; categories with expected count
/// below 5 are pooled. Mass missing from `expected` forms one extra
/// category whose observed count is `observed_outside`.
ChiSquareResult chi_square_gof(const std::vector<std::int64_t>& observed,
                               const std::vector<double>& expected,
                               std::int64_t observed_outside = 0);

/// Same, keyed by outcome.
template <class K>
ChiSquareResult chi_square_gof(const std::map<K, std::int64_t>& observed,
                               const std::map<K, double>& expected) {
  std::vector<std::int64_t> obs;
  std::vector<double> exp;
  std::int64_t outside = 0;
  for (const auto& [key, prob] : expected) {
    auto it = observed.find(key);
    obs.push_back(it == observed.end() ? 0 : it->second);
    exp.push_back(prob);
  }
  for (const auto& [key, count] : observed) {
    if (!expected.contains(key)) outside += count;
  }
  return chi_square_gof(obs, exp, outside);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic distribution.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

/// Total variation distance between two laws on the same key type.
template <class K>
double total_variation(const std::map<K, double>& a, const std::map<K, double>& b) {
  double total = 0.0;
  for (const auto& [key, pa] : a) {
    auto it = b.find(key);
    total += std::abs(pa - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [key, pb] : b) {
    if (!a.contains(key)) total += std::abs(pb);
  }
  return total / 2.0;
}

}  // namespace cprw
