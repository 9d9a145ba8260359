#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cprw/cp_walk.hpp"

namespace cprw {

/// Largest horizon accepted by the exact CP oracles.
inline constexpr int kMaxExactCpSteps = 14;

/// Exhaustive enumeration of the annealed walk up to `horizon` steps.
///
/// Step types are enumerated with weight p^#H ((1-p)/2)^#V; the orientation
/// of a row is integrated out the first time the walk moves horizontally on
/// it (two branches of weight 1/2). Weights are accumulated as integers per
/// number of horizontal steps, so the result is exact for every p and only
/// the final polynomial evaluation rounds.
class CpEnumeration {
 public:
  /// Throws ResourceCapError when horizon > kMaxExactCpSteps.
  explicit CpEnumeration(int horizon);

  int horizon() const { return horizon_; }

  /// Law of M_horizon.
  std::map<Site, double> law(double p) const;
  /// P(M_j != 0 for 1 <= j <= steps), steps <= horizon.
  double no_return(double p, int steps) const;
  /// P(M_steps = 0), steps <= horizon.
  double return_probability(double p, int steps) const;

 private:
  // Every tally is indexed by the number h of horizontal steps and holds
  // the sum over branches of 2^(horizon - #orientation choices).
  double evaluate(const std::vector<std::uint64_t>& weight, double p, int steps) const;
  void explore(int depth, std::int64_t x, std::int64_t y, int h, int choices, bool returned);

  int horizon_;
  std::vector<std::int8_t> orientation_;
  std::vector<std::vector<std::uint64_t>> endpoint_;   // [site index][h]
  std::vector<std::vector<std::uint64_t>> survivors_;  // [depth][h]
  std::vector<std::vector<std::uint64_t>> at_origin_;  // [depth][h]
};

std::map<Site, double> exact_annealed_law(double p, int n);
double exact_no_return_probability(double p, int steps);
double exact_return_probability(double p, int n);

}  // namespace cprw
