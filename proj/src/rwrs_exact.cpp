#include "cprw/rwrs_exact.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "cprw/error.hpp"

namespace cprw {

namespace {

using Support = std::vector<std::pair<std::int64_t, double>>;

// Explored nodes allowed for the no-return enumeration.
constexpr std::int64_t kNodeCap = 400'000'000;

void check_exact_inputs(const RwrsModel& model, int n) {
  model.validate();
  if (!model.walk.finite_support() || !model.scenery.finite_support()) {
    throw InvalidArgument("exact RWRS oracles need finite-support laws");
  }
  if (n < 0) throw InvalidArgument("horizon must be non-negative");
  if (n > kMaxExactRwrsSteps) {
    throw ResourceCapError("exact RWRS enumeration is capped at " +
                           std::to_string(kMaxExactRwrsSteps) + " steps");
  }
}

class LocalTimeProfiles {
 public:
  LocalTimeProfiles(const Support& walk, int n)
      : walk_(walk), n_(n), counts_(static_cast<std::size_t>(2 * n + 1), 0) {}

  std::map<std::vector<std::int64_t>, double> run() {
    explore(0, 0, 1.0);
    return std::move(profiles_);
  }

 private:
  void explore(int depth, std::int64_t pos, double weight) {
    if (depth == n_) {
      std::vector<std::int64_t> profile;
      for (auto c : counts_) {
        if (c > 0) profile.push_back(c);
      }
      std::sort(profile.begin(), profile.end());
      profiles_[profile] += weight;
      return;
    }
    for (const auto& [step, prob] : walk_) {
      const std::int64_t next = pos + step;
      auto& c = counts_[static_cast<std::size_t>(next + n_)];
      ++c;
      explore(depth + 1, next, weight * prob);
      --c;
    }
  }

  const Support& walk_;
  int n_;
  std::vector<std::int64_t> counts_;
  std::map<std::vector<std::int64_t>, double> profiles_;
};

class NoReturnSearch {
 public:
  NoReturnSearch(const Support& walk, const Support& scenery, int steps)
      : walk_(walk), scenery_(scenery), steps_(steps),
        values_(static_cast<std::size_t>(2 * steps + 1)),
        known_(static_cast<std::size_t>(2 * steps + 1), false) {}

  double run() {
    explore(0, 0, 0, 1.0);
    return survival_;
  }

 private:
  void explore(int depth, std::int64_t pos, std::int64_t z, double weight) {
    if (++nodes_ > kNodeCap) throw ResourceCapError("exact no-return enumeration too large");
    if (depth == steps_) {
      survival_ += weight;
      return;
    }
    for (const auto& [step, prob] : walk_) {
      const std::int64_t next = pos + step;
      const auto idx = static_cast<std::size_t>(next + steps_);
      if (known_[idx]) {
        const std::int64_t nz = z + values_[idx];
        if (nz != 0) explore(depth + 1, next, nz, weight * prob);
        continue;
      }
      known_[idx] = true;
      for (const auto& [xi, xprob] : scenery_) {
        values_[idx] = xi;
        const std::int64_t nz = z + xi;
        if (nz != 0) explore(depth + 1, next, nz, weight * prob * xprob);
      }
      known_[idx] = false;
    }
  }

  const Support& walk_;
  const Support& scenery_;
  int steps_;
  std::vector<std::int64_t> values_;
  std::vector<bool> known_;
  double survival_ = 0.0;
  std::int64_t nodes_ = 0;
};

}  // namespace

std::map<std::int64_t, double> exact_rwrs_law(const RwrsModel& model, int n) {
  check_exact_inputs(model, n);
  const Support walk = model.walk.support();
  const Support scenery = model.scenery.support();
  std::int64_t max_abs_xi = 0;
  for (const auto& [xi, prob] : scenery) max_abs_xi = std::max(max_abs_xi, std::abs(xi));

  // Z_n takes values in [-span, span].
  const std::int64_t span = max_abs_xi * n;
  std::vector<double> total(static_cast<std::size_t>(2 * span + 1), 0.0);
  for (const auto& [profile, weight] : LocalTimeProfiles(walk, n).run()) {
    std::vector<double> law(total.size(), 0.0);
    law[static_cast<std::size_t>(span)] = 1.0;
    for (std::int64_t count : profile) {
      std::vector<double> next(law.size(), 0.0);
      for (std::size_t i = 0; i < law.size(); ++i) {
        if (law[i] == 0.0) continue;
        for (const auto& [xi, prob] : scenery) {
          next[static_cast<std::size_t>(static_cast<std::int64_t>(i) + xi * count)] +=
              law[i] * prob;
        }
      }
      law = std::move(next);
    }
    for (std::size_t i = 0; i < law.size(); ++i) total[i] += weight * law[i];
  }
  std::map<std::int64_t, double> out;
  for (std::size_t i = 0; i < total.size(); ++i) {
    if (total[i] > 0.0) out[static_cast<std::int64_t>(i) - span] = total[i];
  }
  return out;
}

double exact_no_return_z(const RwrsModel& model, int steps) {
  check_exact_inputs(model, steps);
  const Support walk = model.walk.support();
  const Support scenery = model.scenery.support();
  return NoReturnSearch(walk, scenery, steps).run();
}

}  // namespace cprw
