#include "cprw/cp_exact.hpp"

#include <cmath>
#include <string>

#include "cprw/error.hpp"

namespace cprw {

CpEnumeration::CpEnumeration(int horizon) : horizon_(horizon) {
  if (horizon < 0) throw InvalidArgument("horizon must be non-negative");
  if (horizon > kMaxExactCpSteps) {
    throw ResourceCapError("exact CP enumeration is capped at " +
                           std::to_string(kMaxExactCpSteps) + " steps");
  }
  const auto width = static_cast<std::size_t>(2 * horizon + 1);
  const auto heights = static_cast<std::size_t>(horizon + 1);
  orientation_.assign(width, 0);
  endpoint_.assign(width * width, std::vector<std::uint64_t>(heights, 0));
  survivors_.assign(heights, std::vector<std::uint64_t>(heights, 0));
  at_origin_.assign(heights, std::vector<std::uint64_t>(heights, 0));
  explore(0, 0, 0, 0, 0, false);
}

void CpEnumeration::explore(int depth, std::int64_t x, std::int64_t y, int h, int choices,
                            bool returned) {
  const std::uint64_t w = std::uint64_t{1} << (horizon_ - choices);
  const auto hi = static_cast<std::size_t>(h);
  if (!returned) survivors_[static_cast<std::size_t>(depth)][hi] += w;
  if (x == 0 && y == 0) at_origin_[static_cast<std::size_t>(depth)][hi] += w;
  if (depth == horizon_) {
    const auto width = static_cast<std::size_t>(2 * horizon_ + 1);
    const auto idx = static_cast<std::size_t>(x + horizon_) * width +
                     static_cast<std::size_t>(y + horizon_);
    endpoint_[idx][hi] += w;
    return;
  }
  auto visit = [&](std::int64_t nx, std::int64_t ny, int nh, int nc) {
    explore(depth + 1, nx, ny, nh, nc, returned || (nx == 0 && ny == 0));
  };
  auto& dir = orientation_[static_cast<std::size_t>(y + horizon_)];
  if (dir != 0) {
    visit(x + dir, y, h + 1, choices);
  } else {
    for (std::int8_t s : {std::int8_t{1}, std::int8_t{-1}}) {
      dir = s;
      visit(x + s, y, h + 1, choices + 1);
    }
    dir = 0;
  }
  visit(x, y + 1, h, choices);
  visit(x, y - 1, h, choices);
}

double CpEnumeration::evaluate(const std::vector<std::uint64_t>& weight, double p,
                               int steps) const {
  validate_horizontal_probability(p);
  const double q = (1.0 - p) / 2.0;
  double total = 0.0;
  for (int h = 0; h <= steps; ++h) {
    const auto w = weight[static_cast<std::size_t>(h)];
    if (w == 0) continue;
    total += static_cast<double>(w) * std::pow(p, h) * std::pow(q, steps - h);
  }
  return std::ldexp(total, -horizon_);
}

std::map<Site, double> CpEnumeration::law(double p) const {
  std::map<Site, double> out;
  const std::int64_t width = 2 * horizon_ + 1;
  for (std::int64_t idx = 0; idx < width * width; ++idx) {
    const double prob = evaluate(endpoint_[static_cast<std::size_t>(idx)], p, horizon_);
    if (prob > 0.0) out[{idx / width - horizon_, idx % width - horizon_}] = prob;
  }
  return out;
}

double CpEnumeration::no_return(double p, int steps) const {
  if (steps < 0 || steps > horizon_) throw InvalidArgument("steps outside enumerated horizon");
  return evaluate(survivors_[static_cast<std::size_t>(steps)], p, steps);
}

double CpEnumeration::return_probability(double p, int steps) const {
  if (steps < 0 || steps > horizon_) throw InvalidArgument("steps outside enumerated horizon");
  return evaluate(at_origin_[static_cast<std::size_t>(steps)], p, steps);
}

std::map<Site, double> exact_annealed_law(double p, int n) {
  validate_horizontal_probability(p);
  return CpEnumeration(n).law(p);
}

double exact_no_return_probability(double p, int steps) {
  validate_horizontal_probability(p);
  return CpEnumeration(steps).no_return(p, steps);
}

double exact_return_probability(double p, int n) {
  validate_horizontal_probability(p);
  return CpEnumeration(n).return_probability(p, n);
}

}  // namespace cprw
