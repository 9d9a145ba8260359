#include "cprw/lattice.hpp"

#include <cmath>
#include <numbers>

#include "cprw/error.hpp"

namespace cprw {

namespace {

// Largest |k| the Pareto sampler returns; beyond it the draw is repeated.
// The discarded mass is below 2^(-62 * index).
constexpr double kParetoCap = 0x1.0p62;

double zeta(double s) { return std::riemann_zeta(s); }

// Devroye's rejection sampler for P(K = k) proportional to k^(-s), s > 1.
std::int64_t sample_zeta(double s, RngStream& rng) {
  const double b = std::pow(2.0, s - 1.0);
  for (;;) {
    const double u = rng.uniform();
    const double v = rng.uniform();
    const double x = std::floor(std::pow(u, -1.0 / (s - 1.0)));
    if (!(x < kParetoCap)) continue;
    const double t = std::pow(1.0 + 1.0 / x, s - 1.0);
    if (v * x * (t - 1.0) / (b - 1.0) <= t / b) return static_cast<std::int64_t>(x);
  }
}

}  // namespace

LatticeLaw LatticeLaw::rademacher() { return {Kind::rademacher, 0.0, 2.0, 0.0}; }

LatticeLaw LatticeLaw::simple_symmetric() { return {Kind::simple_symmetric, 0.0, 2.0, 0.0}; }

LatticeLaw LatticeLaw::ternary(double p0) {
  if (!(p0 >= 0.0 && p0 < 1.0)) throw InvalidArgument("ternary law needs p0 in [0, 1)");
  return {Kind::ternary, p0, 2.0, 0.0};
}

LatticeLaw LatticeLaw::lazy_vertical(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("lazy_vertical law needs p in (0, 1)");
  return {Kind::lazy_vertical, p, 2.0, 0.0};
}

LatticeLaw LatticeLaw::pareto_tail(double index, double tail_constant) {
  if (!(index > 0.0 && index < 2.0)) {
    throw InvalidArgument("pareto_tail index must lie in (0, 2)");
  }
  const double max_constant = 1.0 / (2.0 * zeta(1.0 + index));
  if (tail_constant <= 0.0) tail_constant = max_constant;
  if (tail_constant > max_constant * (1.0 + 1e-12)) {
    throw InvalidArgument("pareto_tail constant leaves negative mass at 0");
  }
  tail_constant = std::min(tail_constant, max_constant);
  const double p0 = std::max(0.0, 1.0 - 2.0 * tail_constant * zeta(1.0 + index));
  return {Kind::pareto_tail, p0, index, tail_constant};
}

double LatticeLaw::zero_mass() const {
  switch (kind_) {
    case Kind::rademacher:
    case Kind::simple_symmetric:
      return 0.0;
    case Kind::ternary:
    case Kind::lazy_vertical:
    case Kind::pareto_tail:
      return param_;
  }
  return 0.0;
}

double LatticeLaw::stable_index() const { return index_; }

double LatticeLaw::pmf(std::int64_t k) const {
  if (k == 0) return zero_mass();
  if (kind_ == Kind::pareto_tail) {
    return tail_constant_ * std::pow(static_cast<double>(std::abs(k)), -1.0 - index_);
  }
  return (k == 1 || k == -1) ? (1.0 - zero_mass()) / 2.0 : 0.0;
}

double LatticeLaw::tail_probability(std::int64_t t) const {
  if (t < 0) return 1.0;
  if (kind_ != Kind::pareto_tail) return t == 0 ? 1.0 - zero_mass() : 0.0;
  double head = 0.0;
  for (std::int64_t k = t; k >= 1; --k) head += std::pow(static_cast<double>(k), -1.0 - index_);
  return 2.0 * tail_constant_ * (zeta(1.0 + index_) - head);
}

std::vector<std::pair<std::int64_t, double>> LatticeLaw::support() const {
  if (!finite_support()) throw InvalidArgument("pareto_tail law has infinite support");
  std::vector<std::pair<std::int64_t, double>> out;
  const double side = (1.0 - zero_mass()) / 2.0;
  out.emplace_back(-1, side);
  if (zero_mass() > 0.0) out.emplace_back(0, zero_mass());
  out.emplace_back(1, side);
  return out;
}

StableLaw LatticeLaw::attractor() const {
  if (finite_support()) {
    // Variance v gives exp(-v u^2 / 2).
    return StableLaw{2.0, (1.0 - zero_mass()) / 2.0, 0.0};
  }
  // Symmetric tails P(|X| > t) ~ C t^-a give 1 - phi(u) ~ C Gamma(1-a) cos(pi a/2) |u|^a.
  const double a = index_;
  const double c = 2.0 * tail_constant_ / a;
  const double a1 = a == 1.0 ? c * std::numbers::pi / 2.0
                             : c * std::tgamma(1.0 - a) * std::cos(std::numbers::pi * a / 2.0);
  return StableLaw{a, a1, 0.0};
}

std::string to_string(LatticeLaw::Kind kind) {
  switch (kind) {
    case LatticeLaw::Kind::rademacher: return "rademacher";
    case LatticeLaw::Kind::simple_symmetric: return "simple_symmetric";
    case LatticeLaw::Kind::ternary: return "ternary";
    case LatticeLaw::Kind::lazy_vertical: return "lazy_vertical";
    case LatticeLaw::Kind::pareto_tail: return "pareto_tail";
  }
  return "unknown";
}

LatticeLaw::Kind lattice_kind_from_string(const std::string& name) {
  for (auto kind : {LatticeLaw::Kind::rademacher, LatticeLaw::Kind::simple_symmetric,
                    LatticeLaw::Kind::ternary, LatticeLaw::Kind::lazy_vertical,
                    LatticeLaw::Kind::pareto_tail}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidArgument("unknown lattice law kind '" + name + "'");
}

std::string LatticeLaw::name() const { return to_string(kind_); }

std::int64_t sample_lattice(const LatticeLaw& law, RngStream& rng) {
  switch (law.kind()) {
    case LatticeLaw::Kind::rademacher:
    case LatticeLaw::Kind::simple_symmetric:
      return (rng.next_u64() >> 63) ? 1 : -1;
    case LatticeLaw::Kind::ternary:
    case LatticeLaw::Kind::lazy_vertical: {
      const double u = rng.uniform();
      const double p0 = law.zero_mass();
      if (u < p0) return 0;
      return u < p0 + (1.0 - p0) / 2.0 ? 1 : -1;
    }
    case LatticeLaw::Kind::pareto_tail: {
      const double p0 = law.zero_mass();
      if (p0 > 0.0 && rng.uniform() < p0) return 0;
      const std::int64_t magnitude = sample_zeta(1.0 + law.stable_index(), rng);
      return (rng.next_u64() >> 63) ? magnitude : -magnitude;
    }
  }
  return 0;
}

}  // namespace cprw
