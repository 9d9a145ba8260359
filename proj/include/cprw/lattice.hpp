#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cprw/rng.hpp"
#include "cprw/stable.hpp"

namespace cprw {

/// Integer-valued law in the normal domain of attraction of a stable law.
///
///   rademacher        +-1 with probability 1/2 each
///   simple_symmetric  same law, named as a walk increment
///   ternary(p0)       0 w.p. p0, +-1 w.p. (1 - p0)/2 each
///   lazy_vertical(p)  0 w.p. p, +-1 w.p. (1 - p)/2 each
///   pareto_tail(a, c) P(k) = c |k|^(-1-a) for k != 0, atom at 0 takes the rest
class LatticeLaw {
 public:
  enum class Kind { rademacher, simple_symmetric, ternary, lazy_vertical, pareto_tail };

  static LatticeLaw rademacher();
  static LatticeLaw simple_symmetric();
  static LatticeLaw ternary(double p0);
  static LatticeLaw lazy_vertical(double p);
  /// tail_constant <= 0 selects the largest admissible constant (no atom at 0).
  static LatticeLaw pareto_tail(double index, double tail_constant = 0.0);

  Kind kind() const { return kind_; }
  /// Weight of 0 for ternary/lazy_vertical/pareto_tail.
  double zero_mass() const;
  /// Stable index of the attractor: 2 for the finite-support kinds.
  double stable_index() const;
  double tail_constant() const { return tail_constant_; }
  bool finite_support() const { return kind_ != Kind::pareto_tail; }

  double pmf(std::int64_t k) const;
  /// P(|X| > t) for t >= 0, exact.
  double tail_probability(std::int64_t t) const;
  /// (value, probability) pairs with positive mass; finite-support kinds only.
  std::vector<std::pair<std::int64_t, double>> support() const;

  /// The strictly stable law the normalized sums converge to.
  StableLaw attractor() const;

  std::string name() const;

  friend bool operator==(const LatticeLaw&, const LatticeLaw&) = default;

 private:
  LatticeLaw(Kind kind, double param, double index, double tail_constant)
      : kind_(kind), param_(param), index_(index), tail_constant_(tail_constant) {}

  Kind kind_;
  double param_;
  double index_;
  double tail_constant_;
};

std::int64_t sample_lattice(const LatticeLaw& law, RngStream& rng);

/// Parses the names produced by LatticeLaw::name() / kind names.
LatticeLaw::Kind lattice_kind_from_string(const std::string& name);
std::string to_string(LatticeLaw::Kind kind);

}  // namespace cprw
