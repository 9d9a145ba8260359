#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cprw/lattice.hpp"
#include "cprw/rng.hpp"
#include "cprw/site_table.hpp"

namespace cprw {

/// Random walk S with i.i.d. increments from `walk` and scenery xi with
/// i.i.d. values from `scenery`; Z_n = xi_{S_1} + ... + xi_{S_n}.
struct RwrsModel {
  LatticeLaw walk = LatticeLaw::simple_symmetric();
  LatticeLaw scenery = LatticeLaw::rademacher();
  double alpha = 2.0;
  double beta = 2.0;

  /// Model whose exponents are read off the laws.
  static RwrsModel from_laws(const LatticeLaw& walk, const LatticeLaw& scenery);

  /// alpha and beta must match the laws' stable indices; beta = 1 is
  /// rejected when alpha <= 1.
  void validate() const;

  friend bool operator==(const RwrsModel&, const RwrsModel&) = default;
};

/// Occupation counts y -> N_n(y) = #{1 <= k <= n : S_k = y}.
class LocalTimeMap {
 public:
  LocalTimeMap() = default;
  /// Counts of the positions S_1..S_n (the first element S_0 is skipped).
  static LocalTimeMap from_walk(const std::vector<std::int64_t>& walk);

  void visit(std::int64_t site) {
    ++counts_[site];
    ++steps_;
  }

  const std::map<std::int64_t, std::int64_t>& counts() const { return counts_; }
  std::int64_t steps() const { return steps_; }
  std::int64_t at(std::int64_t site) const;

 private:
  std::map<std::int64_t, std::int64_t> counts_;
  std::int64_t steps_ = 0;
};

struct ZPath {
  std::vector<std::int64_t> values;  // Z_0 = 0, ..., Z_n
  std::size_t n() const { return values.empty() ? 0 : values.size() - 1; }
};

/// Lazy scenery: xi_y drawn from derive_stream(seed, zigzag(y)).
class Scenery {
 public:
  Scenery(LatticeLaw law, std::uint64_t seed) : law_(law), seed_(seed) {}

  std::int64_t value(std::int64_t site) const;
  const LatticeLaw& law() const { return law_; }

 private:
  LatticeLaw law_;
  std::uint64_t seed_;
  mutable SiteTable<std::int64_t> cache_;
};

/// Joint realization of the walk, the scenery it saw, and Z.
struct RwrsSample {
  std::vector<std::int64_t> walk;  // S_0 = 0, ..., S_n
  ZPath z;
  LocalTimeMap local_time;
  std::map<std::int64_t, std::int64_t> scenery;  // xi_y for every visited y
};

/// Streaming engine: one step of S and Z per call. Borrows the stream and scenery.
class RwrsWalker {
 public:
  RwrsWalker(const RwrsModel& model, const Scenery& scenery, RngStream& rng);

  void advance();
  std::int64_t position() const { return position_; }
  std::int64_t z() const { return z_; }

 private:
  const LatticeLaw* walk_;
  const Scenery* scenery_;
  RngStream* rng_;
  std::int64_t position_ = 0;
  std::int64_t z_ = 0;
};

std::uint64_t scenery_seed(std::uint64_t master_seed, std::uint64_t trial);

RwrsSample simulate_rwrs(const RwrsModel& model, std::size_t n, std::uint64_t master_seed,
                         std::uint64_t trial = 0);

/// V_n = sum_y N_n(y)^2.
std::int64_t self_intersections(const LocalTimeMap& lt);

/// V_n(beta) = sum_y N_n(y)^beta, summed in site order.
double v_beta(const LocalTimeMap& lt, double beta);

/// Number of distinct values among Z_0..Z_n.
std::int64_t range_z(const ZPath& z);

/// sum over levels x of (#{1 <= k <= n : Z_k = x})^2.
std::int64_t z_self_intersections(const ZPath& z);

/// 1 - 1/alpha + 1/(alpha beta).
double exponent_delta(double alpha, double beta);

/// Size of Z_n:
///   n^delta                                 alpha in (1, 2]
///   n^(1/beta) (log n)^(1 - 1/beta)          alpha = 1
///   n^(1/beta)                               alpha in (0, 1)
double normalizer_a(double alpha, double beta, double n);

}  // namespace cprw
