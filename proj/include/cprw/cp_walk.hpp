#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cprw/rng.hpp"
#include "cprw/site_table.hpp"

namespace cprw {

struct Site {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend auto operator<=>(const Site&, const Site&) = default;
};

/// Packs a site into one word for hash sets; exact for |x|, |y| < 2^31.
constexpr std::uint64_t pack_site(Site s) noexcept {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.x)) << 32) |
         static_cast<std::uint32_t>(s.y);
}

enum class Step : std::uint8_t { H, U, D };

/// Random orientation of the horizontal lines: row y carries eps_y in {-1, +1}.
/// Values are drawn lazily from derive_stream(seed, zigzag(y)) and cached.
class Environment {
 public:
  explicit Environment(std::uint64_t seed) : seed_(seed) {}

  /// Every row oriented the same way (orientation must be +-1).
  static Environment constant(int orientation);
  /// Rows first_row, first_row + 1, ... take the given orientations (each
  /// +-1); all other rows are drawn from `seed` as usual.
  static Environment with_rows(std::int64_t first_row, const std::vector<int>& orientations,
                               std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }
  int orientation(std::int64_t row) const;

 private:
  int draw(std::int64_t row) const;

  std::uint64_t seed_;
  int constant_ = 0;
  std::int64_t fixed_first_ = 0;
  std::vector<std::int8_t> fixed_;
  mutable SiteTable<std::int8_t> cache_;
};

/// Realized trajectory M_0 = (0,0), ..., M_n of the oriented-lattice walk.
struct CPPath {
  double p = 0.5;
  std::vector<Site> positions;
  std::vector<Step> steps;

  std::size_t n() const { return steps.size(); }
};

/// Per-row count of horizontal steps, y -> #{k <= n : S_k = S_{k-1} = y}.
struct HorizontalLocalTime {
  std::map<std::int64_t, std::int64_t> counts;
};

/// Throws InvalidArgument unless 0 < p < 1.
void validate_horizontal_probability(double p);

/// Streaming one-step engine for the quenched kernel; used by the
/// path-building operations and by the Monte Carlo harness. Borrows the
/// environment and the stream.
class CpWalker {
 public:
  CpWalker(double p, const Environment& env, RngStream& rng);

  Step advance();
  Site position() const { return pos_; }

 private:
  const Environment* env_;
  RngStream* rng_;
  std::uint64_t h_threshold_;
  std::uint64_t up_threshold_;
  Site pos_{};
};

/// Annealed law: a fresh environment per (master_seed, trial).
CPPath simulate_annealed(double p, std::size_t n, std::uint64_t master_seed,
                         std::uint64_t trial = 0);

CPPath simulate_quenched(const Environment& env, double p, std::size_t n, RngStream& rng);

/// Walk generated as partial sums of f o T^k over the skew-product system
/// (shift of the orientation sequence by the current vertical move).
CPPath skew_product_path(double p, std::size_t n, RngStream& rng);

/// Seed of the environment used by simulate_annealed for a given trial.
std::uint64_t annealed_environment_seed(std::uint64_t master_seed, std::uint64_t trial);

/// Number of distinct sites among M_0..M_n.
std::int64_t range_sites(const CPPath& path);

/// Number of distinct first coordinates among M_0..M_n.
std::int64_t range_first_coordinate(const CPPath& path);

HorizontalLocalTime horizontal_local_time(const CPPath& path);

/// sum_y eps_y * Ntilde_n(y); equals x_n for a path generated in `env`.
/// Throws InvalidArgument if a horizontal step disagrees with the environment.
std::int64_t first_coordinate_decomposition(const CPPath& path, const Environment& env);

/// Unit moves, positions consistent with steps, horizontal moves follow env.
bool is_valid_path(const CPPath& path, const Environment& env);

}  // namespace cprw
