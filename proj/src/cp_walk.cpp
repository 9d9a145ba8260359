#include "cprw/cp_walk.hpp"

#include <cmath>

#include <absl/container/flat_hash_set.h>

#include "cprw/error.hpp"

namespace cprw {

namespace {

constexpr std::uint64_t kEnvironmentPurpose = 0x656e76;  // "env"
constexpr std::uint64_t kSkewPurpose = 0x736b6577;       // "skew"

std::uint64_t probability_threshold(double p) {
  if (p >= 1.0) return ~std::uint64_t{0};
  return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

}  // namespace

Environment Environment::constant(int orientation) {
  if (orientation != 1 && orientation != -1) {
    throw InvalidArgument("orientation must be +1 or -1");
  }
  Environment env(0);
  env.constant_ = orientation;
  return env;
}

Environment Environment::with_rows(std::int64_t first_row, const std::vector<int>& orientations,
                                   std::uint64_t seed) {
  Environment env(seed);
  env.fixed_first_ = first_row;
  for (int o : orientations) {
    if (o != 1 && o != -1) throw InvalidArgument("orientation must be +1 or -1");
    env.fixed_.push_back(static_cast<std::int8_t>(o));
  }
  return env;
}

int Environment::draw(std::int64_t row) const {
  if (constant_ != 0) return constant_;
  const std::int64_t k = row - fixed_first_;
  if (k >= 0 && k < static_cast<std::int64_t>(fixed_.size())) return fixed_[static_cast<std::size_t>(k)];
  RngStream stream = derive_stream(seed_, zigzag(row));
  return (stream.next_u64() >> 63) ? 1 : -1;
}

int Environment::orientation(std::int64_t row) const {
  return cache_.get(row, [this](std::int64_t r) { return static_cast<std::int8_t>(draw(r)); });
}

void validate_horizontal_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0, 1)");
}

CpWalker::CpWalker(double p, const Environment& env, RngStream& rng)
    : env_(&env), rng_(&rng) {
  validate_horizontal_probability(p);
  h_threshold_ = probability_threshold(p);
  const std::uint64_t vertical = probability_threshold((1.0 - p) / 2.0);
  up_threshold_ = h_threshold_ + vertical;
}

Step CpWalker::advance() {
  const std::uint64_t u = rng_->next_u64();
  if (u < h_threshold_) {
    pos_.x += env_->orientation(pos_.y);
    return Step::H;
  }
  if (u < up_threshold_) {
    ++pos_.y;
    return Step::U;
  }
  --pos_.y;
  return Step::D;
}

std::uint64_t annealed_environment_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return child_seed(master_seed, kEnvironmentPurpose, trial);
}

CPPath simulate_quenched(const Environment& env, double p, std::size_t n, RngStream& rng) {
  CpWalker walker(p, env, rng);
  CPPath path;
  path.p = p;
  path.positions.reserve(n + 1);
  path.steps.reserve(n);
  path.positions.push_back(walker.position());
  for (std::size_t k = 0; k < n; ++k) {
    path.steps.push_back(walker.advance());
    path.positions.push_back(walker.position());
  }
  return path;
}

CPPath simulate_annealed(double p, std::size_t n, std::uint64_t master_seed,
                         std::uint64_t trial) {
  validate_horizontal_probability(p);
  const Environment env(annealed_environment_seed(master_seed, trial));
  RngStream rng = derive_stream(master_seed, trial);
  return simulate_quenched(env, p, n, rng);
}

namespace {

// Omega = {-1,1}^Z x {-1,0,1}^Z with T((eps_k),(w_k)) = ((eps_{k+w_0}), (w_{k+1})).
// Both coordinates are realized lazily; the state is the pair of offsets
// into the underlying two-sided sequences.
class SkewProductSystem {
 public:
  SkewProductSystem(double p, RngStream& rng)
      : rng_(rng),
        eps_seed_(child_seed(rng.next_u64(), kSkewPurpose, 0)),
        zero_threshold_(probability_threshold(p)),
        plus_threshold_(zero_threshold_ + probability_threshold((1.0 - p) / 2.0)) {}

  // f(eps, w) = (eps_0, 0) if w_0 = 0, (0, w_0) otherwise.
  Site observe() {
    const int w0 = omega(omega_offset_);
    if (w0 == 0) return {epsilon(eps_offset_), 0};
    return {0, w0};
  }

  void apply_transformation() {
    eps_offset_ += omega(omega_offset_);
    ++omega_offset_;
  }

 private:
  int omega(std::int64_t k) {
    while (static_cast<std::int64_t>(omegas_.size()) <= k) {
      const std::uint64_t u = rng_.next_u64();
      omegas_.push_back(u < zero_threshold_ ? 0 : (u < plus_threshold_ ? 1 : -1));
    }
    return omegas_[static_cast<std::size_t>(k)];
  }

  int epsilon(std::int64_t k) {
    return eps_.get(k, [this](std::int64_t i) {
      RngStream s = derive_stream(eps_seed_, zigzag(i));
      return static_cast<std::int8_t>((s.next_u64() >> 63) ? 1 : -1);
    });
  }

  RngStream& rng_;
  std::uint64_t eps_seed_;
  std::uint64_t zero_threshold_;
  std::uint64_t plus_threshold_;
  std::vector<std::int8_t> omegas_;
  SiteTable<std::int8_t> eps_;
  std::int64_t eps_offset_ = 0;
  std::int64_t omega_offset_ = 0;
};

}  // namespace

CPPath skew_product_path(double p, std::size_t n, RngStream& rng) {
  validate_horizontal_probability(p);
  SkewProductSystem system(p, rng);
  CPPath path;
  path.p = p;
  path.positions.reserve(n + 1);
  path.steps.reserve(n);
  Site pos{};
  path.positions.push_back(pos);
  for (std::size_t k = 0; k < n; ++k) {
    const Site inc = system.observe();
    system.apply_transformation();
    pos.x += inc.x;
    pos.y += inc.y;
    path.steps.push_back(inc.y == 0 ? Step::H : (inc.y > 0 ? Step::U : Step::D));
    path.positions.push_back(pos);
  }
  return path;
}

std::int64_t range_sites(const CPPath& path) {
  absl::flat_hash_set<std::uint64_t> visited;
  visited.reserve(path.positions.size());
  for (const Site& s : path.positions) visited.insert(pack_site(s));
  return static_cast<std::int64_t>(visited.size());
}

std::int64_t range_first_coordinate(const CPPath& path) {
  absl::flat_hash_set<std::int64_t> columns;
  for (const Site& s : path.positions) columns.insert(s.x);
  return static_cast<std::int64_t>(columns.size());
}

HorizontalLocalTime horizontal_local_time(const CPPath& path) {
  HorizontalLocalTime out;
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    if (path.steps[k] == Step::H) ++out.counts[path.positions[k].y];
  }
  return out;
}

std::int64_t first_coordinate_decomposition(const CPPath& path, const Environment& env) {
  if (!is_valid_path(path, env)) {
    throw InvalidArgument("path is not consistent with the environment");
  }
  std::int64_t total = 0;
  for (const auto& [row, count] : horizontal_local_time(path).counts) {
    total += env.orientation(row) * count;
  }
  return total;
}

bool is_valid_path(const CPPath& path, const Environment& env) {
  if (path.positions.size() != path.steps.size() + 1) return false;
  if (path.positions.front() != Site{}) return false;
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const Site a = path.positions[k];
    const Site b = path.positions[k + 1];
    if (std::abs(b.x - a.x) + std::abs(b.y - a.y) != 1) return false;
    switch (path.steps[k]) {
      case Step::H:
        if (b.y != a.y || b.x - a.x != env.orientation(a.y)) return false;
        break;
      case Step::U:
        if (b.y != a.y + 1) return false;
        break;
      case Step::D:
        if (b.y != a.y - 1) return false;
        break;
    }
  }
  return true;
}

}  // namespace cprw
