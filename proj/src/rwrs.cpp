#include "cprw/rwrs.hpp"

#include <cmath>

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include "cprw/error.hpp"

namespace cprw {

namespace {
constexpr std::uint64_t kSceneryPurpose = 0x7363656e;  // "scen"

void validate_index(double v, const char* what) {
  if (!(v > 0.0 && v <= 2.0)) throw InvalidArgument(std::string(what) + " must lie in (0, 2]");
}
}  // namespace

RwrsModel RwrsModel::from_laws(const LatticeLaw& walk, const LatticeLaw& scenery) {
  RwrsModel m{walk, scenery, walk.stable_index(), scenery.stable_index()};
  m.validate();
  return m;
}

void RwrsModel::validate() const {
  validate_index(alpha, "alpha");
  validate_index(beta, "beta");
  if (alpha != walk.stable_index()) {
    throw InvalidArgument("alpha does not match the walk law's stable index");
  }
  if (beta != scenery.stable_index()) {
    throw InvalidArgument("beta does not match the scenery law's stable index");
  }
  if (beta == 1.0 && alpha <= 1.0) {
    throw InvalidArgument("beta = 1 is excluded when alpha <= 1");
  }
}

LocalTimeMap LocalTimeMap::from_walk(const std::vector<std::int64_t>& walk) {
  LocalTimeMap lt;
  for (std::size_t k = 1; k < walk.size(); ++k) lt.visit(walk[k]);
  return lt;
}

std::int64_t LocalTimeMap::at(std::int64_t site) const {
  auto it = counts_.find(site);
  return it == counts_.end() ? 0 : it->second;
}

std::int64_t Scenery::value(std::int64_t site) const {
  return cache_.get(site, [this](std::int64_t y) {
    RngStream stream = derive_stream(seed_, zigzag(y));
    return sample_lattice(law_, stream);
  });
}

RwrsWalker::RwrsWalker(const RwrsModel& model, const Scenery& scenery, RngStream& rng)
    : walk_(&model.walk), scenery_(&scenery), rng_(&rng) {
  model.validate();
}

void RwrsWalker::advance() {
  position_ += sample_lattice(*walk_, *rng_);
  z_ += scenery_->value(position_);
}

std::uint64_t scenery_seed(std::uint64_t master_seed, std::uint64_t trial) {
  return child_seed(master_seed, kSceneryPurpose, trial);
}

RwrsSample simulate_rwrs(const RwrsModel& model, std::size_t n, std::uint64_t master_seed,
                         std::uint64_t trial) {
  model.validate();
  const Scenery scenery(model.scenery, scenery_seed(master_seed, trial));
  RngStream rng = derive_stream(master_seed, trial);
  RwrsWalker walker(model, scenery, rng);
  RwrsSample out;
  out.walk.reserve(n + 1);
  out.z.values.reserve(n + 1);
  out.walk.push_back(0);
  out.z.values.push_back(0);
  for (std::size_t k = 0; k < n; ++k) {
    walker.advance();
    out.walk.push_back(walker.position());
    out.z.values.push_back(walker.z());
    out.local_time.visit(walker.position());
    out.scenery.emplace(walker.position(), scenery.value(walker.position()));
  }
  return out;
}

std::int64_t self_intersections(const LocalTimeMap& lt) {
  std::int64_t total = 0;
  for (const auto& [site, count] : lt.counts()) total += count * count;
  return total;
}

double v_beta(const LocalTimeMap& lt, double beta) {
  validate_index(beta, "beta");
  double total = 0.0;
  for (const auto& [site, count] : lt.counts()) {
    total += std::pow(static_cast<double>(count), beta);
  }
  return total;
}

std::int64_t range_z(const ZPath& z) {
  absl::flat_hash_set<std::int64_t> levels(z.values.begin(), z.values.end());
  return static_cast<std::int64_t>(levels.size());
}

std::int64_t z_self_intersections(const ZPath& z) {
  absl::flat_hash_map<std::int64_t, std::int64_t> counts;
  for (std::size_t k = 1; k < z.values.size(); ++k) ++counts[z.values[k]];
  std::int64_t total = 0;
  for (const auto& [level, count] : counts) total += count * count;
  return total;
}

double exponent_delta(double alpha, double beta) {
  validate_index(alpha, "alpha");
  validate_index(beta, "beta");
  return 1.0 - 1.0 / alpha + 1.0 / (alpha * beta);
}

double normalizer_a(double alpha, double beta, double n) {
  validate_index(alpha, "alpha");
  validate_index(beta, "beta");
  if (alpha > 1.0) return std::pow(n, exponent_delta(alpha, beta));
  if (alpha == 1.0) {
    if (!(n >= 2.0)) throw InvalidArgument("normalizer with alpha = 1 needs n >= 2");
    return std::pow(n, 1.0 / beta) * std::pow(std::log(n), 1.0 - 1.0 / beta);
  }
  return std::pow(n, 1.0 / beta);
}

}  // namespace cprw
