#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>

namespace cprw {

/// Map from integer lattice sites to values, tuned for walks that mostly
/// stay near a contiguous window: a dense two-sided array covers the window
/// and far jumps fall back to a hash map. Entries are created on first
/// access with `init(site)`; the dense window is populated eagerly when it
/// grows, so `init` must be a pure function of the site.
template <class T>
class SiteTable {
 public:
  template <class Init>
  T& get(std::int64_t site, Init&& init) {
    if (dense_.empty()) {
      lo_ = site - kInitialHalfWidth;
      dense_.reserve(2 * kInitialHalfWidth);
      for (std::int64_t s = lo_; s < lo_ + 2 * kInitialHalfWidth; ++s) {
        dense_.push_back(adopt(s, init));
      }
    }
    const std::int64_t hi = lo_ + static_cast<std::int64_t>(dense_.size());
    if (site >= lo_ && site < hi) return dense_[static_cast<std::size_t>(site - lo_)];

    const std::int64_t reach = std::max<std::int64_t>(kInitialHalfWidth, dense_.size());
    if (site < lo_ && lo_ - site <= reach) {
      const std::int64_t grow = std::max<std::int64_t>(lo_ - site, dense_.size());
      std::vector<T> front;
      front.reserve(static_cast<std::size_t>(grow) + dense_.size());
      for (std::int64_t s = lo_ - grow; s < lo_; ++s) front.push_back(adopt(s, init));
      front.insert(front.end(), std::make_move_iterator(dense_.begin()),
                   std::make_move_iterator(dense_.end()));
      dense_ = std::move(front);
      lo_ -= grow;
      return dense_[static_cast<std::size_t>(site - lo_)];
    }
    if (site >= hi && site - hi < reach) {
      const std::int64_t grow = std::max<std::int64_t>(site - hi + 1, dense_.size());
      dense_.reserve(dense_.size() + static_cast<std::size_t>(grow));
      for (std::int64_t s = hi; s < hi + grow; ++s) dense_.push_back(adopt(s, init));
      return dense_[static_cast<std::size_t>(site - lo_)];
    }
    auto [it, inserted] = sparse_.try_emplace(site);
    if (inserted) it->second = init(site);
    return it->second;
  }

  const T* find(std::int64_t site) const {
    const std::int64_t hi = lo_ + static_cast<std::int64_t>(dense_.size());
    if (site >= lo_ && site < hi) return &dense_[static_cast<std::size_t>(site - lo_)];
    auto it = sparse_.find(site);
    return it == sparse_.end() ? nullptr : &it->second;
  }

  /// Visits every stored (site, value); dense window first, in site order,
  /// then the sparse entries in unspecified order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < dense_.size(); ++i) {
      f(lo_ + static_cast<std::int64_t>(i), dense_[i]);
    }
    for (const auto& [site, value] : sparse_) f(site, value);
  }

  void clear() {
    dense_.clear();
    sparse_.clear();
    lo_ = 0;
  }

 private:
  static constexpr std::int64_t kInitialHalfWidth = 64;

  template <class Init>
  T adopt(std::int64_t site, Init& init) {
    if (!sparse_.empty()) {
      auto it = sparse_.find(site);
      if (it != sparse_.end()) {
        T value = std::move(it->second);
        sparse_.erase(it);
        return value;
      }
    }
    return init(site);
  }

  std::int64_t lo_ = 0;
  std::vector<T> dense_;
  absl::flat_hash_map<std::int64_t, T> sparse_;
};

}  // namespace cprw
