#pragma once

#include <cstdint>
#include <map>

#include "cprw/rwrs.hpp"

namespace cprw {

inline constexpr int kMaxExactRwrsSteps = 12;

/// Exact law of Z_n for finite-support walk and scenery laws.
///
/// Walk paths are enumerated and grouped by the multiset of their local
/// times; given the local times, Z_n = sum_y xi_y N_n(y) is a sum of
/// independent scaled scenery values, whose law is a finite convolution.
std::map<std::int64_t, double> exact_rwrs_law(const RwrsModel& model, int n);

/// P(Z_j != 0 for 1 <= j <= steps), by enumerating walk increments and
/// drawing each scenery value when its site is first visited.
double exact_no_return_z(const RwrsModel& model, int steps);

}  // namespace cprw
