#pragma once

#include <complex>

#include "cprw/rng.hpp"

namespace cprw {

/// Strictly stable law given by its characteristic function
///   phi(u) = exp(-|u|^index * (a1 + i * a2 * sgn(u))).
struct StableLaw {
  double index = 2.0;
  double a1 = 1.0;
  double a2 = 0.0;

  /// Throws InvalidArgument unless 0 < index <= 2, a1 > 0,
  /// |a2 / a1| <= |tan(pi index / 2)|, and index == 1 implies a2 == 0.
  void validate() const;

  /// Skewness in the (skewness, scale) form used by the CMS transform.
  double skewness() const;
  double scale() const;

  std::complex<double> characteristic_function(double u) const;

  friend bool operator==(const StableLaw&, const StableLaw&) = default;
};

/// Chambers-Mallows-Stuck sampler with the law's constants precomputed.
class StableSampler {
 public:
  explicit StableSampler(const StableLaw& law);

  double operator()(RngStream& rng) const;
  const StableLaw& law() const { return law_; }

 private:
  StableLaw law_;
  double sigma_;
  double shift_;
  double amp_;
};

/// One variate whose characteristic function is law.characteristic_function.
double sample_stable(const StableLaw& law, RngStream& rng);

}  // namespace cprw
