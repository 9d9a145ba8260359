#include "cprw/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cprw/error.hpp"

namespace cprw {

namespace {
constexpr double kPi = std::numbers::pi;
}

void StableLaw::validate() const {
  if (!(index > 0.0 && index <= 2.0)) {
    throw InvalidArgument("stable index must lie in (0, 2], got " + std::to_string(index));
  }
  if (!(a1 > 0.0) || !std::isfinite(a1)) {
    throw InvalidArgument("stable a1 must be positive and finite");
  }
  if (!std::isfinite(a2)) throw InvalidArgument("stable a2 must be finite");
  if (index == 2.0 || index == 1.0) {
    if (a2 != 0.0) throw InvalidArgument("stable index 1 and 2 require a2 = 0");
    return;
  }
  const double bound = std::abs(std::tan(kPi * index / 2.0));
  if (std::abs(a2 / a1) > bound * (1.0 + 1e-12)) {
    throw InvalidArgument("stable law violates |a2/a1| <= |tan(pi index/2)|");
  }
}

double StableLaw::skewness() const {
  if (index == 1.0 || index == 2.0) return 0.0;
  return -a2 / (a1 * std::tan(kPi * index / 2.0));
}

double StableLaw::scale() const { return std::pow(a1, 1.0 / index); }

std::complex<double> StableLaw::characteristic_function(double u) const {
  const double sgn = (u > 0.0) - (u < 0.0);
  const double mag = std::pow(std::abs(u), index);
  return std::exp(std::complex<double>(-mag * a1, -mag * a2 * sgn));
}

StableSampler::StableSampler(const StableLaw& law) : law_(law) {
  law_.validate();
  sigma_ = law_.scale();
  const double zeta =
      law_.index == 1.0 ? 0.0 : law_.skewness() * std::tan(kPi * law_.index / 2.0);
  shift_ = std::atan(zeta) / law_.index;
  amp_ = std::pow(1.0 + zeta * zeta, 1.0 / (2.0 * law_.index));
}

double StableSampler::operator()(RngStream& rng) const {
  const double v = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double alpha = law_.index;
  if (alpha == 1.0) return sigma_ * std::tan(v);
  if (alpha == 2.0) return sigma_ * 2.0 * std::sin(v) * std::sqrt(w);
  const double x = amp_ * std::sin(alpha * (v + shift_)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + shift_)) / w, (1.0 - alpha) / alpha);
  return sigma_ * x;
}

double sample_stable(const StableLaw& law, RngStream& rng) { return StableSampler(law)(rng); }

}  // namespace cprw
