#include "fp/bump.hpp"

#include <cmath>
#include <stdexcept>

namespace fp {

namespace {

// rises 1 -> 0 as s goes 0 -> 1
double falloff(BumpProfile profile, double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  switch (profile) {
    case BumpProfile::smoothstep_quintic: {
      const double t = 1.0 - s;
      return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    }
    case BumpProfile::smooth_exp:
      return std::exp(1.0 - 1.0 / (1.0 - s * s));
  }
  throw std::logic_error("unknown bump profile");
}

}  // namespace

double BumpFunction::eval(double x) const {
  if (x >= inner_lo && x <= inner_hi) return 1.0;
  if (x <= outer_lo || x >= outer_hi) return 0.0;
  if (x < inner_lo) return falloff(profile, (inner_lo - x) / (inner_lo - outer_lo));
  return falloff(profile, (x - inner_hi) / (outer_hi - inner_hi));
}

void BumpFunction::validate() const {
  if (!(outer_lo < inner_lo && inner_lo < inner_hi && inner_hi < outer_hi))
    throw std::invalid_argument("bump domains must nest: outer_lo < inner_lo < inner_hi < outer_hi");
}

std::string to_string(BumpProfile p) {
  return p == BumpProfile::smoothstep_quintic ? "smoothstep_quintic" : "smooth_exp";
}

BumpProfile bump_profile_from_string(const std::string& name) {
  if (name == "smoothstep_quintic") return BumpProfile::smoothstep_quintic;
  if (name == "smooth_exp") return BumpProfile::smooth_exp;
  throw std::invalid_argument("unknown bump profile: " + name);
}

}  // namespace fp
