#pragma once

#include <string>

namespace fp {

enum class BumpProfile { smoothstep_quintic, smooth_exp };

/// Compactly supported cutoff: 1 on the inner domain [inner_lo, inner_hi],
/// 0 outside the outer domain [outer_lo, outer_hi], monotone transition in
/// between. smoothstep_quintic is C^2; smooth_exp is the C-infinity mollifier
/// transition exp(1 - 1/(1 - s^2)).
struct BumpFunction {
  double inner_lo = -3.14;
  double inner_hi = 3.14;
  double outer_lo = -3.5;
  double outer_hi = 3.5;
  BumpProfile profile = BumpProfile::smoothstep_quintic;

  double eval(double x) const;
  void validate() const;

  /// Sobolev order the profile certifies (W^{k,inf}); smooth_exp reports
  /// infinite via Smoothness-style pair.
  bool profile_is_smooth() const { return profile == BumpProfile::smooth_exp; }

  bool operator==(const BumpFunction&) const = default;
};

std::string to_string(BumpProfile p);
BumpProfile bump_profile_from_string(const std::string& name);

}  // namespace fp
