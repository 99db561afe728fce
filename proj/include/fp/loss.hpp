#pragma once

#include <string>

namespace fp {

/// Pointwise loss ell applied to the residual h - f. mse is ell(z) = z^2;
/// p_power is ell(z) = |z|^p with p >= 2 expected (smaller p fails the
/// sandwich validation below).
struct LossKind {
  enum class Family { mse, p_power };

  Family family = Family::mse;
  double p = 2.0;

  double ell(double z) const;
  double ell_prime(double z) const;

  /// p = 2 power loss is the mse loss; diagnostics treat them identically.
  bool mse_equivalent() const {
    return family == Family::mse || (family == Family::p_power && p == 2.0);
  }

  bool operator==(const LossKind&) const = default;
};

/// Numeric check of the two-sided bound C^{-1} [ell'(z)]^2 <= ell(z) <= C z^2
/// on a log-spaced grid |z| in [1e-6, r0]. The bound holds on (0, r0] iff
/// neither ratio grows as z -> 0; growth is detected from the log-log slope
/// over the smallest decades.
struct SandwichReport {
  bool pass = false;
  double constant = 0.0;       // measured C over the scan
  double r0 = 1.0;
  double lower_ratio_slope = 0.0;  // d log([ell']^2/ell) / d log z near 0
  double upper_ratio_slope = 0.0;  // d log(ell/z^2) / d log z near 0
  std::string message;
};

SandwichReport validate_sandwich(const LossKind& loss, double r0 = 1.0);

std::string to_string(LossKind::Family f);
LossKind::Family loss_family_from_string(const std::string& name);

}  // namespace fp
