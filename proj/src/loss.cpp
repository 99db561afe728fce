#include "fp/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fp {

double LossKind::ell(double z) const {
  if (family == Family::mse) return z * z;
  return std::pow(std::abs(z), p);
}

double LossKind::ell_prime(double z) const {
  if (family == Family::mse) return 2.0 * z;
  if (z == 0.0) return 0.0;
  const double s = z > 0.0 ? 1.0 : -1.0;
  return p * std::pow(std::abs(z), p - 1.0) * s;
}

namespace {

// least-squares slope of y against x
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SandwichReport validate_sandwich(const LossKind& loss, double r0) {
  if (!(r0 > 0.0)) throw std::invalid_argument("sandwich check: r0 must be positive");
  SandwichReport rep;
  rep.r0 = r0;

  const double z_min = 1e-6;
  const int n = 121;
  std::vector<double> logz, log_lower, log_upper;
  double c = 0.0;
  bool finite = true;
  for (int i = 0; i < n; ++i) {
    const double z = z_min * std::pow(r0 / z_min, static_cast<double>(i) / (n - 1));
    const double e = loss.ell(z);
    const double ep = loss.ell_prime(z);
    if (!(e > 0.0)) {
      finite = false;
      break;
    }
    const double lower = ep * ep / e;  // needs C >= lower
    const double upper = e / (z * z);  // needs C >= upper
    c = std::max({c, lower, upper});
    logz.push_back(std::log(z));
    log_lower.push_back(std::log(std::max(lower, 1e-300)));
    log_upper.push_back(std::log(std::max(upper, 1e-300)));
  }

  if (!finite) {
    rep.pass = false;
    rep.message = "ell vanishes on (0, r0]; ratios undefined";
    return rep;
  }

  // slope over the two smallest decades of z
  std::vector<double> lx, ll, lu;
  const double cut = std::log(z_min * 100.0);
  for (std::size_t i = 0; i < logz.size(); ++i) {
    if (logz[i] <= cut) {
      lx.push_back(logz[i]);
      ll.push_back(log_lower[i]);
      lu.push_back(log_upper[i]);
    }
  }
  rep.lower_ratio_slope = ls_slope(lx, ll);
  rep.upper_ratio_slope = ls_slope(lx, lu);
  rep.constant = c;

  const double tol = -0.05;
  rep.pass = rep.lower_ratio_slope >= tol && rep.upper_ratio_slope >= tol;
  rep.message = rep.pass ? "sandwich condition holds; measured C reported"
                         : "ratio diverges as z -> 0; no finite C on (0, r0]";
  return rep;
}

std::string to_string(LossKind::Family f) {
  return f == LossKind::Family::mse ? "mse" : "p_power";
}

LossKind::Family loss_family_from_string(const std::string& name) {
  if (name == "mse") return LossKind::Family::mse;
  if (name == "p_power") return LossKind::Family::p_power;
  throw std::invalid_argument("unknown loss family: " + name);
}

}  // namespace fp
