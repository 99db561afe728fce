#include "fp/density.hpp"

#include <random>
#include <stdexcept>

namespace fp {

namespace {

double bump_mass(const BumpFunction& bump) {
  // fine rectangle rule over the support; only used for reporting bounds
  const int n = 1 << 16;
  const double dx = (bump.outer_hi - bump.outer_lo) / n;
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += bump.eval(bump.outer_lo + (j + 0.5) * dx);
  return s * dx;
}

}  // namespace

void PopulationDensity::validate() const {
  if (kind == Kind::uniform_on) {
    if (!(hi > lo)) throw std::invalid_argument("density interval must have hi > lo");
  } else {
    bump.validate();
  }
}

std::vector<double> PopulationDensity::sample_normalized(const Grid& grid) const {
  validate();
  std::vector<double> rho(grid.m, 0.0);
  for (int j = 0; j < grid.m; ++j) {
    const double x = grid.node(j);
    if (kind == Kind::uniform_on)
      rho[j] = (x >= lo && x <= hi) ? 1.0 : 0.0;
    else
      rho[j] = bump.eval(x);
  }
  double mass = 0.0;
  for (double v : rho) mass += v;
  mass *= grid.spacing();
  if (mass <= 0.0) throw std::invalid_argument("density vanishes on the grid");
  for (double& v : rho) v /= mass;
  return rho;
}

std::vector<double> PopulationDensity::draw_samples(int count, std::uint64_t seed) const {
  validate();
  std::mt19937_64 rng(seed);
  std::vector<double> xs;
  xs.reserve(count);
  if (kind == Kind::uniform_on) {
    std::uniform_real_distribution<double> u(lo, hi);
    for (int i = 0; i < count; ++i) xs.push_back(u(rng));
  } else {
    std::uniform_real_distribution<double> ux(bump.outer_lo, bump.outer_hi);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    while (static_cast<int>(xs.size()) < count) {
      const double x = ux(rng);
      if (ua(rng) <= bump.eval(x)) xs.push_back(x);
    }
  }
  return xs;
}

double PopulationDensity::sup_bound() const {
  if (kind == Kind::uniform_on) return 1.0 / (hi - lo);
  return 1.0 / bump_mass(bump);
}

std::string to_string(PopulationDensity::Kind k) {
  return k == PopulationDensity::Kind::uniform_on ? "uniform_on" : "truncated_constant";
}

PopulationDensity::Kind density_kind_from_string(const std::string& name) {
  if (name == "uniform_on") return PopulationDensity::Kind::uniform_on;
  if (name == "truncated_constant") return PopulationDensity::Kind::truncated_constant;
  throw std::invalid_argument("unknown density kind: " + name);
}

}  // namespace fp
