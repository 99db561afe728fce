#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fp/backprop.hpp"
#include "fp/band.hpp"
#include "fp/bump.hpp"
#include "fp/density.hpp"
#include "fp/flow.hpp"
#include "fp/fourier_plan.hpp"
#include "fp/network.hpp"
#include "fp/target.hpp"

namespace fp {

struct DiagnosticsConfig {
  Grid grid;
  BumpFunction bump;
  TargetFunction target;
  PopulationDensity density;
  std::vector<double> etas;
  double peak_threshold = 0.05;    // relative to the largest |fhat|
  double degenerate_guard = 1e-12; // eps_g on |dtheta/dt|
  int max_bracket_order = 3;
  Exec exec = Exec::openmp;
};

/// Band energies and their chain-rule time derivatives at one eta:
/// dL_band/dt = sum over band of grad_theta q(xi_k) . dtheta/dt * dxi.
struct BandRates {
  double L_minus = 0.0;
  double L_plus = 0.0;
  double dL_minus_dt = 0.0;
  double dL_plus_dt = 0.0;
};

/// Weighted-norm diagnostics indexed by bracket order m.
struct WeightedNorms {
  std::vector<double> h_hat, f_hat, grad_h_hat, grad_q_l1;
  std::vector<double> h_hat_rho, f_hat_rho, grad_h_hat_rho, grad_q_rho_l1;
};

/// Everything the characterization quantities need at one checkpoint, for
/// both the plain residual family q and the density-weighted family q_rho.
struct CheckpointDiagnostics {
  double t = 0.0;
  std::uint32_t flags = 0;
  bool degenerate = false;
  bool gradient_flow = false;

  double training_loss = 0.0;
  double velocity_norm = 0.0;            // ||dtheta/dt||; equals |grad L| on flow runs
  double L_plain = 0.0, L_rho = 0.0;     // banded totals
  double chain_total_plain = 0.0;        // full-band sum of dq/dt, plain
  double chain_total_rho = 0.0;
  double out_norm_sq = 0.0;              // integral of |dhhat/dt|^2, plain

  std::vector<BandRates> plain, rho;     // one entry per eta
  std::vector<double> out_low, out_high; // ||dhhat/dt|| band fractions per eta

  std::vector<double> peak_errors;       // |hhat-fhat|/|fhat| at detected peaks
  double top_octave_fraction = 0.0;      // residual energy above Nyquist/2
  WeightedNorms norms;

  /// |dL/dt| used as the ratio denominator: the proof identity |grad L|^2 on
  /// gradient-flow runs, the full-band chain estimate otherwise.
  double rate_denominator(bool rho_family) const;
};

/// Peak bins (k >= 0) of |fhat|: local maxima above threshold * global max.
std::vector<int> detect_peaks(const Spectrum& fhat, double rel_threshold);

/// Relative residual coefficients at selected bins; throws if |fhat| = 0 there.
std::vector<double> peak_relative_errors(const Spectrum& hhat, const Spectrum& fhat,
                                         std::span<const int> peak_bins);

struct PowerLawFit {
  bool ok = false;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
};

/// OLS of log(ratio) against log(eta); nonpositive points are dropped and
/// fewer than 3 survivors yield ok = false.
PowerLawFit eta_decay_fit(std::span<const double> etas, std::span<const double> ratios);

/// Fraction of non-degenerate checkpoints with dL-_{rho,eta}/dt below the
/// tolerance 1e-8 * |dL/dt|.
double dissipation_fraction(std::span<const CheckpointDiagnostics> rows, std::size_t eta_index);

struct WindowDiagnostics {
  int i1 = 0, i2 = 0;
  double t1 = 0.0, t2 = 0.0;
  double integrated_low = 0.0;   // time-integrated |dL-/dt| over |dL/dt|
  double integrated_high = 0.0;
  double difference_quotient = 0.0;  // |L+(T1)-L+(T2)| / |L(T1)-L(T2)|
  bool relaxed = false;              // half-life condition not met strictly
};

/// Window ratios on the plain family over checkpoints [i1, i2]; trapezoid in
/// time for the integrated form. Throws when the window has fewer than two
/// checkpoints or a vanishing denominator.
WindowDiagnostics window_ratios(std::span<const CheckpointDiagnostics> rows, int i1, int i2,
                                std::size_t eta_index);

double spearman_rank_correlation(std::span<const double> a, std::span<const double> b);

/// Per-checkpoint analysis plant: target spectra, peak set and the batched
/// per-parameter gradient transform live here.
class DiagnosticsEngine {
 public:
  DiagnosticsEngine(DiagnosticsConfig cfg, NetworkSpec spec);

  CheckpointDiagnostics analyze(const Checkpoint& cp, bool gradient_flow) const;

  const DiagnosticsConfig& config() const { return cfg_; }
  const std::vector<int>& peak_bins() const { return peaks_; }
  const Spectrum& target_spectrum() const { return fhat_plain_; }
  std::size_t param_count() const { return n_params_; }

 private:
  DiagnosticsConfig cfg_;
  NetworkSpec spec_;
  FourierPlan plan_;
  std::vector<double> chi_, sqrt_rho_;
  Spectrum fhat_plain_, fhat_rho_;
  std::vector<int> peaks_;
  std::size_t n_params_ = 0;
};

/// Diagnostics CSV: one row per (checkpoint, eta); the band family follows
/// the loss kind (density-weighted for mse, plain otherwise). 17 significant
/// digits, fixed column order.
void write_diagnostics_csv(std::ostream& os, std::span<const CheckpointDiagnostics> rows,
                           std::span<const double> etas, const LossKind& loss, std::size_t n_peaks);

}  // namespace fp
