// Serial-vs-OpenMP comparison for the two data-parallel kernels: the
// full-batch loss gradient and the per-checkpoint gradient-spectrum batch.
// Both paths use the same fixed chunk reduction, so outputs must agree
// bitwise; the table reports times, speedup and the max absolute difference.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "fp/backprop.hpp"
#include "fp/diagnostics.hpp"
#include "fp/presets.hpp"

using namespace fp;
using clock_type = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

int main() {
  NetworkSpec spec{{1, 64, 64, 64, 64, 1}, Activation::tanh};
  const BumpFunction bump{-3.14, 3.14, -3.5, 3.5, BumpProfile::smoothstep_quintic};
  const TargetFunction target = TargetFunction::paper_multitone(500);
  const PopulationDensity density{PopulationDensity::Kind::uniform_on, -3.14, 3.14, bump};

  const auto xs = density.draw_samples(300, 7);
  const TrainingData data = TrainingData::from_samples(xs, bump, target);
  const auto theta = init_theta(spec, 11);
  const LossKind loss{LossKind::Family::mse, 2.0};

  std::printf("%-24s %12s %12s %9s %12s\n", "kernel", "serial ms", "openmp ms", "speedup",
              "max |diff|");

  {
    LossEvaluator serial(spec, loss, data, Exec::serial);
    LossEvaluator parallel(spec, loss, data, Exec::openmp);
    std::vector<double> gs(serial.param_count()), gp(parallel.param_count());
    const double ts = time_ms([&] { serial(theta, gs); }, 5);
    const double tp = time_ms([&] { parallel(theta, gp); }, 5);
    std::printf("%-24s %12.3f %12.3f %8.2fx %12.3g\n", "loss_gradient", ts, tp, ts / tp,
                max_abs_diff(gs, gp));
  }

  {
    DiagnosticsConfig dcfg;
    dcfg.grid = Grid{-3.5, 3.5, 1024};
    dcfg.bump = bump;
    dcfg.target = target;
    dcfg.density = density;
    dcfg.etas = {0.5, 1.0, 2.0, 4.0};

    Checkpoint cp;
    cp.t = 0.0;
    cp.theta = theta;
    cp.loss = 0.0;
    cp.dtheta_dt = grad_loss(spec, theta, loss, data).grad;
    for (double& v : cp.dtheta_dt) v = -v;

    dcfg.exec = Exec::serial;
    DiagnosticsEngine serial(dcfg, spec);
    dcfg.exec = Exec::openmp;
    DiagnosticsEngine parallel(dcfg, spec);

    CheckpointDiagnostics rs, rp;
    const double ts = time_ms([&] { rs = serial.analyze(cp, true); }, 3);
    const double tp = time_ms([&] { rp = parallel.analyze(cp, true); }, 3);

    std::vector<double> a, b;
    for (std::size_t e = 0; e < dcfg.etas.size(); ++e) {
      a.insert(a.end(), {rs.plain[e].L_minus, rs.plain[e].L_plus, rs.plain[e].dL_minus_dt,
                         rs.plain[e].dL_plus_dt, rs.out_low[e], rs.out_high[e]});
      b.insert(b.end(), {rp.plain[e].L_minus, rp.plain[e].L_plus, rp.plain[e].dL_minus_dt,
                         rp.plain[e].dL_plus_dt, rp.out_low[e], rp.out_high[e]});
    }
    a.push_back(rs.chain_total_rho);
    b.push_back(rp.chain_total_rho);
    std::printf("%-24s %12.3f %12.3f %8.2fx %12.3g\n", "gradient_spectrum", ts, tp, ts / tp,
                max_abs_diff(a, b));
  }

  return 0;
}
