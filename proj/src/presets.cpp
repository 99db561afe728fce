#include "fp/presets.hpp"

#include <stdexcept>

namespace fp {

namespace {

ExperimentConfig base_config() {
  ExperimentConfig c;
  c.bump = BumpFunction{-3.14, 3.14, -3.5, 3.5, BumpProfile::smoothstep_quintic};
  c.density = PopulationDensity{PopulationDensity::Kind::uniform_on, -3.14, 3.14, c.bump};
  c.samples = SampleSpec{300, -3.14, 3.14};
  c.grid_spec = GridSpec{-3.5, 3.5, 1024, false};
  c.eta_sweep = EtaSweepSpec{true, 8, {}};
  return c;
}

ExperimentConfig smoke() {
  ExperimentConfig c = base_config();
  c.preset = "smoke";
  c.network = NetworkSpec{{1, 8, 1}, Activation::tanh};
  c.target = TargetFunction::tone_sum({{1.0, 1.0}, {2.0, 0.5}, {4.0, 0.25}});
  c.samples.count = 64;
  c.loss = LossKind{LossKind::Family::mse, 2.0};
  c.flow = FlowConfig{Integrator::gradient_flow_euler, 0.05, 200, 10, 0, {}};
  c.grid_spec.m = 256;
  c.eta_sweep.log_spaced = 4;
  c.seed = 12345;
  c.out_dir = "out/smoke";
  return c;
}

ExperimentConfig fig1_desk() {
  ExperimentConfig c = base_config();
  c.preset = "fig1-desk";
  c.network = NetworkSpec{{1, 200, 50, 1}, Activation::tanh};
  c.target = TargetFunction::paper_multitone(500);
  c.loss = LossKind{LossKind::Family::mse, 2.0};
  c.flow = FlowConfig{Integrator::adam, 2e-5, 50000, 100, 0, {}};
  c.diagnostics_stride = 10;
  c.seed = 1;
  c.out_dir = "out/fig1-desk";
  return c;
}

ExperimentConfig fig2_desk() {
  ExperimentConfig c = base_config();
  c.preset = "fig2-desk";
  c.network = NetworkSpec{{1, 64, 64, 64, 64, 1}, Activation::tanh};
  c.target = TargetFunction::paper_multitone(500);
  c.loss = LossKind{LossKind::Family::p_power, 4.0};
  c.flow = FlowConfig{Integrator::adam, 1e-4, 50000, 100, 0, {}};
  c.diagnostics_stride = 10;
  c.seed = 2;
  c.out_dir = "out/fig2-desk";
  return c;
}

ExperimentConfig fig2_paper() {
  ExperimentConfig c = fig2_desk();
  c.preset = "fig2-paper";
  c.network = NetworkSpec{{1, 500, 500, 500, 500, 1}, Activation::tanh};
  c.out_dir = "out/fig2-paper";
  return c;
}

}  // namespace

std::vector<std::string> preset_names() { return {"smoke", "fig1-desk", "fig2-desk", "fig2-paper"}; }

ExperimentConfig preset_config(const std::string& name) {
  if (name == "smoke") return smoke();
  if (name == "fig1-desk") return fig1_desk();
  if (name == "fig2-desk") return fig2_desk();
  if (name == "fig2-paper") return fig2_paper();
  throw ConfigError("preset: unknown name '" + name + "'");
}

std::string preset_description(const std::string& name) {
  if (name == "smoke") return "1-8-1 tanh, 3-tone target, 200 Euler steps; finishes in seconds";
  if (name == "fig1-desk") return "1-200-50-1 tanh, 500-harmonic target, 300 samples, full-batch Adam 2e-5, MSE";
  if (name == "fig2-desk") return "1-64-64-64-64-1 tanh, 500-harmonic target, L4 loss (reduced-width variant)";
  if (name == "fig2-paper") return "1-500-500-500-500-1 tanh, 500-harmonic target, L4 loss (full width, slow)";
  throw ConfigError("preset: unknown name '" + name + "'");
}

}  // namespace fp
