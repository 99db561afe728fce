#include "fp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fp/trajectory_io.hpp"

namespace fp {

namespace fs = std::filesystem;
using json = nlohmann::json;

Grid ExperimentConfig::grid() const {
  Grid g{grid_spec.lo, grid_spec.hi, grid_spec.m};
  if (grid_spec.pad4x) {
    // widen the zero region around the cutoff support: 4x the domain at the
    // same spacing gives a 4x finer frequency axis
    const double c = 0.5 * (g.lo + g.hi);
    const double half = 0.5 * (g.hi - g.lo);
    g.lo = c - 4.0 * half;
    g.hi = c + 4.0 * half;
    g.m *= 4;
  }
  return g;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError(field + ": " + why);
  };
  try {
    network.validate();
  } catch (const std::exception& e) {
    fail("network", e.what());
  }
  try {
    bump.validate();
  } catch (const std::exception& e) {
    fail("bump", e.what());
  }
  try {
    target.validate();
  } catch (const std::exception& e) {
    fail("target", e.what());
  }
  try {
    density.validate();
  } catch (const std::exception& e) {
    fail("density", e.what());
  }
  try {
    flow.validate();
  } catch (const std::exception& e) {
    fail("flow", e.what());
  }
  try {
    grid().validate();
  } catch (const std::exception& e) {
    fail("grid", e.what());
  }
  if (loss.family == LossKind::Family::p_power && !(loss.p >= 1.0))
    fail("loss", "p must be >= 1");
  if (data_source == DataSource::samples) {
    if (samples.count < 1) fail("samples", "count must be positive");
    if (!(samples.hi > samples.lo)) fail("samples", "interval must have hi > lo");
    if (density.kind == PopulationDensity::Kind::uniform_on &&
        (std::abs(density.lo - samples.lo) > 1e-12 || std::abs(density.hi - samples.hi) > 1e-12))
      fail("samples", "interval must match the uniform density interval");
  }
  if (diagnostics_stride < 1) fail("diagnostics_stride", "must be >= 1");
  if (!eta_sweep.use_peaks && eta_sweep.log_spaced == 0 && eta_sweep.explicit_etas.empty())
    fail("eta_sweep", "sweep would be empty");
  for (double e : eta_sweep.explicit_etas)
    if (!(e >= 0.0)) fail("eta_sweep", "eta values must be nonnegative");
  if (out_dir.empty()) fail("out_dir", "must not be empty");
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["version"] = c.version;
  if (!c.preset.empty()) j["preset"] = c.preset;
  j["network"] = {{"widths", c.network.widths}, {"activation", to_string(c.network.activation)}};
  j["bump"] = {{"inner", {c.bump.inner_lo, c.bump.inner_hi}},
               {"outer", {c.bump.outer_lo, c.bump.outer_hi}},
               {"profile", to_string(c.bump.profile)}};
  json t;
  t["kind"] = to_string(c.target.kind);
  switch (c.target.kind) {
    case TargetFunction::Kind::tone_sum: {
      json tones = json::array();
      for (const Tone& tone : c.target.tones)
        tones.push_back({tone.angular_frequency, tone.amplitude});
      t["tones"] = tones;
      break;
    }
    case TargetFunction::Kind::paper_multitone:
      t["count"] = c.target.harmonic_count;
      break;
    case TargetFunction::Kind::custom_table:
      t["grid"] = {{"domain", {c.target.table.grid.lo, c.target.table.grid.hi}},
                   {"m", c.target.table.grid.m}};
      t["values"] = c.target.table.values;
      break;
  }
  j["target"] = t;
  j["density"] = {{"kind", to_string(c.density.kind)}, {"interval", {c.density.lo, c.density.hi}}};
  j["data_source"] = c.data_source == ExperimentConfig::DataSource::samples ? "samples" : "quadrature";
  j["samples"] = {{"count", c.samples.count}, {"interval", {c.samples.lo, c.samples.hi}}};
  json l{{"family", to_string(c.loss.family)}};
  if (c.loss.family == LossKind::Family::p_power) l["p"] = c.loss.p;
  j["loss"] = l;
  json f{{"integrator", to_string(c.flow.integrator)},
         {"step_size", c.flow.step_size},
         {"total_steps", c.flow.total_steps},
         {"checkpoint_stride", c.flow.checkpoint_stride}};
  if (c.flow.trajectory_bound) f["trajectory_bound"] = *c.flow.trajectory_bound;
  j["flow"] = f;
  j["grid"] = {{"domain", {c.grid_spec.lo, c.grid_spec.hi}}, {"m", c.grid_spec.m}, {"pad4x", c.grid_spec.pad4x}};
  j["eta_sweep"] = {{"use_peaks", c.eta_sweep.use_peaks},
                    {"log_spaced", c.eta_sweep.log_spaced},
                    {"explicit", c.eta_sweep.explicit_etas}};
  j["diagnostics_stride"] = c.diagnostics_stride;
  j["out_dir"] = c.out_dir;
  j["seed"] = c.seed;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    c.version = j.at("version").get<int>();
    if (c.version != 1) throw ConfigError("version: unsupported config version");
    if (j.contains("preset")) c.preset = j.at("preset").get<std::string>();
    c.network.widths = j.at("network").at("widths").get<std::vector<int>>();
    c.network.activation = activation_from_string(j.at("network").at("activation").get<std::string>());
    const auto& b = j.at("bump");
    c.bump.inner_lo = b.at("inner").at(0).get<double>();
    c.bump.inner_hi = b.at("inner").at(1).get<double>();
    c.bump.outer_lo = b.at("outer").at(0).get<double>();
    c.bump.outer_hi = b.at("outer").at(1).get<double>();
    c.bump.profile = bump_profile_from_string(b.at("profile").get<std::string>());
    const auto& t = j.at("target");
    c.target.kind = target_kind_from_string(t.at("kind").get<std::string>());
    switch (c.target.kind) {
      case TargetFunction::Kind::tone_sum:
        for (const auto& tone : t.at("tones"))
          c.target.tones.push_back({tone.at(0).get<double>(), tone.at(1).get<double>()});
        break;
      case TargetFunction::Kind::paper_multitone:
        c.target.harmonic_count = t.at("count").get<int>();
        break;
      case TargetFunction::Kind::custom_table: {
        Grid g{t.at("grid").at("domain").at(0).get<double>(),
               t.at("grid").at("domain").at(1).get<double>(), t.at("grid").at("m").get<int>()};
        c.target.table = SampledField(g, t.at("values").get<std::vector<double>>());
        break;
      }
    }
    c.density.kind = density_kind_from_string(j.at("density").at("kind").get<std::string>());
    c.density.lo = j.at("density").at("interval").at(0).get<double>();
    c.density.hi = j.at("density").at("interval").at(1).get<double>();
    c.density.bump = c.bump;
    const std::string ds = j.at("data_source").get<std::string>();
    if (ds == "samples")
      c.data_source = ExperimentConfig::DataSource::samples;
    else if (ds == "quadrature")
      c.data_source = ExperimentConfig::DataSource::quadrature;
    else
      throw ConfigError("data_source: must be samples or quadrature");
    c.samples.count = j.at("samples").at("count").get<int>();
    c.samples.lo = j.at("samples").at("interval").at(0).get<double>();
    c.samples.hi = j.at("samples").at("interval").at(1).get<double>();
    c.loss.family = loss_family_from_string(j.at("loss").at("family").get<std::string>());
    if (c.loss.family == LossKind::Family::p_power) c.loss.p = j.at("loss").at("p").get<double>();
    const auto& f = j.at("flow");
    c.flow.integrator = integrator_from_string(f.at("integrator").get<std::string>());
    c.flow.step_size = f.at("step_size").get<double>();
    c.flow.total_steps = f.at("total_steps").get<std::int64_t>();
    c.flow.checkpoint_stride = f.at("checkpoint_stride").get<std::int64_t>();
    if (f.contains("trajectory_bound")) c.flow.trajectory_bound = f.at("trajectory_bound").get<double>();
    const auto& g = j.at("grid");
    c.grid_spec.lo = g.at("domain").at(0).get<double>();
    c.grid_spec.hi = g.at("domain").at(1).get<double>();
    c.grid_spec.m = g.at("m").get<int>();
    c.grid_spec.pad4x = g.value("pad4x", false);
    const auto& e = j.at("eta_sweep");
    c.eta_sweep.use_peaks = e.at("use_peaks").get<bool>();
    c.eta_sweep.log_spaced = e.at("log_spaced").get<int>();
    c.eta_sweep.explicit_etas = e.at("explicit").get<std::vector<double>>();
    c.diagnostics_stride = j.value("diagnostics_stride", std::int64_t{1});
    c.out_dir = j.at("out_dir").get<std::string>();
    if (!j.contains("seed")) throw ConfigError("seed: mandatory, no entropy default");
    c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }
  return config_from_json(j);
}

bool AssumptionReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

std::string AssumptionReport::text() const {
  std::ostringstream os;
  for (const auto& e : entries)
    os << (e.pass ? "[pass] " : "[FAIL] ") << e.name << ": " << e.detail << "\n";
  return os.str();
}

json AssumptionReport::to_json() const {
  json j = json::array();
  for (const auto& e : entries) j.push_back({{"name", e.name}, {"pass", e.pass}, {"detail", e.detail}});
  return j;
}

AssumptionReport validate_assumptions(const ExperimentConfig& cfg) {
  AssumptionReport rep;
  const Smoothness act = cfg.network.smoothness();

  // cutoff/activation/target regularity
  {
    const bool chi_smooth = cfg.bump.profile_is_smooth();
    Smoothness eff;
    if (act.infinite && chi_smooth) {
      eff = {true, 0};
    } else if (act.infinite) {
      eff = {false, 2};  // quintic transition is C^2
    } else {
      eff = act;
    }
    rep.effective_smoothness = eff;
    std::string detail = "activation " + to_string(cfg.network.activation) +
                         (act.infinite ? " (smooth)" : " (order 1)") + ", cutoff profile " +
                         to_string(cfg.bump.profile) +
                         (eff.infinite ? "; effective order infinite" : "; effective order " + std::to_string(eff.order));
    rep.entries.push_back({"regularity", true, detail});
  }

  // bounded density
  {
    cfg.density.validate();
    const double bound = cfg.density.sup_bound();
    rep.entries.push_back({"bounded_density", std::isfinite(bound) && bound > 0.0,
                           "sup rho = " + std::to_string(bound)});
  }

  // bounded trajectory: monitoring only
  {
    if (cfg.flow.trajectory_bound)
      rep.entries.push_back({"bounded_trajectory", true,
                             "monitor armed at R = " + std::to_string(*cfg.flow.trajectory_bound)});
    else
      rep.entries.push_back({"bounded_trajectory", true, "no bound set; monitoring disabled"});
  }

  // sqrt-density regularity (needed by the density-weighted family)
  {
    const bool smooth_rho = cfg.density.kind == PopulationDensity::Kind::truncated_constant;
    rep.entries.push_back(
        {"sqrt_density_regularity", smooth_rho,
         smooth_rho ? "sqrt(rho) inherits the cutoff profile"
                    : "uniform density: sqrt(rho) is discontinuous at the interval edges"});
  }

  // loss sandwich condition
  {
    rep.sandwich = validate_sandwich(cfg.loss);
    std::ostringstream os;
    os << rep.sandwich.message << " (C = " << rep.sandwich.constant << ", r0 = " << rep.sandwich.r0
       << ")";
    rep.entries.push_back({"loss_sandwich", rep.sandwich.pass, os.str()});
  }

  return rep;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t x = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

Spectrum target_spectrum_on(const Grid& g, const BumpFunction& bump, const TargetFunction& target) {
  SampledField f(g);
  for (int j = 0; j < g.m; ++j) {
    const double x = g.node(j);
    f.values[j] = target.eval(x) * bump.eval(x);
  }
  return dft(f);
}

std::vector<double> build_etas(const ExperimentConfig& cfg, const Grid& g,
                               std::span<const int> peak_bins) {
  std::vector<double> etas = cfg.eta_sweep.explicit_etas;
  if (cfg.eta_sweep.use_peaks)
    for (int k : peak_bins) etas.push_back(std::abs(k) * g.freq_resolution());
  if (cfg.eta_sweep.log_spaced > 0) {
    const double lo = 2.0 * g.freq_resolution();
    const double hi = g.nyquist() / 2.0;
    const int n = cfg.eta_sweep.log_spaced;
    for (int i = 0; i < n; ++i)
      etas.push_back(lo * std::pow(hi / lo, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1)));
  }
  std::sort(etas.begin(), etas.end());
  etas.erase(std::unique(etas.begin(), etas.end()), etas.end());
  if (etas.empty()) throw ConfigError("eta_sweep: no eta values resolved");
  return etas;
}

TrainingData build_data(const ExperimentConfig& cfg, const Grid& g) {
  if (cfg.data_source == ExperimentConfig::DataSource::samples) {
    const auto xs = cfg.density.draw_samples(cfg.samples.count, derive_seed(cfg.seed, 1));
    return TrainingData::from_samples(xs, cfg.bump, cfg.target);
  }
  return TrainingData::from_quadrature(g, cfg.density, cfg.bump, cfg.target);
}

std::vector<std::size_t> diagnosed_indices(std::size_t n_checkpoints, std::int64_t stride) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n_checkpoints; i += static_cast<std::size_t>(stride)) idx.push_back(i);
  if (!idx.empty() && idx.back() != n_checkpoints - 1) idx.push_back(n_checkpoints - 1);
  return idx;
}

json fit_to_json(const PowerLawFit& f) {
  return {{"ok", f.ok},
          {"slope", f.slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"points_used", f.points_used}};
}

/// Shared post-processing: diagnostics rows -> files + summary.
RunResult finish_run(const ExperimentConfig& cfg, TrajectoryRecord trajectory, Exec exec) {
  const Grid g = cfg.grid();
  RunResult out;
  out.trajectory = std::move(trajectory);

  const Spectrum fhat = target_spectrum_on(g, cfg.bump, cfg.target);
  out.peak_bins = detect_peaks(fhat, 0.05);
  for (int k : out.peak_bins) out.peak_freqs.push_back(k * g.freq_resolution());
  out.etas = build_etas(cfg, g, out.peak_bins);

  DiagnosticsConfig dcfg;
  dcfg.grid = g;
  dcfg.bump = cfg.bump;
  dcfg.target = cfg.target;
  dcfg.density = cfg.density;
  dcfg.etas = out.etas;
  dcfg.exec = exec;
  DiagnosticsEngine engine(dcfg, cfg.network);

  const bool gradient_flow = out.trajectory.config.integrator != Integrator::adam;
  const auto idx = diagnosed_indices(out.trajectory.checkpoints.size(), cfg.diagnostics_stride);
  out.rows.reserve(idx.size());
  for (std::size_t i : idx)
    out.rows.push_back(engine.analyze(out.trajectory.checkpoints[i], gradient_flow));

  // half-life windows on the plain spectral residual
  std::vector<double> l_plain, l_rho, ts, train;
  for (const auto& r : out.rows) {
    l_plain.push_back(r.L_plain);
    l_rho.push_back(r.L_rho);
    ts.push_back(r.t);
    train.push_back(r.training_loss);
  }
  const auto windows = half_life_windows(l_plain);

  const bool rho_family = cfg.loss.mse_equivalent();

  // eta-decay fits of the high-band rate ratio at an early and the final
  // non-degenerate checkpoint
  auto ratio_high_at = [&](std::size_t row_idx) {
    std::vector<double> r;
    const auto& row = out.rows[row_idx];
    const double denom = row.rate_denominator(rho_family);
    for (std::size_t e = 0; e < out.etas.size(); ++e) {
      const BandRates& b = rho_family ? row.rho[e] : row.plain[e];
      r.push_back(denom > 0.0 ? std::abs(b.dL_plus_dt) / denom : 0.0);
    }
    return r;
  };
  auto out_high_at = [&](std::size_t row_idx) {
    return std::vector<double>(out.rows[row_idx].out_high.begin(), out.rows[row_idx].out_high.end());
  };
  std::size_t early = out.rows.size() > 1 ? 1 : 0;
  while (early + 1 < out.rows.size() && out.rows[early].degenerate) ++early;
  std::size_t last = out.rows.size() - 1;
  while (last > 0 && out.rows[last].degenerate) --last;

  const auto fit_initial = eta_decay_fit(out.etas, ratio_high_at(early));
  const auto fit_final = eta_decay_fit(out.etas, ratio_high_at(last));
  const auto fit_output = eta_decay_fit(out.etas, out_high_at(early));

  // dissipation at the first eta above the highest detected peak
  std::size_t diss_eta = out.etas.size() - 1;
  if (!out.peak_freqs.empty()) {
    const double top = *std::max_element(out.peak_freqs.begin(), out.peak_freqs.end());
    for (std::size_t e = 0; e < out.etas.size(); ++e)
      if (out.etas[e] > top) {
        diss_eta = e;
        break;
      }
  }
  const double dissipation = gradient_flow ? dissipation_fraction(out.rows, diss_eta) : -1.0;

  // property checks over all diagnosed rows
  double pyth_dev = 0.0;
  bool band_monotone = true;
  double top_octave_max = 0.0;
  for (const auto& row : out.rows) {
    top_octave_max = std::max(top_octave_max, row.top_octave_fraction);
    if (!row.degenerate)
      for (std::size_t e = 0; e < out.etas.size(); ++e)
        pyth_dev = std::max(pyth_dev, std::abs(row.out_low[e] * row.out_low[e] +
                                               row.out_high[e] * row.out_high[e] - 1.0));
    for (std::size_t e = 1; e < out.etas.size(); ++e) {
      const auto& fam = rho_family ? row.rho : row.plain;
      if (fam[e].L_minus < fam[e - 1].L_minus) band_monotone = false;
    }
  }
  double chain_dev = -1.0;
  if (gradient_flow && cfg.data_source == ExperimentConfig::DataSource::quadrature) {
    chain_dev = 0.0;
    for (const auto& row : out.rows) {
      if (row.degenerate) continue;
      const double identity = -(row.velocity_norm * row.velocity_norm);
      const double chain = rho_family ? row.chain_total_rho : row.chain_total_plain;
      const double scale = std::max(std::abs(identity), 1e-300);
      chain_dev = std::max(chain_dev, std::abs(chain - identity) / scale);
    }
  }

  const AssumptionReport assumptions = validate_assumptions(cfg);
  const Smoothness k = assumptions.effective_smoothness;

  json summary;
  summary["format_version"] = 1;
  if (!cfg.preset.empty()) summary["preset"] = cfg.preset;
  summary["seed"] = cfg.seed;
  summary["integrator"] = to_string(cfg.flow.integrator);
  summary["step_size"] = cfg.flow.step_size;
  summary["loss"] = {{"family", to_string(cfg.loss.family)}, {"p", cfg.loss.p}};
  summary["band_family"] = rho_family ? "density_weighted" : "plain";
  summary["n_params"] = network_size(cfg.network);
  summary["n_checkpoints"] = out.trajectory.checkpoints.size();
  summary["n_diagnosed"] = out.rows.size();
  summary["grid"] = {{"domain", {g.lo, g.hi}}, {"m", g.m}};
  summary["peaks"] = {{"bins", out.peak_bins}, {"freqs", out.peak_freqs}};
  summary["etas"] = out.etas;
  summary["series"] = {{"t", ts}, {"L_plain", l_plain}, {"L_rho", l_rho}, {"training_loss", train}};
  json jwin = json::array();
  for (auto [i1, i2] : windows)
    jwin.push_back({{"i1", i1}, {"i2", i2}, {"t1", out.rows[i1].t}, {"t2", out.rows[i2].t}});
  summary["half_life_windows"] = jwin;
  summary["eta_fit"] = {{"initial_rate_ratio", fit_to_json(fit_initial)},
                        {"final_rate_ratio", fit_to_json(fit_final)},
                        {"initial_output_ratio", fit_to_json(fit_output)}};
  summary["dissipation"] = {{"eta", out.etas[diss_eta]},
                            {"fraction", dissipation},
                            {"applicable", gradient_flow}};
  summary["assumptions"] = assumptions.to_json();
  summary["sandwich"] = {{"pass", assumptions.sandwich.pass},
                         {"constant", assumptions.sandwich.constant},
                         {"r0", assumptions.sandwich.r0}};
  // admissible decay orders: mse form m <= 2k-1, general form m <= k-1
  json mrange;
  if (k.infinite) {
    mrange = {{"mse_form", "1..inf"}, {"general_form", "1..inf"}, {"general_form_empty", false}};
  } else {
    mrange = {{"mse_form", "1.." + std::to_string(2 * k.order - 1)},
              {"general_form", k.order >= 2 ? "1.." + std::to_string(k.order - 1) : "empty"},
              {"general_form_empty", k.order < 2}};
  }
  const bool skip_general_slope =
      !k.infinite && k.order < 2 && cfg.loss.family == LossKind::Family::p_power;
  if (skip_general_slope)
    mrange["notice"] =
        "order-1 activation with a general loss: admissible decay-order range is empty; "
        "slope assertions are skipped";
  summary["decay_orders"] = mrange;
  summary["property_checks"] = {
      {"pythagorean_max_dev", pyth_dev},
      {"pythagorean_ok", pyth_dev <= 1e-10},
      {"band_monotone_ok", band_monotone},
      {"chain_identity_max_rel", chain_dev},
      {"chain_identity_ok", chain_dev < 0.0 ? json() : json(chain_dev <= 1e-10)},
      {"dissipation_ok", gradient_flow ? json(dissipation >= 0.95) : json()},
      {"initial_slope_negative",
       skip_general_slope ? json() : json(fit_initial.ok && fit_initial.slope < 0.0)},
      {"trivial_dynamics", out.trajectory.trivial_dynamics},
      {"bound_exceeded", out.trajectory.bound_exceeded},
      {"top_octave_max", top_octave_max},
  };
  {
    const auto& nl = out.rows[last].norms;
    summary["weighted_norms_last"] = {{"h_hat", nl.h_hat},
                                      {"f_hat", nl.f_hat},
                                      {"grad_h_hat", nl.grad_h_hat},
                                      {"grad_q_l1", nl.grad_q_l1},
                                      {"h_hat_rho", nl.h_hat_rho},
                                      {"f_hat_rho", nl.f_hat_rho},
                                      {"grad_h_hat_rho", nl.grad_h_hat_rho},
                                      {"grad_q_rho_l1", nl.grad_q_rho_l1}};
  }
  out.summary = std::move(summary);

  // artifacts
  fs::create_directories(cfg.out_dir);
  out.trajectory_path = (fs::path(cfg.out_dir) / "trajectory.bin").string();
  out.csv_path = (fs::path(cfg.out_dir) / "diagnostics.csv").string();
  out.summary_path = (fs::path(cfg.out_dir) / "summary.json").string();
  out.target_spectrum_path = (fs::path(cfg.out_dir) / "target_spectrum.txt").string();

  save_trajectory(out.trajectory_path, out.trajectory);
  {
    std::ofstream os(out.csv_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + out.csv_path);
    write_diagnostics_csv(os, out.rows, out.etas, cfg.loss, out.peak_bins.size());
  }
  {
    std::ofstream os(out.summary_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + out.summary_path);
    os << out.summary.dump(2) << "\n";
  }
  {
    std::ofstream os(out.target_spectrum_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + out.target_spectrum_path);
    write_spectrum(os, fhat);
  }
  return out;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, Exec exec) {
  cfg.validate();
  const Grid g = cfg.grid();
  const TrainingData data = build_data(cfg, g);
  std::vector<double> theta0 = init_theta(cfg.network, derive_seed(cfg.seed, 0));

  FlowConfig flow = cfg.flow;
  flow.seed = cfg.seed;
  TrajectoryRecord trajectory = integrate(cfg.network, theta0, cfg.loss, data, flow, exec);
  return finish_run(cfg, std::move(trajectory), exec);
}

RunResult replay_trajectory(const std::string& trajectory_path, const ExperimentConfig& cfg,
                            Exec exec) {
  cfg.validate();
  TrajectoryRecord trajectory = load_trajectory(trajectory_path);
  if (trajectory.spec != cfg.network)
    throw ConfigError("network: stored trajectory spec does not match config");
  return finish_run(cfg, std::move(trajectory), exec);
}

SweepAxis sweep_axis_from_string(const std::string& name) {
  if (name == "eta") return SweepAxis::eta;
  if (name == "m") return SweepAxis::grid_m;
  if (name == "width") return SweepAxis::width;
  if (name == "p") return SweepAxis::p;
  throw ConfigError("axis: must be one of eta, m, width, p");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::eta: return "eta";
    case SweepAxis::grid_m: return "m";
    case SweepAxis::width: return "width";
    case SweepAxis::p: return "p";
  }
  throw std::logic_error("unknown axis");
}

SweepResult run_sweep(const ExperimentConfig& base, SweepAxis axis, std::span<const double> values,
                      Exec exec) {
  if (values.empty()) throw ConfigError("sweep: axis values list is empty");
  fs::create_directories(base.out_dir);
  SweepResult result;
  result.csv_path = (fs::path(base.out_dir) / "sweep.csv").string();
  std::ofstream os(result.csv_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + result.csv_path);

  bool header_done = false;
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig cfg = base;
    cfg.seed = derive_seed(base.seed, i);
    cfg.out_dir = (fs::path(base.out_dir) / (to_string(axis) + "_" + std::to_string(i))).string();
    switch (axis) {
      case SweepAxis::eta:
        cfg.eta_sweep = {false, 0, {values[i]}};
        break;
      case SweepAxis::grid_m:
        cfg.grid_spec.m = static_cast<int>(values[i]);
        break;
      case SweepAxis::width:
        for (std::size_t l = 1; l + 1 < cfg.network.widths.size(); ++l)
          cfg.network.widths[l] = static_cast<int>(values[i]);
        break;
      case SweepAxis::p:
        cfg.loss.family = LossKind::Family::p_power;
        cfg.loss.p = values[i];
        break;
    }
    ++result.runs;
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    const std::string prefix = std::string(to_string(axis)) + "," + buf + "," +
                               std::to_string(cfg.seed) + ",";
    try {
      RunResult run = run_experiment(cfg, exec);
      std::ostringstream csv;
      write_diagnostics_csv(csv, run.rows, run.etas, cfg.loss, run.peak_bins.size());
      std::istringstream lines(csv.str());
      std::string line;
      bool first = true;
      while (std::getline(lines, line)) {
        if (first) {
          if (!header_done) {
            os << "axis,value,seed,status," << line << "\n";
            header_done = true;
          }
          first = false;
          continue;
        }
        os << prefix << "ok," << line << "\n";
      }
    } catch (const std::exception& e) {
      ++result.failures;
      if (!header_done) {
        os << "axis,value,seed,status,error\n";
        header_done = true;
      }
      std::string msg = e.what();
      for (char& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
      os << prefix << "error," << msg << "\n";
    }
  }
  return result;
}

}  // namespace fp
