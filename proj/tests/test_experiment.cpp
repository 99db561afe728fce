#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fp/experiment.hpp"
#include "fp/presets.hpp"

using namespace fp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE(is);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentConfig tiny_run_config(const std::string& out_dir) {
  ExperimentConfig cfg = preset_config("smoke");
  cfg.flow.total_steps = 50;
  cfg.grid_spec.m = 128;
  cfg.samples.count = 32;
  cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

TEST_CASE("config round-trips through json") {
  for (const auto& name : preset_names()) {
    const ExperimentConfig cfg = preset_config(name);
    const ExperimentConfig back = config_from_json(config_to_json(cfg));
    CHECK(back == cfg);
  }
}

TEST_CASE("config validation reports the offending field") {
  ExperimentConfig cfg = preset_config("smoke");
  cfg.network.widths = {1, 0, 1};
  try {
    cfg.validate();
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("network") == 0);
  }

  cfg = preset_config("smoke");
  cfg.grid_spec.m = 100;  // not a power of two
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = preset_config("smoke");
  cfg.flow.step_size = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = preset_config("smoke");
  cfg.eta_sweep = EtaSweepSpec{false, 0, {}};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("seed is mandatory in config files") {
  nlohmann::json j = config_to_json(preset_config("smoke"));
  j.erase("seed");
  CHECK_THROWS_AS(config_from_json(j), ConfigError);
}

TEST_CASE("committed preset snapshots match the built-in definitions") {
  for (const auto& name : preset_names()) {
    const fs::path path = fs::path(PRESET_DIR) / (name + std::string(".json"));
    REQUIRE_MESSAGE(fs::exists(path), "missing preset snapshot: ", path.string());
    const std::string expect = config_to_json(preset_config(name)).dump(2) + "\n";
    CHECK(slurp(path.string()) == expect);
  }
}

TEST_CASE("assumption validators on the worked examples") {
  // order-1 activation with the quintic cutoff and mse: everything passes
  ExperimentConfig cfg = preset_config("smoke");
  cfg.network.activation = Activation::relu;
  auto rep = validate_assumptions(cfg);
  CHECK(rep.all_pass() == false);  // uniform density: sqrt(rho) edge jump is reported
  CHECK(rep.effective_smoothness.infinite == false);
  CHECK(rep.effective_smoothness.order == 1);
  CHECK(rep.sandwich.pass);

  // p = 1.5 fails the sandwich scan
  cfg = preset_config("smoke");
  cfg.loss = LossKind{LossKind::Family::p_power, 1.5};
  rep = validate_assumptions(cfg);
  CHECK_FALSE(rep.sandwich.pass);

  // smooth cutoff + smooth activation: infinite order
  cfg = preset_config("smoke");
  cfg.bump.profile = BumpProfile::smooth_exp;
  cfg.density.bump = cfg.bump;
  cfg.density.kind = PopulationDensity::Kind::truncated_constant;
  rep = validate_assumptions(cfg);
  CHECK(rep.effective_smoothness.infinite);
  CHECK(rep.all_pass());
}

TEST_CASE("derived sweep seeds are deterministic and distinct") {
  CHECK(derive_seed(7, 0) == derive_seed(7, 0));
  CHECK(derive_seed(7, 0) != derive_seed(7, 1));
  CHECK(derive_seed(7, 1) != derive_seed(8, 1));
}

TEST_CASE("run artifacts exist and repeat runs are byte-identical") {
  const fs::path dir = fs::temp_directory_path() / "fp_exp_test";
  fs::remove_all(dir);

  const auto cfg1 = tiny_run_config((dir / "a").string());
  const auto r1 = run_experiment(cfg1);
  CHECK(fs::exists(r1.trajectory_path));
  CHECK(fs::exists(r1.csv_path));
  CHECK(fs::exists(r1.summary_path));
  CHECK(fs::exists(r1.target_spectrum_path));
  CHECK_FALSE(r1.rows.empty());
  CHECK_FALSE(r1.etas.empty());

  const auto cfg2 = tiny_run_config((dir / "b").string());
  const auto r2 = run_experiment(cfg2);
  CHECK(slurp(r1.csv_path) == slurp(r2.csv_path));
  CHECK(slurp(r1.summary_path) == slurp(r2.summary_path));

  // serial kernels give the same bytes as the parallel ones
  const auto cfg3 = tiny_run_config((dir / "c").string());
  const auto r3 = run_experiment(cfg3, Exec::serial);
  CHECK(slurp(r1.csv_path) == slurp(r3.csv_path));

  fs::remove_all(dir);
}

TEST_CASE("replay reproduces the run diagnostics") {
  const fs::path dir = fs::temp_directory_path() / "fp_replay_test";
  fs::remove_all(dir);

  const auto cfg = tiny_run_config((dir / "run").string());
  const auto r1 = run_experiment(cfg);

  auto cfg2 = cfg;
  cfg2.out_dir = (dir / "replay").string();
  const auto r2 = replay_trajectory(r1.trajectory_path, cfg2);
  CHECK(slurp(r1.csv_path) == slurp(r2.csv_path));

  fs::remove_all(dir);
}

TEST_CASE("width sweep produces one block per value and p=2 matches mse") {
  const fs::path dir = fs::temp_directory_path() / "fp_sweep_test";
  fs::remove_all(dir);

  auto base = tiny_run_config((dir / "w").string());
  const std::vector<double> widths{4.0, 8.0};
  const auto sweep = run_sweep(base, SweepAxis::width, widths);
  CHECK(sweep.runs == 2);
  CHECK(sweep.failures == 0);
  const std::string csv = slurp(sweep.csv_path);
  CHECK(csv.find("width,4,") != std::string::npos);
  CHECK(csv.find("width,8,") != std::string::npos);

  // p sweep with p=2 reproduces an mse run at the same derived seed
  auto base_p = tiny_run_config((dir / "p").string());
  const std::vector<double> ps{2.0};
  const auto psweep = run_sweep(base_p, SweepAxis::p, ps);
  CHECK(psweep.failures == 0);

  auto mse_cfg = tiny_run_config((dir / "mse").string());
  mse_cfg.seed = derive_seed(base_p.seed, 0);
  mse_cfg.loss = LossKind{LossKind::Family::mse, 2.0};
  const auto mse_run = run_experiment(mse_cfg);

  // compare the diagnostics portion of the sweep rows to the direct run
  std::istringstream sweep_lines(slurp(psweep.csv_path));
  std::istringstream mse_lines(slurp(mse_run.csv_path));
  std::string sl, ml;
  std::getline(sweep_lines, sl);  // headers
  std::getline(mse_lines, ml);
  int compared = 0;
  while (std::getline(sweep_lines, sl) && std::getline(mse_lines, ml)) {
    const auto pos = sl.find(",ok,");
    REQUIRE(pos != std::string::npos);
    const std::string sweep_payload = sl.substr(pos + 4);
    // drop the flags column, then compare numeric fields to 1e-10
    std::stringstream a(sweep_payload), b(ml);
    std::string fa, fb;
    while (std::getline(a, fa, ',') && std::getline(b, fb, ',')) {
      try {
        const double va = std::stod(fa);
        const double vb = std::stod(fb);
        CHECK(std::abs(va - vb) <= 1e-10 * std::max(1.0, std::abs(vb)));
      } catch (const std::invalid_argument&) {
        CHECK(fa == fb);
      }
    }
    ++compared;
  }
  CHECK(compared > 0);

  fs::remove_all(dir);
}

TEST_CASE("failed sweep values are recorded and the sweep continues") {
  const fs::path dir = fs::temp_directory_path() / "fp_sweep_fail";
  fs::remove_all(dir);
  auto base = tiny_run_config((dir / "m").string());
  const std::vector<double> ms{100.0, 128.0};  // 100 is not a power of two
  const auto sweep = run_sweep(base, SweepAxis::grid_m, ms);
  CHECK(sweep.runs == 2);
  CHECK(sweep.failures == 1);
  const std::string csv = slurp(sweep.csv_path);
  CHECK(csv.find(",error,") != std::string::npos);
  CHECK(csv.find(",ok,") != std::string::npos);
  fs::remove_all(dir);
}
