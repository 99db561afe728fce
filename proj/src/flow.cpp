#include "fp/flow.hpp"

#include <cmath>
#include <cstring>

namespace fp {

namespace {

constexpr double kDivergenceGuard = 1e12;
constexpr double kDegenerateGuard = 1e-12;

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double max_abs(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

void guard_divergence(double loss, std::span<const double> theta, std::int64_t step) {
  if (!std::isfinite(loss) || loss > kDivergenceGuard || max_abs(theta) > kDivergenceGuard)
    throw DivergenceError("divergence at step " + std::to_string(step) +
                          " (loss=" + std::to_string(loss) + ")");
}

struct AdamState {
  std::vector<double> m, v;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::int64_t t = 0;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  void step(std::span<double> theta, std::span<const double> grad, double lr) {
    ++t;
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
      theta[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
    }
  }
};

}  // namespace

void FlowConfig::validate() const {
  if (!(step_size > 0.0)) throw std::invalid_argument("flow: step size must be positive");
  if (checkpoint_stride < 1) throw std::invalid_argument("flow: checkpoint stride must be >= 1");
  if (total_steps < 0) throw std::invalid_argument("flow: total steps must be >= 0");
  if (trajectory_bound && !(*trajectory_bound > 0.0))
    throw std::invalid_argument("flow: trajectory bound must be positive");
}

TrajectoryRecord integrate_objective(const Objective& objective, std::vector<double> theta0,
                                     const FlowConfig& config) {
  config.validate();
  const std::size_t n = theta0.size();
  const double dt = config.step_size;

  TrajectoryRecord rec;
  rec.config = config;

  std::vector<double> theta = std::move(theta0);
  std::vector<double> grad(n), k1(n), k2(n), k3(n), k4(n), stage(n);
  AdamState adam(n);
  const bool is_adam = config.integrator == Integrator::adam;

  // adam checkpoints finish one step late: dtheta_dt is the central difference
  // (theta_{k+1} - theta_{k-1}) / (2 dt) at interior checkpoints
  std::vector<double> theta_prev;
  struct Pending {
    std::size_t slot;
    std::vector<double> before;  // theta_{k-1}
  };
  std::optional<Pending> pending;

  auto is_checkpoint = [&](std::int64_t k) {
    return k % config.checkpoint_stride == 0 || k == config.total_steps;
  };

  for (std::int64_t k = 0; k <= config.total_steps; ++k) {
    const double loss = objective(theta, grad);
    guard_divergence(loss, theta, k);

    const double gnorm = l2_norm(grad);
    if (k == 0 && gnorm == 0.0) rec.trivial_dynamics = true;

    std::uint32_t flags = 0;
    if (gnorm < kDegenerateGuard) flags |= kFlagDegenerateGradient;
    if (config.trajectory_bound && l2_norm(theta) > *config.trajectory_bound) {
      flags |= kFlagBoundExceeded;
      rec.bound_exceeded = true;
    }

    if (is_checkpoint(k)) {
      Checkpoint cp;
      cp.t = k * dt;
      cp.loss = loss;
      cp.theta = theta;
      cp.flags = flags;
      if (!is_adam) {
        cp.dtheta_dt.resize(n);
        for (std::size_t i = 0; i < n; ++i) cp.dtheta_dt[i] = -grad[i];
      } else if (k == 0) {
        pending = Pending{rec.checkpoints.size(), theta};  // forward difference at t=0
      } else if (k == config.total_steps) {
        cp.dtheta_dt.resize(n);
        for (std::size_t i = 0; i < n; ++i) cp.dtheta_dt[i] = (theta[i] - theta_prev[i]) / dt;
      } else {
        pending = Pending{rec.checkpoints.size(), theta_prev};
      }
      rec.checkpoints.push_back(std::move(cp));
    }

    if (k == config.total_steps) break;

    if (is_adam) theta_prev = theta;

    switch (config.integrator) {
      case Integrator::gradient_flow_euler:
        for (std::size_t i = 0; i < n; ++i) theta[i] -= dt * grad[i];
        break;
      case Integrator::gradient_flow_rk4: {
        for (std::size_t i = 0; i < n; ++i) k1[i] = -grad[i];
        for (std::size_t i = 0; i < n; ++i) stage[i] = theta[i] + 0.5 * dt * k1[i];
        objective(stage, grad);
        for (std::size_t i = 0; i < n; ++i) k2[i] = -grad[i];
        for (std::size_t i = 0; i < n; ++i) stage[i] = theta[i] + 0.5 * dt * k2[i];
        objective(stage, grad);
        for (std::size_t i = 0; i < n; ++i) k3[i] = -grad[i];
        for (std::size_t i = 0; i < n; ++i) stage[i] = theta[i] + dt * k3[i];
        objective(stage, grad);
        for (std::size_t i = 0; i < n; ++i) k4[i] = -grad[i];
        for (std::size_t i = 0; i < n; ++i)
          theta[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        break;
      }
      case Integrator::adam:
        adam.step(theta, grad, dt);
        break;
    }

    if (pending) {
      auto& cp = rec.checkpoints[pending->slot];
      cp.dtheta_dt.resize(n);
      if (pending->slot == 0 && cp.t == 0.0) {
        for (std::size_t i = 0; i < n; ++i) cp.dtheta_dt[i] = (theta[i] - pending->before[i]) / dt;
      } else {
        for (std::size_t i = 0; i < n; ++i)
          cp.dtheta_dt[i] = (theta[i] - pending->before[i]) / (2.0 * dt);
      }
      pending.reset();
    }
  }

  return rec;
}

TrajectoryRecord integrate(const NetworkSpec& spec, std::span<const double> theta0,
                           const LossKind& loss, const TrainingData& data, const FlowConfig& config,
                           Exec exec) {
  LossEvaluator eval(spec, loss, data, exec);
  if (theta0.size() != eval.param_count())
    throw std::invalid_argument("integrate: theta0 length does not match spec");
  Objective objective = [&eval](std::span<const double> th, std::span<double> g) {
    return eval(th, g);
  };
  TrajectoryRecord rec =
      integrate_objective(objective, std::vector<double>(theta0.begin(), theta0.end()), config);
  rec.spec = spec;
  rec.loss = loss;
  return rec;
}

std::vector<std::pair<int, int>> half_life_windows(std::span<const double> losses) {
  std::vector<std::pair<int, int>> windows;
  const int n = static_cast<int>(losses.size());
  int i = 0;
  while (i < n - 1) {
    int close = -1;
    for (int j = i + 1; j < n; ++j) {
      if (losses[j] <= 0.5 * losses[i]) {
        close = j;
        break;
      }
    }
    if (close < 0) {
      ++i;
      continue;
    }
    windows.emplace_back(i, close);
    i = close;
  }
  return windows;
}

std::string to_string(Integrator kind) {
  switch (kind) {
    case Integrator::gradient_flow_euler: return "gradient_flow_euler";
    case Integrator::gradient_flow_rk4: return "gradient_flow_rk4";
    case Integrator::adam: return "adam";
  }
  throw std::logic_error("unknown integrator");
}

Integrator integrator_from_string(const std::string& name) {
  if (name == "gradient_flow_euler") return Integrator::gradient_flow_euler;
  if (name == "gradient_flow_rk4") return Integrator::gradient_flow_rk4;
  if (name == "adam") return Integrator::adam;
  throw std::invalid_argument("unknown integrator: " + name);
}

}  // namespace fp
