#include "fp/backprop.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace fp {

TrainingData TrainingData::from_samples(std::span<const double> xs, const BumpFunction& bump,
                                        const TargetFunction& target) {
  if (xs.empty()) throw std::invalid_argument("training data: empty sample set");
  bump.validate();
  target.validate();
  TrainingData d;
  d.kind = Kind::samples;
  d.xs.assign(xs.begin(), xs.end());
  const double w = 1.0 / static_cast<double>(xs.size());
  d.weights.assign(xs.size(), w);
  d.chi.resize(xs.size());
  d.targets.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    d.chi[i] = bump.eval(xs[i]);
    d.targets[i] = target.eval(xs[i]) * d.chi[i];
  }
  return d;
}

TrainingData TrainingData::from_quadrature(const Grid& grid, const PopulationDensity& density,
                                           const BumpFunction& bump, const TargetFunction& target) {
  grid.validate();
  bump.validate();
  target.validate();
  TrainingData d;
  d.kind = Kind::quadrature;
  const auto rho = density.sample_normalized(grid);
  const double dx = grid.spacing();
  d.xs.resize(grid.m);
  d.weights.resize(grid.m);
  d.chi.resize(grid.m);
  d.targets.resize(grid.m);
  for (int j = 0; j < grid.m; ++j) {
    d.xs[j] = grid.node(j);
    d.weights[j] = rho[j] * dx;
    d.chi[j] = bump.eval(d.xs[j]);
    d.targets[j] = target.eval(d.xs[j]) * d.chi[j];
  }
  return d;
}

NetEvaluator::NetEvaluator(const NetworkSpec& spec)
    : spec_(spec), layout_(ThetaLayout::build(spec)) {
  trace_.resize(spec_);
  const int h = spec_.depth();
  delta_.resize(h);
  for (int l = 0; l < h; ++l) delta_[l].resize(spec_.widths[l + 1]);
}

double NetEvaluator::value(std::span<const double> theta, double x) {
  return forward(spec_, theta, std::span<const double>(&x, 1), trace_);
}

double NetEvaluator::value_and_gradient(std::span<const double> theta, double x,
                                        std::span<double> grad) {
  if (grad.size() != layout_.size) throw std::invalid_argument("gradient buffer length mismatch");
  const double out = forward(spec_, theta, std::span<const double>(&x, 1), trace_);

  const int h = spec_.depth();
  // delta_[l] = d h_out / d pre[l]
  delta_[h - 1][0] = 1.0;
  for (int l = h - 1; l >= 0; --l) {
    const auto& b = layout_.blocks[l];
    const auto& in = trace_.act[l];
    const auto& dl = delta_[l];
    double* gw = grad.data() + b.weights;
    double* gb = grad.data() + b.biases;
    for (int i = 0; i < b.rows; ++i) {
      const double di = dl[i];
      double* grow = gw + std::size_t(i) * b.cols;
      for (int j = 0; j < b.cols; ++j) grow[j] = di * in[j];
      gb[i] = di;
    }
    if (l > 0) {
      const double* w = theta.data() + b.weights;
      auto& dprev = delta_[l - 1];
      const auto& z = trace_.pre[l - 1];
      for (int j = 0; j < b.cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < b.rows; ++i) s += w[std::size_t(i) * b.cols + j] * dl[i];
        dprev[j] = s * activation_deriv(spec_.activation, z[j]);
      }
    }
  }
  return out;
}

std::vector<double> grad_output(const NetworkSpec& spec, std::span<const double> theta, double x) {
  NetEvaluator eval(spec);
  std::vector<double> grad(eval.size());
  eval.value_and_gradient(theta, x, grad);
  return grad;
}

LossEvaluator::LossEvaluator(NetworkSpec spec, LossKind loss, TrainingData data, Exec exec)
    : spec_(std::move(spec)), loss_(loss), data_(std::move(data)), exec_(exec),
      n_params_(network_size(spec_)) {
  if (data_.size() == 0) throw std::invalid_argument("loss evaluator: empty data");
  plan_ = ChunkPlan{data_.size(), 16};
  const std::size_t nc = plan_.count();
  chunk_eval_.reserve(nc);
  for (std::size_t c = 0; c < nc; ++c) chunk_eval_.push_back(std::make_unique<NetEvaluator>(spec_));
  chunk_grad_.assign(nc, std::vector<double>(n_params_, 0.0));
  chunk_point_grad_.assign(nc, std::vector<double>(n_params_, 0.0));
  chunk_loss_.assign(nc, 0.0);
}

double LossEvaluator::operator()(std::span<const double> theta, std::span<double> grad) {
  if (grad.size() != n_params_) throw std::invalid_argument("gradient buffer length mismatch");

  for_each_chunk(plan_, exec_, [&](std::size_t c, std::size_t b, std::size_t e) {
    NetEvaluator& net = *chunk_eval_[c];
    auto& acc = chunk_grad_[c];
    auto& pg = chunk_point_grad_[c];
    std::memset(acc.data(), 0, acc.size() * sizeof(double));
    double local_loss = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const double h = net.value_and_gradient(theta, data_.xs[i], pg);
      const double r = data_.chi[i] * h - data_.targets[i];
      local_loss += data_.weights[i] * loss_.ell(r);
      const double scale = data_.weights[i] * loss_.ell_prime(r) * data_.chi[i];
      if (scale != 0.0)
        for (std::size_t p = 0; p < n_params_; ++p) acc[p] += scale * pg[p];
    }
    chunk_loss_[c] = local_loss;
  });

  double total = 0.0;
  std::memset(grad.data(), 0, grad.size() * sizeof(double));
  for (std::size_t c = 0; c < plan_.count(); ++c) {
    total += chunk_loss_[c];
    const auto& acc = chunk_grad_[c];
    for (std::size_t p = 0; p < n_params_; ++p) grad[p] += acc[p];
  }
  return total;
}

double LossEvaluator::loss_only(std::span<const double> theta) {
  for_each_chunk(plan_, exec_, [&](std::size_t c, std::size_t b, std::size_t e) {
    NetEvaluator& net = *chunk_eval_[c];
    double local_loss = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const double h = net.value(theta, data_.xs[i]);
      const double r = data_.chi[i] * h - data_.targets[i];
      local_loss += data_.weights[i] * loss_.ell(r);
    }
    chunk_loss_[c] = local_loss;
  });
  double total = 0.0;
  for (std::size_t c = 0; c < plan_.count(); ++c) total += chunk_loss_[c];
  return total;
}

std::vector<double> LossEvaluator::residuals(std::span<const double> theta) {
  std::vector<double> r(data_.size());
  for_each_chunk(plan_, exec_, [&](std::size_t c, std::size_t b, std::size_t e) {
    NetEvaluator& net = *chunk_eval_[c];
    for (std::size_t i = b; i < e; ++i)
      r[i] = data_.chi[i] * net.value(theta, data_.xs[i]) - data_.targets[i];
  });
  return r;
}

LossGrad grad_loss(const NetworkSpec& spec, std::span<const double> theta, const LossKind& loss,
                   const TrainingData& data, Exec exec) {
  LossEvaluator eval(spec, loss, data, exec);
  LossGrad out;
  out.grad.resize(eval.param_count());
  out.loss = eval(theta, out.grad);
  if (!std::isfinite(out.loss)) throw std::runtime_error("loss diverged (non-finite value)");
  return out;
}

double fd_check(const NetworkSpec& spec, std::span<const double> theta, const LossKind& loss,
                const TrainingData& data, double step) {
  LossEvaluator eval(spec, loss, data, Exec::serial);
  std::vector<double> grad(eval.param_count());
  eval(theta, grad);

  std::vector<double> probe(theta.begin(), theta.end());
  std::vector<double> fd(probe.size());
  double gmax = 0.0;
  for (std::size_t p = 0; p < probe.size(); ++p) {
    const double keep = probe[p];
    probe[p] = keep + step;
    const double up = eval.loss_only(probe);
    probe[p] = keep - step;
    const double down = eval.loss_only(probe);
    probe[p] = keep;
    fd[p] = (up - down) / (2.0 * step);
    gmax = std::max({gmax, std::abs(grad[p]), std::abs(fd[p])});
  }
  // relative against the gradient's scale; coordinates far below it would
  // only measure finite-difference noise. Absolute at a zero gradient.
  double worst = 0.0;
  for (std::size_t p = 0; p < probe.size(); ++p) {
    const double denom = std::max({std::abs(grad[p]), std::abs(fd[p]), 1e-3 * gmax});
    const double err = denom > 0.0 ? std::abs(grad[p] - fd[p]) / denom : std::abs(grad[p] - fd[p]);
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace fp
