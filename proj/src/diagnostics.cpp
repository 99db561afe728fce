#include "fp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace fp {

double CheckpointDiagnostics::rate_denominator(bool rho_family) const {
  if (gradient_flow) return velocity_norm * velocity_norm;
  return std::abs(rho_family ? chain_total_rho : chain_total_plain);
}

std::vector<int> detect_peaks(const Spectrum& fhat, double rel_threshold) {
  const Grid& g = fhat.grid;
  std::vector<double> mag(g.m);
  double peak = 0.0;
  for (int i = 0; i < g.m; ++i) {
    mag[i] = std::abs(fhat.coeff[i]);
    peak = std::max(peak, mag[i]);
  }
  std::vector<int> bins;
  const double floor = rel_threshold * peak;
  for (int k = 0; k < g.m / 2; ++k) {
    const int i = g.index_of_bin(k);
    const double left = k == 0 ? mag[g.index_of_bin(1)] : mag[i - 1];
    const double right = i + 1 < g.m ? mag[i + 1] : 0.0;
    if (mag[i] >= floor && mag[i] > left && mag[i] >= right) bins.push_back(k);
  }
  return bins;
}

std::vector<double> peak_relative_errors(const Spectrum& hhat, const Spectrum& fhat,
                                         std::span<const int> peak_bins) {
  if (hhat.grid != fhat.grid) throw std::invalid_argument("peak errors: grid mismatch");
  std::vector<double> errs;
  errs.reserve(peak_bins.size());
  for (int k : peak_bins) {
    const cplx f = fhat.at_bin(k);
    const double fm = std::abs(f);
    if (fm == 0.0) throw std::invalid_argument("peak errors: |fhat| vanishes at requested bin");
    errs.push_back(std::abs(hhat.at_bin(k) - f) / fm);
  }
  return errs;
}

PowerLawFit eta_decay_fit(std::span<const double> etas, std::span<const double> ratios) {
  if (etas.size() != ratios.size()) throw std::invalid_argument("eta fit: length mismatch");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (etas[i] > 0.0 && ratios[i] > 0.0) {
      x.push_back(std::log(etas[i]));
      y.push_back(std::log(ratios[i]));
    }
  }
  PowerLawFit fit;
  fit.points_used = static_cast<int>(x.size());
  if (x.size() < 3) return fit;

  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.ok = true;
  return fit;
}

double dissipation_fraction(std::span<const CheckpointDiagnostics> rows, std::size_t eta_index) {
  int total = 0, dissipative = 0;
  for (const auto& row : rows) {
    if (row.degenerate) continue;
    ++total;
    const double tol = 1e-8 * row.rate_denominator(true);
    if (row.rho[eta_index].dL_minus_dt <= tol) ++dissipative;
  }
  return total == 0 ? 0.0 : static_cast<double>(dissipative) / total;
}

WindowDiagnostics window_ratios(std::span<const CheckpointDiagnostics> rows, int i1, int i2,
                                std::size_t eta_index) {
  if (i2 - i1 < 1 || i1 < 0 || i2 >= static_cast<int>(rows.size()))
    throw std::invalid_argument("window ratios: window too short");
  WindowDiagnostics w;
  w.i1 = i1;
  w.i2 = i2;
  w.t1 = rows[i1].t;
  w.t2 = rows[i2].t;

  const double l1 = rows[i1].L_plain;
  const double l2 = rows[i2].L_plain;
  w.relaxed = !(l2 <= 0.5 * l1);

  double num_low = 0.0, num_high = 0.0, den = 0.0;
  for (int i = i1; i < i2; ++i) {
    const double dt = rows[i + 1].t - rows[i].t;
    const auto& a = rows[i].plain[eta_index];
    const auto& b = rows[i + 1].plain[eta_index];
    num_low += 0.5 * dt * (std::abs(a.dL_minus_dt) + std::abs(b.dL_minus_dt));
    num_high += 0.5 * dt * (std::abs(a.dL_plus_dt) + std::abs(b.dL_plus_dt));
    den += 0.5 * dt * (std::abs(rows[i].chain_total_plain) + std::abs(rows[i + 1].chain_total_plain));
  }
  if (den == 0.0) throw std::invalid_argument("window ratios: stationary window, denominator 0");
  w.integrated_low = num_low / den;
  w.integrated_high = num_high / den;

  const double dq_den = std::abs(l1 - l2);
  if (dq_den == 0.0) throw std::invalid_argument("window ratios: loss difference vanishes");
  w.difference_quotient =
      std::abs(rows[i1].plain[eta_index].L_plus - rows[i2].plain[eta_index].L_plus) / dq_den;
  return w;
}

double spearman_rank_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("spearman: need two equal-length series");
  auto ranks = [](std::span<const double> v) {
    std::vector<int> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) r[order[pos]] = static_cast<double>(pos);
    return r;
  };
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sa += ra[i];
    sb += rb[i];
    saa += ra[i] * ra[i];
    sbb += rb[i] * rb[i];
    sab += ra[i] * rb[i];
  }
  const double cov = sab - sa * sb / n;
  const double va = saa - sa * sa / n;
  const double vb = sbb - sb * sb / n;
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

DiagnosticsEngine::DiagnosticsEngine(DiagnosticsConfig cfg, NetworkSpec spec)
    : cfg_(std::move(cfg)), spec_(std::move(spec)), plan_(cfg_.grid) {
  spec_.validate();
  cfg_.bump.validate();
  cfg_.target.validate();
  if (cfg_.etas.empty()) throw std::invalid_argument("diagnostics: empty eta sweep");
  n_params_ = network_size(spec_);

  const Grid& g = cfg_.grid;
  chi_.resize(g.m);
  const auto rho = cfg_.density.sample_normalized(g);
  sqrt_rho_.resize(g.m);
  SampledField f_plain(g), f_rho(g);
  for (int j = 0; j < g.m; ++j) {
    const double x = g.node(j);
    chi_[j] = cfg_.bump.eval(x);
    sqrt_rho_[j] = std::sqrt(rho[j]);
    f_plain.values[j] = cfg_.target.eval(x) * chi_[j];
    f_rho.values[j] = f_plain.values[j] * sqrt_rho_[j];
  }
  fhat_plain_ = dft(f_plain);
  fhat_rho_ = dft(f_rho);
  peaks_ = detect_peaks(fhat_plain_, cfg_.peak_threshold);
}

CheckpointDiagnostics DiagnosticsEngine::analyze(const Checkpoint& cp, bool gradient_flow) const {
  const Grid& g = cfg_.grid;
  const int m = g.m;
  const std::size_t n = n_params_;
  const std::span<const double> theta(cp.theta);
  const std::span<const double> v(cp.dtheta_dt);
  if (cp.theta.size() != n || cp.dtheta_dt.size() != n)
    throw std::invalid_argument("diagnostics: checkpoint does not match spec");

  CheckpointDiagnostics row;
  row.t = cp.t;
  row.flags = cp.flags;
  row.gradient_flow = gradient_flow;
  row.training_loss = cp.loss;
  {
    double s = 0.0;
    for (double x : v) s += x * x;
    row.velocity_norm = std::sqrt(s);
  }
  row.degenerate = row.velocity_norm < cfg_.degenerate_guard;

  // pass 1: cutoff-weighted output and per-parameter gradient fields, stored
  // column-major so the backprop writes are contiguous
  std::vector<double> gmat(n * static_cast<std::size_t>(m));
  SampledField h_plain(g), h_rho(g);
  {
    ChunkPlan plan{static_cast<std::size_t>(m), 64};
    for_each_chunk(plan, cfg_.exec, [&](std::size_t, std::size_t b, std::size_t e) {
      NetEvaluator net(spec_);
      std::vector<double> col(n);
      for (std::size_t j = b; j < e; ++j) {
        const double x = g.node(static_cast<int>(j));
        const double h = net.value_and_gradient(theta, x, col);
        h_plain.values[j] = chi_[j] * h;
        h_rho.values[j] = h_plain.values[j] * sqrt_rho_[j];
        double* dst = gmat.data() + j * n;
        const double c = chi_[j];
        for (std::size_t p = 0; p < n; ++p) dst[p] = c * col[p];
      }
    });
  }

  Spectrum hhat_plain;
  hhat_plain.grid = g;
  hhat_plain.coeff.resize(m);
  plan_.forward(h_plain.values, hhat_plain.coeff);
  Spectrum hhat_rho;
  hhat_rho.grid = g;
  hhat_rho.coeff.resize(m);
  plan_.forward(h_rho.values, hhat_rho.coeff);

  std::vector<cplx> r_plain(m), r_rho(m);
  std::vector<double> q_plain(m), q_rho(m);
  for (int i = 0; i < m; ++i) {
    r_plain[i] = hhat_plain.coeff[i] - fhat_plain_.coeff[i];
    r_rho[i] = hhat_rho.coeff[i] - fhat_rho_.coeff[i];
    q_plain[i] = std::norm(r_plain[i]);
    q_rho[i] = std::norm(r_rho[i]);
  }

  // pass 2: batched per-parameter transforms with chunk-local accumulators
  const std::size_t chunk_params = 64;
  ChunkPlan pplan{n, chunk_params};
  const std::size_t nc = pplan.count();
  std::vector<std::vector<cplx>> acc_u_pl(nc), acc_u_rho(nc);
  std::vector<std::vector<double>> acc_g_pl(nc), acc_g_rho(nc), acc_q_pl(nc), acc_q_rho(nc);

  for_each_chunk(pplan, cfg_.exec, [&](std::size_t c, std::size_t b, std::size_t e) {
    auto& u_pl = acc_u_pl[c];
    auto& u_rho = acc_u_rho[c];
    auto& g_pl = acc_g_pl[c];
    auto& g_rho = acc_g_rho[c];
    auto& qg_pl = acc_q_pl[c];
    auto& qg_rho = acc_q_rho[c];
    u_pl.assign(m, cplx(0.0, 0.0));
    u_rho.assign(m, cplx(0.0, 0.0));
    g_pl.assign(m, 0.0);
    g_rho.assign(m, 0.0);
    qg_pl.assign(m, 0.0);
    qg_rho.assign(m, 0.0);

    std::vector<double> field(m);
    std::vector<cplx> spec_buf(m);
    for (std::size_t p = b; p < e; ++p) {
      const double vp = v[p];
      for (int j = 0; j < m; ++j) field[j] = gmat[std::size_t(j) * n + p];
      plan_.forward(field, spec_buf);
      for (int i = 0; i < m; ++i) {
        const cplx gh = spec_buf[i];
        u_pl[i] += vp * gh;
        g_pl[i] += std::norm(gh);
        const double dq = 2.0 * (gh * std::conj(r_plain[i])).real();
        qg_pl[i] += dq * dq;
      }
      for (int j = 0; j < m; ++j) field[j] *= sqrt_rho_[j];
      plan_.forward(field, spec_buf);
      for (int i = 0; i < m; ++i) {
        const cplx gh = spec_buf[i];
        u_rho[i] += vp * gh;
        g_rho[i] += std::norm(gh);
        const double dq = 2.0 * (gh * std::conj(r_rho[i])).real();
        qg_rho[i] += dq * dq;
      }
    }
  });

  std::vector<cplx> u_pl(m, cplx(0.0, 0.0)), u_rho(m, cplx(0.0, 0.0));
  std::vector<double> gsq_pl(m, 0.0), gsq_rho(m, 0.0), qgsq_pl(m, 0.0), qgsq_rho(m, 0.0);
  for (std::size_t c = 0; c < nc; ++c) {
    for (int i = 0; i < m; ++i) {
      u_pl[i] += acc_u_pl[c][i];
      u_rho[i] += acc_u_rho[c][i];
      gsq_pl[i] += acc_g_pl[c][i];
      gsq_rho[i] += acc_g_rho[c][i];
      qgsq_pl[i] += acc_q_pl[c][i];
      qgsq_rho[i] += acc_q_rho[c][i];
    }
  }

  // chain-rule band rates: dq/dt(xi_k) = 2 Re[ (dhhat/dt)_k conj(rhat_k) ]
  std::vector<double> dqdt_pl(m), dqdt_rho(m), usq_pl(m);
  for (int i = 0; i < m; ++i) {
    dqdt_pl[i] = 2.0 * (u_pl[i] * std::conj(r_plain[i])).real();
    dqdt_rho[i] = 2.0 * (u_rho[i] * std::conj(r_rho[i])).real();
    usq_pl[i] = std::norm(u_pl[i]);
  }

  const std::size_t ne = cfg_.etas.size();
  row.plain.resize(ne);
  row.rho.resize(ne);
  row.out_low.resize(ne);
  row.out_high.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    const BandMask mask{g, cfg_.etas[e]};
    const BandEnergies qp = band_split(q_plain, mask);
    const BandEnergies qr = band_split(q_rho, mask);
    const BandEnergies dp = band_split(dqdt_pl, mask);
    const BandEnergies dr = band_split(dqdt_rho, mask);
    row.plain[e] = {qp.low, qp.high, dp.low, dp.high};
    row.rho[e] = {qr.low, qr.high, dr.low, dr.high};
    const BandEnergies uu = band_split(usq_pl, mask);
    const double total = uu.total();
    if (total > 0.0) {
      row.out_low[e] = std::sqrt(uu.low / total);
      row.out_high[e] = std::sqrt(uu.high / total);
    } else {
      row.out_low[e] = 0.0;
      row.out_high[e] = 0.0;
      row.degenerate = true;
    }
  }

  {
    const BandMask full{g, g.nyquist()};
    row.L_plain = band_split(q_plain, full).total();
    row.L_rho = band_split(q_rho, full).total();
    row.chain_total_plain = band_split(dqdt_pl, full).total();
    row.chain_total_rho = band_split(dqdt_rho, full).total();
    row.out_norm_sq = band_split(usq_pl, full).total();

    BandMask top{g, g.nyquist() / 2.0};
    const BandEnergies oct = band_split(q_plain, top);
    row.top_octave_fraction = oct.total() > 0.0 ? oct.high / oct.total() : 0.0;
  }
  if (row.degenerate) row.flags |= kFlagDegenerateGradient;

  row.peak_errors = peak_relative_errors(hhat_plain, fhat_plain_, peaks_);

  // bracket-weighted norms of the lemma quantities, m = 0..cap
  const int mmax = cfg_.max_bracket_order;
  std::vector<double> mag(m);
  auto fill_mag_c = [&](const std::vector<cplx>& src) {
    for (int i = 0; i < m; ++i) mag[i] = std::abs(src[i]);
  };
  auto fill_mag_sqrt = [&](const std::vector<double>& src) {
    for (int i = 0; i < m; ++i) mag[i] = std::sqrt(src[i]);
  };
  for (int mm = 0; mm <= mmax; ++mm) {
    fill_mag_c(hhat_plain.coeff);
    row.norms.h_hat.push_back(bracket_weighted_norm(mag, g, mm, 2));
    fill_mag_c(fhat_plain_.coeff);
    row.norms.f_hat.push_back(bracket_weighted_norm(mag, g, mm, 2));
    fill_mag_sqrt(gsq_pl);
    row.norms.grad_h_hat.push_back(bracket_weighted_norm(mag, g, mm, 2));
    fill_mag_sqrt(qgsq_pl);
    row.norms.grad_q_l1.push_back(bracket_weighted_norm(mag, g, mm, 1));
    fill_mag_c(hhat_rho.coeff);
    row.norms.h_hat_rho.push_back(bracket_weighted_norm(mag, g, mm, 2));
    fill_mag_c(fhat_rho_.coeff);
    row.norms.f_hat_rho.push_back(bracket_weighted_norm(mag, g, mm, 2));
    fill_mag_sqrt(gsq_rho);
    row.norms.grad_h_hat_rho.push_back(bracket_weighted_norm(mag, g, mm, 2));
    fill_mag_sqrt(qgsq_rho);
    row.norms.grad_q_rho_l1.push_back(bracket_weighted_norm(mag, g, mm, 1));
  }

  return row;
}

void write_diagnostics_csv(std::ostream& os, std::span<const CheckpointDiagnostics> rows,
                           std::span<const double> etas, const LossKind& loss,
                           std::size_t n_peaks) {
  const bool rho_family = loss.mse_equivalent();
  os << "t,eta,L,L_minus,L_plus,dL_minus_dt,dL_plus_dt,ratio_low,ratio_high,out_ratio_low,out_ratio_high";
  for (std::size_t p = 1; p <= n_peaks; ++p) os << ",peak_err_" << p;
  os << ",flags\n";

  char buf[64];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    os << ',' << buf;
  };
  for (const auto& row : rows) {
    for (std::size_t e = 0; e < etas.size(); ++e) {
      const BandRates& band = rho_family ? row.rho[e] : row.plain[e];
      const double denom = row.rate_denominator(rho_family);
      const bool bad = row.degenerate || denom == 0.0;
      std::snprintf(buf, sizeof(buf), "%.17g", row.t);
      os << buf;
      put(etas[e]);
      put(band.L_minus + band.L_plus);
      put(band.L_minus);
      put(band.L_plus);
      put(band.dL_minus_dt);
      put(band.dL_plus_dt);
      put(bad ? std::nan("") : std::abs(band.dL_minus_dt) / denom);
      put(bad ? std::nan("") : std::abs(band.dL_plus_dt) / denom);
      put(row.out_low[e]);
      put(row.out_high[e]);
      for (std::size_t p = 0; p < n_peaks; ++p)
        put(p < row.peak_errors.size() ? row.peak_errors[p] : std::nan(""));
      os << ',';
      std::string flags;
      if (row.degenerate) flags += "degenerate";
      if (row.flags & kFlagBoundExceeded) flags += flags.empty() ? "bound" : "+bound";
      if (row.top_octave_fraction > 1e-3) flags += flags.empty() ? "underresolved" : "+underresolved";
      os << (flags.empty() ? "-" : flags) << '\n';
    }
  }
}

}  // namespace fp
