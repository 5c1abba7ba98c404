// SPDX-License-Identifier: MIT
#include "secrecy/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "secrecy/channel.hpp"
#include "secrecy/parallel.hpp"
#include "secrecy/rng.hpp"

namespace secrecy {
namespace {

constexpr double kInvLn2 = 1.4426950408889634073599246810018921;

double log2_1p(double x) { return std::log1p(x) * kInvLn2; }
double log2_of(double x) { return std::log(x) * kInvLn2; }

// Per-sample coefficient bundle shared by the three estimators.
struct Kernel {
  double T = 0, T_d = 0, inv_nm1 = 0;
  double vdh = 0, vdg = 0;
  double P_d = 0, P_a = 0, s2 = 0;
  double num_h = 0;   // P_d (sh2 - vdh)
  double den_h = 0;   // (P_d + P_a) vdh + s2       (= A)
  double a0 = 0;      // P_a vdh + s2               (= A0)
  double num_q = 0;   // P_d (sg2 - vdg)
  double b_null = 0;  // P_a (sg2 - vdg) / (n_t - 1)
  double b0_fix = 0;  // P_a vdg + s2

  Kernel(const SystemParams& p, const PowerAllocation& a,
         const ErrorVariances& ev) {
    T = double(p.T);
    T_d = double(p.T_d);
    inv_nm1 = p.n_t > 1 ? 1.0 / double(p.n_t - 1) : 0.0;
    vdh = ev.var_dh;
    vdg = ev.var_dg;
    P_d = a.P_d;
    P_a = a.P_a;
    s2 = p.sigma2;
    num_h = a.P_d * (p.sigma_h2 - ev.var_dh);
    den_h = (a.P_d + a.P_a) * ev.var_dh + p.sigma2;
    a0 = a.P_a * ev.var_dh + p.sigma2;
    num_q = a.P_d * (p.sigma_g2 - ev.var_dg);
    b_null = a.P_a * (p.sigma_g2 - ev.var_dg) * inv_nm1;
    b0_fix = a.P_a * ev.var_dg + p.sigma2;
  }

  double rate_sample(double H, double Q, double U) const {
    const double t1 = log2_1p(num_h * H / den_h);
    const double den_e = P_d * vdg + b_null * U + b0_fix;
    const double t2 = log2_1p(num_q * Q / den_e);
    return (T_d / T) * (t1 - t2);
  }

  double upper_sample(double w) const {
    return (T_d * log2_of(den_h) - (T_d - 1.0) * log2_of(a0) -
            log2_of(P_d * w * vdh + a0)) /
           T;
  }

  double lower_sample(double U, double w) const {
    const double b0 = b_null * U + b0_fix;
    const double b = P_d * vdg + b0;
    return (T_d * log2_of(b) - (T_d - 1.0) * log2_of(b0) -
            log2_of(P_d * w * vdg + b0)) /
           T;
  }
};

void check_compatible(const SystemParams& p, const SampleCache& cache) {
  if (cache.n_t() != p.n_t || cache.T_d() != p.T_d)
    throw std::invalid_argument(
        "sample cache was built for different n_t or T_d");
}

}  // namespace

SampleCache::SampleCache(int n_t, int T_d, const MonteCarloConfig& mc,
                         unsigned workers)
    : n_t_(n_t), T_d_(T_d), seed_(mc.seed) {
  if (n_t < 2) throw std::invalid_argument("SampleCache requires n_t >= 2");
  if (T_d < 1) throw std::invalid_argument("SampleCache requires T_d >= 1");
  if (mc.samples < 1) throw std::invalid_argument("samples must be >= 1");
  main_gain_.resize(mc.samples);
  eve_aligned_.resize(mc.samples);
  eve_null_.resize(mc.samples);
  data_norm_.resize(mc.samples);
  const std::uint64_t seed = mc.seed;
  for_each_index(mc.samples, workers, [&](std::uint64_t i) {
    const ChannelDraw d = draw_normalized_estimates(n_t, seed, i);
    const double H = d.h_bar.squaredNorm();
    main_gain_[i] = H;
    eve_aligned_[i] = std::norm(d.g_bar.dot(d.h_bar)) / H;
    eve_null_[i] = (d.null_basis * d.g_bar).squaredNorm();
    RandomStream ws(seed, Draw::kDataNorm, i);
    double w = 0.0;
    for (int k = 0; k < T_d; ++k) w += ws.exponential();
    data_norm_[i] = w;
  });
}

ValueWithError r_tilde(const SystemParams& p, const PowerAllocation& a,
                       const ErrorVariances& ev, const SampleCache& cache,
                       unsigned workers) {
  check_compatible(p, cache);
  const Kernel k(p, a, ev);
  const auto& H = cache.main_gain();
  const auto& Q = cache.eve_aligned();
  const auto& U = cache.eve_null();
  const auto m = reduce_indexed<1>(
      cache.samples(), workers, [&](std::uint64_t i) -> std::array<double, 1> {
        return {k.rate_sample(H[i], Q[i], U[i])};
      });
  return {m.mean(0), m.stderr_mean(0)};
}

ValueWithError delta_upper(const SystemParams& p, const PowerAllocation& a,
                           const ErrorVariances& ev, const SampleCache& cache,
                           unsigned workers) {
  check_compatible(p, cache);
  const Kernel k(p, a, ev);
  const auto& w = cache.data_norm();
  const auto m = reduce_indexed<1>(
      cache.samples(), workers, [&](std::uint64_t i) -> std::array<double, 1> {
        return {k.upper_sample(w[i])};
      });
  return {m.mean(0), m.stderr_mean(0)};
}

ValueWithError delta_lower(const SystemParams& p, const PowerAllocation& a,
                           const ErrorVariances& ev, const SampleCache& cache,
                           unsigned workers) {
  check_compatible(p, cache);
  const Kernel k(p, a, ev);
  const auto& U = cache.eve_null();
  const auto& w = cache.data_norm();
  const auto m = reduce_indexed<1>(
      cache.samples(), workers, [&](std::uint64_t i) -> std::array<double, 1> {
        return {k.lower_sample(U[i], w[i])};
      });
  return {m.mean(0), m.stderr_mean(0)};
}

RateBounds secrecy_rate_bounds(const SystemParams& p, const PowerAllocation& a,
                               TrainingMode mode, const SampleCache& cache,
                               unsigned workers) {
  check_compatible(p, cache);
  const ErrorVariances ev = error_variances(p, a, mode);
  const Kernel k(p, a, ev);
  const auto& H = cache.main_gain();
  const auto& Q = cache.eve_aligned();
  const auto& U = cache.eve_null();
  const auto& w = cache.data_norm();
  const auto m = reduce_indexed<3>(
      cache.samples(), workers, [&](std::uint64_t i) -> std::array<double, 3> {
        return {k.rate_sample(H[i], Q[i], U[i]), k.upper_sample(w[i]),
                k.lower_sample(U[i], w[i])};
      });
  RateBounds b;
  b.r_tilde = m.mean(0);
  b.delta_u = m.mean(1);
  b.delta_l = m.mean(2);
  b.stderr_r_tilde = m.stderr_mean(0);
  return b;
}

RateBounds secrecy_rate_bounds(const SystemParams& p, const PowerAllocation& a,
                               TrainingMode mode, const MonteCarloConfig& mc,
                               unsigned workers) {
  const SampleCache cache(p.n_t, p.T_d, mc, workers);
  return secrecy_rate_bounds(p, a, mode, cache, workers);
}

double low_snr_rate(const SystemParams& p, const PowerAllocation& a,
                    const ErrorVariances& ev) {
  const double sh4 = p.sigma_h2 * p.sigma_h2;
  const double sg4 = p.sigma_g2 * p.sigma_g2;
  const double vdh2 = ev.var_dh * ev.var_dh;
  const double vdg2 = ev.var_dg * ev.var_dg;
  const double td = double(p.T_d);
  const double tf = double(p.T_f);
  const double training = a.P_d * td * a.P_f * tf * (sh4 - sg4 / double(p.n_t));
  const double refinement = a.P_d * a.P_d * td * td * (vdh2 - vdg2) / 2.0;
  return kInvLn2 / (double(p.T) * p.sigma2 * p.sigma2) *
         (training + refinement);
}

}  // namespace secrecy
