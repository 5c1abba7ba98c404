// SPDX-License-Identifier: MIT
//
// Secrecy-rate sandwich by Monte Carlo. The central approximation r_tilde and
// the two correction terms delta_upper/delta_lower are averages of per-sample
// expressions in four scalar statistics of the normalized channel draws:
//   H = ||h_bar||^2, Q = |g_bar^H h_bar|^2 / ||h_bar||^2,
//   U = ||N g_bar||^2, w = ||s_d||^2 (data-block squared norm).
// A SampleCache holds these per sample index so that every allocation at a
// sweep point is evaluated on common random numbers, and the deterministic
// block reduction makes results independent of worker count.
#pragma once

#include <cstdint>
#include <vector>

#include "secrecy/system.hpp"

namespace secrecy {

struct MonteCarloConfig {
  std::uint64_t samples = 20000;
  std::uint64_t seed = 42;
  bool report_stderr = true;
};

struct ValueWithError {
  double value = 0.0;
  double stderr_value = 0.0;
};

struct RateBounds {
  double r_tilde = 0.0;
  double delta_u = 0.0;
  double delta_l = 0.0;
  double stderr_r_tilde = 0.0;
  static constexpr const char* kUnits = "bits per channel use";
};

class SampleCache {
 public:
  // Draws `mc.samples` independent samples of (H, Q, U, w) for the given
  // antenna count and data-phase length, using per-index streams.
  SampleCache(int n_t, int T_d, const MonteCarloConfig& mc,
              unsigned workers = 1);

  int n_t() const { return n_t_; }
  int T_d() const { return T_d_; }
  std::uint64_t samples() const { return main_gain_.size(); }
  std::uint64_t seed() const { return seed_; }

  const std::vector<double>& main_gain() const { return main_gain_; }
  const std::vector<double>& eve_aligned() const { return eve_aligned_; }
  const std::vector<double>& eve_null() const { return eve_null_; }
  const std::vector<double>& data_norm() const { return data_norm_; }

 private:
  int n_t_;
  int T_d_;
  std::uint64_t seed_;
  std::vector<double> main_gain_;    // H
  std::vector<double> eve_aligned_;  // Q
  std::vector<double> eve_null_;     // U
  std::vector<double> data_norm_;    // w
};

// Central rate approximation, bits per channel use:
//   (T_d/T) * E[ log2(1 + P_d (sh2-vdh) H / ((P_d+P_a) vdh + s2))
//              - log2(1 + P_d (sg2-vdg) Q /
//                        (P_d vdg + P_a (sg2-vdg) U/(n_t-1) + P_a vdg + s2)) ]
ValueWithError r_tilde(const SystemParams& p, const PowerAllocation& a,
                       const ErrorVariances& ev, const SampleCache& cache,
                       unsigned workers = 1);

// Upper correction term: with A = (P_d+P_a) vdh + s2 and A0 = P_a vdh + s2,
//   (1/T) * (T_d log2 A - (T_d-1) log2 A0 - E[log2(P_d w vdh + A0)]).
ValueWithError delta_upper(const SystemParams& p, const PowerAllocation& a,
                           const ErrorVariances& ev, const SampleCache& cache,
                           unsigned workers = 1);

// Lower correction term: with B0 = P_a (sg2-vdg) U/(n_t-1) + P_a vdg + s2 and
// B = P_d vdg + B0 (both per draw),
//   (1/T) * E[T_d log2 B - (T_d-1) log2 B0 - log2(P_d w vdg + B0)].
ValueWithError delta_lower(const SystemParams& p, const PowerAllocation& a,
                           const ErrorVariances& ev, const SampleCache& cache,
                           unsigned workers = 1);

// All three on shared draws; error variances dispatched by training mode.
RateBounds secrecy_rate_bounds(const SystemParams& p, const PowerAllocation& a,
                               TrainingMode mode, const SampleCache& cache,
                               unsigned workers = 1);

// Convenience overload that builds a private cache from mc.
RateBounds secrecy_rate_bounds(const SystemParams& p, const PowerAllocation& a,
                               TrainingMode mode, const MonteCarloConfig& mc,
                               unsigned workers = 1);

// Closed-form low-SNR expansion of the secrecy rate, bits per channel use:
//   (log2 e / (T s2^2)) * [ P_d T_d P_f T_f (sh2^2 - sg2^2/n_t)
//                           + P_d^2 T_d^2 (vdh^2 - vdg^2) / 2 ].
// Does not reference P_a or P_fa at all.
double low_snr_rate(const SystemParams& p, const PowerAllocation& a,
                    const ErrorVariances& ev);

}  // namespace secrecy
