// SPDX-License-Identifier: MIT
//
// Channel realizations and waveform-level training simulation: normalized
// channel draws with an orthonormal null-space basis, both training schemes
// with explicit pilot/AN waveforms and per-entry LMMSE receivers, and the
// Gaussianity statistic for the AN leakage term.
#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "secrecy/system.hpp"

namespace secrecy {

struct ChannelDraw {
  Eigen::VectorXcd h_bar;       // length n_t, entries i.i.d. CN(0, 1)
  Eigen::VectorXcd g_bar;       // length n_t, entries i.i.d. CN(0, 1)
  Eigen::MatrixXcd null_basis;  // (n_t-1) x n_t, rows orthonormal, N h_bar = 0
};

struct TrainingRealization {
  Eigen::VectorXcd h, g;          // true channels
  Eigen::VectorXcd h_tilde;       // source's reverse-stage estimate
  Eigen::VectorXcd h_hat, g_hat;  // forward-stage estimates
  Eigen::VectorXcd d_hr;          // h - h_tilde
  Eigen::VectorXcd d_h;           // h - h_hat
  Eigen::VectorXcd d_g;           // g - g_hat
};

// Rows 2..n of the Householder reflector that maps v to a multiple of e_1:
// orthonormal rows, each orthogonal to v. Throws std::invalid_argument for a
// zero (or empty) vector.
Eigen::MatrixXcd null_space_basis(const Eigen::VectorXcd& v);

// Independent normalized estimates h_bar, g_bar plus the null basis of h_bar.
// Deterministic in (seed, index); requires n_t >= 2.
ChannelDraw draw_normalized_estimates(int n_t, std::uint64_t seed,
                                      std::uint64_t index);

// Full two-stage (or one-stage) training round at the waveform level.
// Pilot shapes: reverse pilot = all-ones of length T_r; forward pilot matrix
// S_f is T_f x n_t with S_f^H S_f = (T_f/n_t) I (stacked identity blocks when
// n_t divides T_f, scaled partial-DFT columns otherwise). Receivers matched-
// filter against the pilot and apply per-entry scalar LMMSE, treating the AN
// leakage as white noise of per-entry variance P_fa*var_dhr (destination) and
// P_fa*sigma_g2 (eavesdropper).
TrainingRealization simulate_training(const SystemParams& p,
                                      const PowerAllocation& a,
                                      TrainingMode mode, std::uint64_t seed,
                                      std::uint64_t index);

struct LeakageReport {
  double entry_variance = 0.0;   // pooled per-entry sample variance
  double excess_kurtosis = 0.0;  // pooled real-part excess kurtosis
  double max_cross_corr = 0.0;   // max |corr| between distinct entries
};

// Samples entries of A N dh, with A t x (n_t-1) i.i.d. CN(0, P/(n_t-1)), N a
// null-space basis of a fresh normalized draw, dh i.i.d. CN(0, var). The
// per-entry variance target is P*var; the real-part excess kurtosis target is
// 0 as n_t grows.
LeakageReport an_leakage_gaussianity(int n_t, int t, double P, double var,
                                     std::uint64_t trials, std::uint64_t seed);

}  // namespace secrecy
