// SPDX-License-Identifier: MIT
//
// Scalar system model for a training-based MISO wiretap link: coherence-block
// durations, channel/noise variances, the five per-phase transmit powers, and
// the closed-form LMMSE estimation-error variances for both training schemes
// (conventional one-stage forward training, and two-stage discriminatory
// training where artificial noise is sent in the null space of a reverse
// estimate during forward training).
#pragma once

#include <string>

namespace secrecy {

enum class TrainingMode { kConventional, kDce };

struct SystemParams {
  int n_t = 0;            // transmit antennas at the source
  int T = 0;              // coherence interval in channel uses
  int T_r = 0;            // reverse training length (0 in conventional mode)
  int T_f = 0;            // forward training length
  int T_d = 0;            // data phase length; T_r + T_f + T_d == T
  double sigma2 = 0.0;    // AWGN variance
  double sigma_h2 = 0.0;  // per-entry variance of the destination channel
  double sigma_g2 = 0.0;  // per-entry variance of the eavesdropper channel
  double P = 0.0;         // average transmit power budget per channel use
};

struct PowerAllocation {
  double P_r = 0.0;   // reverse pilot power (destination side)
  double P_f = 0.0;   // forward pilot power
  double P_fa = 0.0;  // artificial-noise power during forward training
  double P_d = 0.0;   // data power
  double P_a = 0.0;   // artificial-noise power during data transmission
};

struct ErrorVariances {
  double var_dhr = 0.0;  // reverse-stage estimation error variance
  double var_dh = 0.0;   // destination-channel estimation error variance
  double var_dg = 0.0;   // eavesdropper-channel estimation error variance
};

// Throws std::invalid_argument naming the first violated invariant; returns
// the validated record (with the duration identity recomputed, not trusted).
SystemParams validate_params(const SystemParams& p);

// Copy of `base` with the default durations of the given mode: T_r = 0
// (conventional) or 1 (discriminatory), T_f unchanged, T_d = T - T_r - T_f.
SystemParams with_mode_durations(const SystemParams& base, TrainingMode mode);

// Error variance of the source's reverse-stage channel estimate:
// (1/sigma_h2 + P_r T_r / sigma2)^{-1}.
double reverse_error_variance(const SystemParams& p, double P_r);

// Two-stage scheme. The destination-side error variance sees the AN leakage
// through the reverse-stage error; the eavesdropper-side one sees the AN at
// full channel variance:
//   var_dh = (1/sigma_h2 + (P_f T_f/n_t) / (P_fa var_dhr + sigma2))^{-1}
//   var_dg = (1/sigma_g2 + (P_f T_f/n_t) / (P_fa sigma_g2 + sigma2))^{-1}
ErrorVariances error_variances_dce(const SystemParams& p,
                                   const PowerAllocation& a);

// One-stage pilot-only scheme (training length equal to n_t):
//   var_dh = sigma_h2 sigma2 / (P_f sigma_h2 + sigma2), likewise for g.
ErrorVariances error_variances_conventional(const SystemParams& p,
                                            const PowerAllocation& a);

ErrorVariances error_variances(const SystemParams& p, const PowerAllocation& a,
                               TrainingMode mode);

// Total energy P_r T_r + P_f T_f + P_fa T_f + P_d T_d + P_a T_d; the budget
// constraint is total_energy <= P * T.
double total_energy(const SystemParams& p, const PowerAllocation& a);

// Transmit SNR defined as P / sigma2, reported as 10 log10(P / sigma2).
double snr_db(const SystemParams& p);
double power_for_snr_db(double snr_db_value, double sigma2);

std::string to_string(TrainingMode mode);

}  // namespace secrecy
