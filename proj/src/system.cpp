// SPDX-License-Identifier: MIT
#include "secrecy/system.hpp"

#include <cmath>
#include <stdexcept>

namespace secrecy {

SystemParams validate_params(const SystemParams& p) {
  if (p.n_t < 1) throw std::invalid_argument("n_t must be a positive integer");
  if (p.T < 1) throw std::invalid_argument("T must be positive");
  if (p.T_r < 0) throw std::invalid_argument("T_r must be non-negative");
  if (p.T_f < 1) throw std::invalid_argument("T_f must be positive");
  if (p.T_d < 1) throw std::invalid_argument("T_d must be positive");
  if (p.T_r + p.T_f + p.T_d != p.T)
    throw std::invalid_argument("durations must satisfy T_r + T_f + T_d = T");
  if (!(p.sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  if (!(p.sigma_h2 > 0.0))
    throw std::invalid_argument("sigma_h2 must be positive");
  if (!(p.sigma_g2 > 0.0))
    throw std::invalid_argument("sigma_g2 must be positive");
  if (!(p.P > 0.0)) throw std::invalid_argument("P must be positive");
  SystemParams out = p;
  out.T_d = p.T - p.T_r - p.T_f;  // recompute rather than trust
  return out;
}

SystemParams with_mode_durations(const SystemParams& base, TrainingMode mode) {
  SystemParams p = base;
  p.T_r = (mode == TrainingMode::kDce) ? 1 : 0;
  p.T_d = p.T - p.T_r - p.T_f;
  return validate_params(p);
}

double reverse_error_variance(const SystemParams& p, double P_r) {
  return 1.0 / (1.0 / p.sigma_h2 + P_r * double(p.T_r) / p.sigma2);
}

ErrorVariances error_variances_dce(const SystemParams& p,
                                   const PowerAllocation& a) {
  ErrorVariances ev;
  ev.var_dhr = reverse_error_variance(p, a.P_r);
  const double pilot = a.P_f * double(p.T_f) / double(p.n_t);
  ev.var_dh = 1.0 / (1.0 / p.sigma_h2 + pilot / (a.P_fa * ev.var_dhr + p.sigma2));
  ev.var_dg = 1.0 / (1.0 / p.sigma_g2 + pilot / (a.P_fa * p.sigma_g2 + p.sigma2));
  return ev;
}

ErrorVariances error_variances_conventional(const SystemParams& p,
                                            const PowerAllocation& a) {
  ErrorVariances ev;
  ev.var_dhr = p.sigma_h2;  // no reverse stage: prior variance
  ev.var_dh = p.sigma_h2 * p.sigma2 / (a.P_f * p.sigma_h2 + p.sigma2);
  ev.var_dg = p.sigma_g2 * p.sigma2 / (a.P_f * p.sigma_g2 + p.sigma2);
  return ev;
}

ErrorVariances error_variances(const SystemParams& p, const PowerAllocation& a,
                               TrainingMode mode) {
  return mode == TrainingMode::kDce ? error_variances_dce(p, a)
                                    : error_variances_conventional(p, a);
}

double total_energy(const SystemParams& p, const PowerAllocation& a) {
  return a.P_r * double(p.T_r) + a.P_f * double(p.T_f) +
         a.P_fa * double(p.T_f) + a.P_d * double(p.T_d) +
         a.P_a * double(p.T_d);
}

double snr_db(const SystemParams& p) {
  return 10.0 * std::log10(p.P / p.sigma2);
}

double power_for_snr_db(double snr_db_value, double sigma2) {
  return sigma2 * std::pow(10.0, snr_db_value / 10.0);
}

std::string to_string(TrainingMode mode) {
  return mode == TrainingMode::kDce ? "dce" : "conventional";
}

}  // namespace secrecy
