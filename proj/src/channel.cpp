// SPDX-License-Identifier: MIT
#include "secrecy/channel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "secrecy/rng.hpp"

namespace secrecy {
namespace {

using Cplx = std::complex<double>;

Eigen::VectorXcd draw_cn_vector(int n, double entry_var, std::uint64_t seed,
                                Draw purpose, std::uint64_t index) {
  RandomStream rs(seed, purpose, index);
  Eigen::VectorXcd v(n);
  const double s = std::sqrt(entry_var);
  for (int i = 0; i < n; ++i) v(i) = s * rs.complex_gaussian();
  return v;
}

// Forward pilot matrix, T_f x n_t with S^H S = (T_f/n_t) I: stacked identity
// blocks when n_t | T_f, scaled partial-DFT columns otherwise.
Eigen::MatrixXcd forward_pilot(int T_f, int n_t) {
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(T_f, n_t);
  if (T_f % n_t == 0) {
    for (int t = 0; t < T_f; ++t) S(t, t % n_t) = 1.0;
    return S;
  }
  const double scale = 1.0 / std::sqrt(double(n_t));
  const double w = 2.0 * M_PI / double(T_f);
  for (int t = 0; t < T_f; ++t)
    for (int k = 0; k < n_t; ++k)
      S(t, k) = scale * Cplx(std::cos(w * t * k), -std::sin(w * t * k));
  return S;
}

// Rows 2..n of the identity: fallback basis when the estimate is exactly the
// zero vector (no reverse pilot power), where any fixed direction is as good.
Eigen::MatrixXcd axis_completion_basis(int n) {
  return Eigen::MatrixXcd::Identity(n, n).bottomRows(n - 1);
}

}  // namespace

Eigen::MatrixXcd null_space_basis(const Eigen::VectorXcd& v) {
  const int n = static_cast<int>(v.size());
  if (n < 2)
    throw std::invalid_argument("null_space_basis needs a vector of length >= 2");
  const double norm = v.norm();
  if (!(norm > 0.0))
    throw std::invalid_argument("null_space_basis rejects the zero vector");
  // Householder reflector H = I - 2 w w^H / (w^H w) with w = v + alpha*|v|*e1
  // and alpha the phase of v(0); the sign choice adds magnitudes, so there is
  // no cancellation. H is unitary and maps v to a multiple of e1, hence its
  // rows 2..n are orthonormal and orthogonal to v.
  const Cplx v0 = v(0);
  const Cplx alpha = (std::abs(v0) > 0.0) ? v0 / std::abs(v0) : Cplx(1.0, 0.0);
  Eigen::VectorXcd w = v;
  w(0) += alpha * norm;
  const double beta = 2.0 / w.squaredNorm();
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Identity(n, n) - beta * w * w.adjoint();
  return H.bottomRows(n - 1);
}

ChannelDraw draw_normalized_estimates(int n_t, std::uint64_t seed,
                                      std::uint64_t index) {
  if (n_t < 2)
    throw std::invalid_argument("draw_normalized_estimates requires n_t >= 2");
  ChannelDraw d;
  d.h_bar = draw_cn_vector(n_t, 1.0, seed, Draw::kMainEstimate, index);
  d.g_bar = draw_cn_vector(n_t, 1.0, seed, Draw::kEveEstimate, index);
  d.null_basis = null_space_basis(d.h_bar);
  return d;
}

TrainingRealization simulate_training(const SystemParams& p,
                                      const PowerAllocation& a,
                                      TrainingMode mode, std::uint64_t seed,
                                      std::uint64_t index) {
  validate_params(p);
  if (a.P_r < 0 || a.P_f < 0 || a.P_fa < 0 || a.P_d < 0 || a.P_a < 0)
    throw std::invalid_argument("powers must be non-negative");
  if (total_energy(p, a) > p.P * double(p.T) * (1.0 + 1e-9))
    throw std::invalid_argument("infeasible allocation: energy exceeds P*T");
  if (mode == TrainingMode::kConventional && (p.T_r != 0 || a.P_r != 0 || a.P_fa != 0))
    throw std::invalid_argument("conventional mode requires T_r = P_r = P_fa = 0");
  if (mode == TrainingMode::kDce && p.T_r < 1)
    throw std::invalid_argument("dce mode requires T_r >= 1");

  const int n = p.n_t;
  TrainingRealization out;
  out.h = draw_cn_vector(n, p.sigma_h2, seed, Draw::kTrueMain, index);
  out.g = draw_cn_vector(n, p.sigma_g2, seed, Draw::kTrueEve, index);

  // Reverse stage: the destination sends an all-ones pilot of length T_r; the
  // source observes sqrt(P_r)*h*1^T + noise and takes per-entry LMMSE.
  double var_dhr = p.sigma_h2;
  if (mode == TrainingMode::kDce) {
    RandomStream noise(seed, Draw::kReverseNoise, index);
    const double sn = std::sqrt(p.sigma2);
    Eigen::VectorXcd acc(n);
    for (int i = 0; i < n; ++i) {
      Cplx s = std::sqrt(a.P_r) * out.h(i) * double(p.T_r);
      for (int t = 0; t < p.T_r; ++t) s += sn * noise.complex_gaussian();
      acc(i) = s;
    }
    const double denom =
        a.P_r * double(p.T_r) * double(p.T_r) * p.sigma_h2 +
        p.sigma2 * double(p.T_r);
    const double c_r = std::sqrt(a.P_r) * double(p.T_r) * p.sigma_h2 / denom;
    out.h_tilde = c_r * acc;
    var_dhr = reverse_error_variance(p, a.P_r);
  } else {
    out.h_tilde = Eigen::VectorXcd::Zero(n);
  }
  out.d_hr = out.h - out.h_tilde;

  // Forward stage: X = sqrt(P_f) S_f + sqrt(P_fa/(n-1)) A_f N, with N the
  // null basis of the reverse estimate, so the AN reaches the destination
  // only through the reverse estimation error.
  const Eigen::MatrixXcd S = forward_pilot(p.T_f, n);
  Eigen::MatrixXcd X = std::sqrt(a.P_f) * S;
  if (mode == TrainingMode::kDce && a.P_fa > 0.0 && n > 1) {
    const Eigen::MatrixXcd N = (out.h_tilde.norm() > 0.0)
                                   ? null_space_basis(out.h_tilde)
                                   : axis_completion_basis(n);
    RandomStream an(seed, Draw::kForwardAn, index);
    Eigen::MatrixXcd A(p.T_f, n - 1);
    for (int t = 0; t < p.T_f; ++t)
      for (int k = 0; k < n - 1; ++k) A(t, k) = an.complex_gaussian();
    X += std::sqrt(a.P_fa / double(n - 1)) * A * N;
  }

  const double sn = std::sqrt(p.sigma2);
  RandomStream nd(seed, Draw::kForwardNoiseDst, index);
  RandomStream ne(seed, Draw::kForwardNoiseEve, index);
  Eigen::VectorXcd y_d = X * out.h;
  Eigen::VectorXcd y_e = X * out.g;
  for (int t = 0; t < p.T_f; ++t) {
    y_d(t) += sn * nd.complex_gaussian();
    y_e(t) += sn * ne.complex_gaussian();
  }

  // Matched filter (n_t/T_f) S^H y reduces each observation to
  // sqrt(P_f) h_i + e_i with per-entry effective noise variance
  // (n_t/T_f) * (leakage + sigma2); then scalar LMMSE per entry.
  const double mf = double(n) / double(p.T_f);
  const Eigen::VectorXcd z_d = mf * (S.adjoint() * y_d);
  const Eigen::VectorXcd z_e = mf * (S.adjoint() * y_e);
  const double leak_d =
      (mode == TrainingMode::kDce) ? a.P_fa * var_dhr : 0.0;
  const double leak_e =
      (mode == TrainingMode::kDce) ? a.P_fa * p.sigma_g2 : 0.0;
  const double nu_d = mf * (leak_d + p.sigma2);
  const double nu_e = mf * (leak_e + p.sigma2);
  const double c_d = std::sqrt(a.P_f) * p.sigma_h2 /
                     (a.P_f * p.sigma_h2 + nu_d);
  const double c_e = std::sqrt(a.P_f) * p.sigma_g2 /
                     (a.P_f * p.sigma_g2 + nu_e);
  out.h_hat = c_d * z_d;
  out.g_hat = c_e * z_e;
  out.d_h = out.h - out.h_hat;
  out.d_g = out.g - out.g_hat;
  return out;
}

LeakageReport an_leakage_gaussianity(int n_t, int t, double P, double var,
                                     std::uint64_t trials, std::uint64_t seed) {
  if (n_t < 2) throw std::invalid_argument("an_leakage_gaussianity needs n_t >= 2");
  if (t < 1) throw std::invalid_argument("an_leakage_gaussianity needs t >= 1");
  if (trials < 10000)
    throw std::invalid_argument("an_leakage_gaussianity needs trials >= 10^4");

  const int m = n_t - 1;
  const double a_scale = std::sqrt(P / double(m));
  const double e_scale = std::sqrt(var);

  double sum_sq = 0.0;       // sum over entries of |x|^2
  double sum_re2 = 0.0;      // sum of Re(x)^2
  double sum_re4 = 0.0;      // sum of Re(x)^4
  Eigen::MatrixXcd cross = Eigen::MatrixXcd::Zero(t, t);
  Eigen::VectorXd entry_pow = Eigen::VectorXd::Zero(t);

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    ChannelDraw d = draw_normalized_estimates(n_t, seed, trial);
    RandomStream es(seed, Draw::kLeakageError, trial);
    Eigen::VectorXcd dh(n_t);
    for (int i = 0; i < n_t; ++i) dh(i) = e_scale * es.complex_gaussian();
    const Eigen::VectorXcd u = d.null_basis * dh;
    RandomStream as(seed, Draw::kLeakageAn, trial);
    Eigen::VectorXcd x(t);
    for (int r = 0; r < t; ++r) {
      Cplx s = 0.0;
      for (int k = 0; k < m; ++k) s += a_scale * as.complex_gaussian() * u(k);
      x(r) = s;
    }
    for (int r = 0; r < t; ++r) {
      const double re = x(r).real();
      sum_sq += std::norm(x(r));
      sum_re2 += re * re;
      sum_re4 += re * re * re * re;
      entry_pow(r) += std::norm(x(r));
    }
    cross += x * x.adjoint();
  }

  const double n_entries = double(trials) * double(t);
  LeakageReport rep;
  rep.entry_variance = sum_sq / n_entries;
  const double m2 = sum_re2 / n_entries;
  const double m4 = sum_re4 / n_entries;
  rep.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j < t; ++j) {
      const double c = std::abs(cross(i, j)) /
                       std::sqrt(entry_pow(i) * entry_pow(j));
      rep.max_cross_corr = std::max(rep.max_cross_corr, c);
    }
  return rep;
}

}  // namespace secrecy
