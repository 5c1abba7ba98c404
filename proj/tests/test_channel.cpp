// SPDX-License-Identifier: MIT
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "secrecy/channel.hpp"
#include "secrecy/system.hpp"

using namespace secrecy;

namespace {

SystemParams small_dce_params() {
  SystemParams p;
  p.n_t = 2;
  p.T = 8;
  p.T_r = 1;
  p.T_f = 2;
  p.T_d = 5;
  p.sigma2 = 1.0;
  p.sigma_h2 = 0.5;
  p.sigma_g2 = 0.5;
  p.P = 4.0;
  return p;
}

SystemParams small_conv_params() {
  SystemParams p = small_dce_params();
  p.T_r = 0;
  p.T_d = 6;
  p.P = 4.0;
  return p;
}

// Pooled per-entry mean squared error of one error-vector field.
template <class Member>
double empirical_mse(const SystemParams& p, const PowerAllocation& a,
                     TrainingMode mode, Member member, std::uint64_t trials,
                     std::uint64_t seed) {
  double acc = 0.0;
  std::uint64_t entries = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    TrainingRealization tr = simulate_training(p, a, mode, seed, i);
    acc += (tr.*member).squaredNorm();
    entries += static_cast<std::uint64_t>((tr.*member).size());
  }
  return acc / static_cast<double>(entries);
}

}  // namespace

TEST_CASE("null basis annihilates its vector and has orthonormal rows") {
  for (int n : {2, 3, 7, 16}) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) {
      v(i) = std::complex<double>(std::sin(1.3 * i + n), std::cos(0.7 * i));
    }
    Eigen::MatrixXcd N = null_space_basis(v);
    REQUIRE(N.rows() == n - 1);
    REQUIRE(N.cols() == n);
    CHECK((N * v).norm() <= 1e-10 * v.norm());
    Eigen::MatrixXcd gram = N * N.adjoint();
    CHECK((gram - Eigen::MatrixXcd::Identity(n - 1, n - 1)).norm() <= 1e-10);
    // The rows span exactly the orthogonal complement of v: the projector
    // N^H N must equal I - v v^H / ||v||^2.
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(n, n) -
                            v * v.adjoint() / v.squaredNorm();
    CHECK((N.adjoint() * N - proj).norm() <= 1e-10);
  }
}

TEST_CASE("null basis projector is invariant to complex rescaling") {
  Eigen::VectorXcd v(5);
  for (int i = 0; i < 5; ++i) {
    v(i) = std::complex<double>(i + 0.5, 2.0 - i);
  }
  Eigen::MatrixXcd n1 = null_space_basis(v);
  Eigen::MatrixXcd n2 = null_space_basis(std::complex<double>(0.3, -0.7) * v);
  CHECK((n1.adjoint() * n1 - n2.adjoint() * n2).norm() <= 1e-9);
}

TEST_CASE("null basis handles an axis-aligned vector and rejects degenerate input") {
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
  e1(0) = 1.0;
  Eigen::MatrixXcd N = null_space_basis(e1);
  CHECK((N * e1).norm() <= 1e-14);
  CHECK(std::abs(std::abs(N(0, 1)) - 1.0) <= 1e-14);

  CHECK_THROWS_AS(null_space_basis(Eigen::VectorXcd::Zero(4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(null_space_basis(Eigen::VectorXcd::Ones(1)),
                  std::invalid_argument);
}

TEST_CASE("normalized draws have unit-variance entries and the right gains") {
  const int n_t = 8;
  const std::uint64_t trials = 100000;
  double sum_h = 0.0, sum_q = 0.0, sum_u = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    ChannelDraw d = draw_normalized_estimates(n_t, 4242, i);
    double h2 = d.h_bar.squaredNorm();
    sum_h += h2;
    sum_q += std::norm(d.g_bar.dot(d.h_bar)) / h2;
    sum_u += (d.null_basis * d.g_bar).squaredNorm();
  }
  double n = static_cast<double>(trials);
  CHECK(sum_h / n / n_t == doctest::Approx(1.0).epsilon(0.01));
  // The aligned eavesdropper gain is unit-mean exponential regardless of n_t.
  CHECK(sum_q / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sum_u / n / (n_t - 1) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("draws are deterministic and distinct across indices") {
  ChannelDraw a = draw_normalized_estimates(4, 7, 11);
  ChannelDraw b = draw_normalized_estimates(4, 7, 11);
  CHECK(a.h_bar == b.h_bar);
  CHECK(a.g_bar == b.g_bar);
  ChannelDraw c = draw_normalized_estimates(4, 7, 12);
  CHECK(a.h_bar != c.h_bar);
  CHECK_THROWS_AS(draw_normalized_estimates(1, 7, 0), std::invalid_argument);
}

TEST_CASE("simulated training reproduces the closed-form error variances") {
  const std::uint64_t trials = 100000;

  // One-stage: P_f = 10 gives var_dh = var_dg = 1/12.
  {
    SystemParams p = validate_params(small_conv_params());
    PowerAllocation a;
    a.P_f = 10.0;
    ErrorVariances ev = error_variances_conventional(p, a);
    CHECK(empirical_mse(p, a, TrainingMode::kConventional,
                        &TrainingRealization::d_h, trials, 1) ==
          doctest::Approx(ev.var_dh).epsilon(0.02));
    CHECK(empirical_mse(p, a, TrainingMode::kConventional,
                        &TrainingRealization::d_g, trials, 1) ==
          doctest::Approx(ev.var_dg).epsilon(0.02));
  }

  // Two-stage: var_dhr = 1/4, var_dh = 1/7, var_dg = 3/16.
  {
    SystemParams p = validate_params(small_dce_params());
    PowerAllocation a;
    a.P_r = 2.0;
    a.P_f = 10.0;
    a.P_fa = 4.0;
    ErrorVariances ev = error_variances_dce(p, a);
    CHECK(ev.var_dh == doctest::Approx(1.0 / 7.0));
    CHECK(ev.var_dg == doctest::Approx(3.0 / 16.0));
    CHECK(empirical_mse(p, a, TrainingMode::kDce, &TrainingRealization::d_hr,
                        trials, 2) == doctest::Approx(0.25).epsilon(0.02));
    CHECK(empirical_mse(p, a, TrainingMode::kDce, &TrainingRealization::d_h,
                        trials, 2) == doctest::Approx(ev.var_dh).epsilon(0.02));
    CHECK(empirical_mse(p, a, TrainingMode::kDce, &TrainingRealization::d_g,
                        trials, 2) == doctest::Approx(ev.var_dg).epsilon(0.02));
  }
}

TEST_CASE("zero pilot power yields a zero estimate and the prior error") {
  SystemParams p = validate_params(small_conv_params());
  PowerAllocation a;  // P_f = 0
  TrainingRealization tr =
      simulate_training(p, a, TrainingMode::kConventional, 3, 0);
  CHECK(tr.h_hat.norm() == 0.0);
  CHECK(tr.g_hat.norm() == 0.0);
  CHECK(empirical_mse(p, a, TrainingMode::kConventional,
                      &TrainingRealization::d_h, 20000, 3) ==
        doctest::Approx(p.sigma_h2).epsilon(0.03));
}

TEST_CASE("two-stage training discriminates against the eavesdropper") {
  // Equal priors, strong AN during training: the eavesdropper's estimate must
  // come out strictly worse than the destination's.
  SystemParams p = validate_params(small_dce_params());
  p.P = 30.0;
  PowerAllocation a;
  a.P_r = 20.0;
  a.P_f = 30.0;
  a.P_fa = 60.0;
  double mse_h = empirical_mse(p, a, TrainingMode::kDce,
                               &TrainingRealization::d_h, 40000, 4);
  double mse_g = empirical_mse(p, a, TrainingMode::kDce,
                               &TrainingRealization::d_g, 40000, 4);
  CHECK(mse_h < 0.8 * mse_g);
  ErrorVariances ev = error_variances_dce(p, a);
  CHECK(mse_h == doctest::Approx(ev.var_dh).epsilon(0.03));
  CHECK(mse_g == doctest::Approx(ev.var_dg).epsilon(0.03));
}

TEST_CASE("training simulation rejects invalid setups") {
  SystemParams p = validate_params(small_dce_params());
  PowerAllocation a;
  a.P_f = 1.0;

  PowerAllocation neg = a;
  neg.P_d = -1.0;
  CHECK_THROWS_WITH_AS(simulate_training(p, neg, TrainingMode::kDce, 1, 0),
                       "powers must be non-negative", std::invalid_argument);

  PowerAllocation hog = a;
  hog.P_d = 1e9;
  CHECK_THROWS_WITH_AS(simulate_training(p, hog, TrainingMode::kDce, 1, 0),
                       "infeasible allocation: energy exceeds P*T",
                       std::invalid_argument);

  PowerAllocation an = a;
  an.P_fa = 1.0;
  SystemParams conv = validate_params(small_conv_params());
  CHECK_THROWS_WITH_AS(
      simulate_training(conv, an, TrainingMode::kConventional, 1, 0),
      "conventional mode requires T_r = P_r = P_fa = 0",
      std::invalid_argument);

  CHECK_THROWS_WITH_AS(simulate_training(conv, a, TrainingMode::kDce, 1, 0),
                       "dce mode requires T_r >= 1", std::invalid_argument);
}

TEST_CASE("training-phase AN leakage is near-Gaussian for many antennas") {
  LeakageReport big = an_leakage_gaussianity(64, 4, 2.0, 0.5, 20000, 5);
  // Per-entry variance is the product of AN power and error variance.
  CHECK(big.entry_variance == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::fabs(big.excess_kurtosis) <= 0.1);
  CHECK(big.max_cross_corr <= 0.05);

  // With two antennas the mixture has a single degree of freedom and is
  // visibly heavy-tailed; the Gaussian limit is an n_t effect.
  LeakageReport tiny = an_leakage_gaussianity(2, 4, 2.0, 0.5, 20000, 5);
  CHECK(tiny.excess_kurtosis > big.excess_kurtosis + 0.5);

  CHECK_THROWS_AS(an_leakage_gaussianity(64, 4, 1.0, 1.0, 100, 5),
                  std::invalid_argument);
}
