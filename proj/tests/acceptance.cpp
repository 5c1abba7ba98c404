// SPDX-License-Identifier: MIT
//
// Acceptance gate. Run with a criterion number 1..13 (or "all"); each
// criterion prints its diagnostics followed by exactly one verdict line
//   [PASS] criterion N: <what held>   or   [FAIL] criterion N: <what broke>
// and the process exits 0 on pass, 1 on fail. Criteria are independent and
// deterministic: every random quantity is drawn from fixed-seed counter
// streams, so reruns produce identical output.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "secrecy/allocate.hpp"
#include "secrecy/channel.hpp"
#include "secrecy/experiments.hpp"
#include "secrecy/gp.hpp"
#include "secrecy/rates.hpp"
#include "secrecy/rng.hpp"
#include "secrecy/system.hpp"

namespace {
using namespace secrecy;

struct Verdict {
  bool ok = true;
  std::string summary;
};

constexpr double kInvLn2 = 1.4426950408889634073599246810018921;

// The default large-system shape used by the sweep-level criteria.
SystemParams canonical(TrainingMode mode, double P) {
  SystemParams base{16, 480, 1, 16, 463, 1.0, 0.5, 0.5, P};
  return validate_params(with_mode_durations(base, mode));
}

PowerAllocation proposed_alloc(const SystemParams& p, TrainingMode mode) {
  if (mode == TrainingMode::kConventional) {
    return conventional_closed_form(p);
  }
  return sca_dce(p).alloc;
}

double rate_of(const SystemParams& p, const PowerAllocation& a,
               TrainingMode mode, const SampleCache& cache) {
  return r_tilde(p, a, error_variances(p, a, mode), cache).value;
}

// Per-sample central-rate term, mirroring the library kernel, so paired
// (common-random-number) differences between two allocations can be given
// their own standard error.
double rate_term(const SystemParams& p, const PowerAllocation& a,
                 const ErrorVariances& ev, double H, double Q, double U) {
  const double num_h = a.P_d * (p.sigma_h2 - ev.var_dh);
  const double den_h = (a.P_d + a.P_a) * ev.var_dh + p.sigma2;
  const double num_q = a.P_d * (p.sigma_g2 - ev.var_dg);
  const double b_null = a.P_a * (p.sigma_g2 - ev.var_dg) / (p.n_t - 1);
  const double den_e = a.P_d * ev.var_dg + a.P_a * ev.var_dg + p.sigma2;
  const double t1 = std::log1p(num_h * H / den_h);
  const double t2 = std::log1p(num_q * Q / (b_null * U + den_e));
  return (double(p.T_d) / double(p.T)) * (t1 - t2) * kInvLn2;
}

struct PairedDiff {
  double mean = 0.0;
  double se = 0.0;
};

// mean and stderr of rate(a1) - rate(a2) over the cache's common draws.
PairedDiff paired_rate_diff(const SystemParams& p, const PowerAllocation& a1,
                            const PowerAllocation& a2, TrainingMode mode,
                            const SampleCache& cache) {
  const ErrorVariances e1 = error_variances(p, a1, mode);
  const ErrorVariances e2 = error_variances(p, a2, mode);
  const auto& H = cache.main_gain();
  const auto& Q = cache.eve_aligned();
  const auto& U = cache.eve_null();
  const std::uint64_t n = cache.samples();
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double d = rate_term(p, a1, e1, H[i], Q[i], U[i]) -
                     rate_term(p, a2, e2, H[i], Q[i], U[i]);
    sum += d;
    sumsq += d * d;
  }
  PairedDiff out;
  out.mean = sum / double(n);
  const double var = std::max(0.0, sumsq / double(n) - out.mean * out.mean);
  out.se = std::sqrt(var / double(n));
  return out;
}

// Piecewise-linear inversion: the SNR at which the (increasing) curve first
// reaches `level`.
double snr_at_level(const std::vector<double>& snr,
                    const std::vector<double>& rate, double level) {
  for (size_t i = 1; i < rate.size(); ++i) {
    if (rate[i] >= level) {
      const double f = (level - rate[i - 1]) / (rate[i] - rate[i - 1]);
      return snr[i - 1] + f * (snr[i] - snr[i - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------------
// Criterion 1: waveform-level training matches the closed-form error
// variances within 2% relative at 1e5 trials, 5 randomized sets per formula.
// ---------------------------------------------------------------------------

double empirical_mse(const SystemParams& p, const PowerAllocation& a,
                     TrainingMode mode, std::uint64_t trials,
                     std::uint64_t seed,
                     const Eigen::VectorXcd TrainingRealization::*member) {
  double acc = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const TrainingRealization r = simulate_training(p, a, mode, seed, i);
    acc += (r.*member).squaredNorm();
  }
  return acc / (double(trials) * p.n_t);
}

Verdict criterion1() {
  const std::uint64_t kTrials = 100000;
  bool ok = true;
  double worst = 0.0;
  auto judge = [&](const char* name, int set, double mse, double want) {
    const double rel = std::fabs(mse / want - 1.0);
    worst = std::max(worst, rel);
    const bool pass = rel <= 0.02;
    ok = ok && pass;
    fmt::print("  set {} {:12s} mse {:.6e} closed-form {:.6e} rel {:.4f} {}\n",
               set, name, mse, want, rel, pass ? "ok" : "VIOLATION");
  };

  for (int set = 0; set < 5; ++set) {
    // Two-stage scheme: one simulation covers the reverse-, destination- and
    // eavesdropper-side formulas at once.
    RandomStream rs(1301, Draw::kParams, std::uint64_t(set));
    SystemParams p;
    p.n_t = 2 + int(rs.uniform() * 4.0);  // 2..5
    p.T_f = p.n_t;
    p.T_r = 1 + int(rs.uniform() * 2.0);  // 1..2
    p.T_d = 8 + int(rs.uniform() * 8.0);
    p.T = p.T_r + p.T_f + p.T_d;
    p.sigma2 = 0.5 + 1.5 * rs.uniform();
    p.sigma_h2 = 0.3 + 1.2 * rs.uniform();
    p.sigma_g2 = 0.3 + 1.2 * rs.uniform();
    PowerAllocation a;
    a.P_r = 0.5 + 19.5 * rs.uniform();
    a.P_f = 0.5 + 19.5 * rs.uniform();
    a.P_fa = 0.5 + 19.5 * rs.uniform();
    p.P = total_energy(p, a) / p.T + 1.0;
    p = validate_params(p);
    const ErrorVariances ev = error_variances_dce(p, a);
    const double vr = reverse_error_variance(p, a.P_r);
    judge("reverse", set,
          empirical_mse(p, a, TrainingMode::kDce, kTrials, 500 + set,
                        &TrainingRealization::d_hr),
          vr);
    judge("dce-main", set,
          empirical_mse(p, a, TrainingMode::kDce, kTrials, 500 + set,
                        &TrainingRealization::d_h),
          ev.var_dh);
    judge("dce-eve", set,
          empirical_mse(p, a, TrainingMode::kDce, kTrials, 500 + set,
                        &TrainingRealization::d_g),
          ev.var_dg);

    // One-stage scheme: same shape without the reverse stage or training AN.
    SystemParams pc = p;
    pc.T_r = 0;
    pc.T_d = pc.T - pc.T_f;
    pc = validate_params(pc);
    PowerAllocation ac;
    ac.P_f = 0.5 + 19.5 * rs.uniform();
    pc.P = total_energy(pc, ac) / pc.T + 1.0;
    const ErrorVariances evc = error_variances_conventional(pc, ac);
    judge("conv-main", set,
          empirical_mse(pc, ac, TrainingMode::kConventional, kTrials,
                        600 + set, &TrainingRealization::d_h),
          evc.var_dh);
    judge("conv-eve", set,
          empirical_mse(pc, ac, TrainingMode::kConventional, kTrials,
                        600 + set, &TrainingRealization::d_g),
          evc.var_dg);
  }
  return {ok, fmt::format("training error variances match all five closed "
                          "forms within 2% (worst rel {:.4f}, 1e5 trials, 5 "
                          "random sets each)",
                          worst)};
}

// ---------------------------------------------------------------------------
// Criterion 2: the closed-form one-stage split spends the budget exactly, is
// a stationary point of the surrogate (finite-difference gradient <= 1e-8),
// and the finite-difference Hessian matches the closed-form curvature to
// 1e-6 relative per entry.
// ---------------------------------------------------------------------------

Verdict criterion2() {
  bool ok = true;
  std::string note;
  for (double P : {1.0, 1000.0}) {
    const SystemParams p = canonical(TrainingMode::kConventional, P);
    const PowerAllocation al = conventional_closed_form(p);
    const double budget_err = std::fabs(total_energy(p, al) - p.P * p.T);
    const bool budget_ok = budget_err <= 1e-12 * p.P * p.T;

    const auto J = [&](double f, double d) { return j_conv(p, f, d); };
    const double hf = 1e-4 * al.P_f;
    const double hd = 1e-4 * al.P_d;
    const double gf = (J(al.P_f + hf, al.P_d) - J(al.P_f - hf, al.P_d)) /
                      (2.0 * hf);
    const double gd = (J(al.P_f, al.P_d + hd) - J(al.P_f, al.P_d - hd)) /
                      (2.0 * hd);
    const bool grad_ok = std::fabs(gf) <= 1e-8 && std::fabs(gd) <= 1e-8;

    // Richardson-extrapolated second differences (h and h/2) kill the h^2
    // truncation term, leaving errors far below the 1e-6 relative budget.
    const auto hess_ff = [&](double h) {
      return (J(al.P_f + h, al.P_d) - 2.0 * J(al.P_f, al.P_d) +
              J(al.P_f - h, al.P_d)) /
             (h * h);
    };
    const auto hess_dd = [&](double h) {
      return (J(al.P_f, al.P_d + h) - 2.0 * J(al.P_f, al.P_d) +
              J(al.P_f, al.P_d - h)) /
             (h * h);
    };
    const auto hess_fd = [&](double h, double k) {
      return (J(al.P_f + h, al.P_d + k) - J(al.P_f + h, al.P_d - k) -
              J(al.P_f - h, al.P_d + k) + J(al.P_f - h, al.P_d - k)) /
             (4.0 * h * k);
    };
    const double Hf = 0.02 * al.P_f, Hd = 0.02 * al.P_d;
    const double ff = (4.0 * hess_ff(Hf / 2) - hess_ff(Hf)) / 3.0;
    const double dd = (4.0 * hess_dd(Hd / 2) - hess_dd(Hd)) / 3.0;
    const double fd = (4.0 * hess_fd(Hf / 2, Hd / 2) - hess_fd(Hf, Hd)) / 3.0;
    const Eigen::Matrix2d Hc = j_conv_hessian_closed_form(p);
    const double rff = std::fabs(ff / Hc(0, 0) - 1.0);
    const double rfd = std::fabs(fd / Hc(0, 1) - 1.0);
    const double rdd = std::fabs(dd / Hc(1, 1) - 1.0);
    const bool hess_ok = rff <= 1e-6 && rfd <= 1e-6 && rdd <= 1e-6;

    fmt::print(
        "  P={:<6g} budget |err| {:.3e} (tol {:.1e})  FD grad ({:+.3e}, "
        "{:+.3e})\n"
        "          Hessian FD vs closed form: rel ({:.2e}, {:.2e}, {:.2e})\n",
        P, budget_err, 1e-12 * p.P * p.T, gf, gd, rff, rfd, rdd);
    ok = ok && budget_ok && grad_ok && hess_ok;
  }
  return {ok,
          "closed-form one-stage split is budget-tight to 1e-12*PT, "
          "stationary (FD gradient <= 1e-8) and its curvature matches the "
          "closed form to 1e-6 relative"};
}

// ---------------------------------------------------------------------------
// Criteria 3 and 4: horizontal (dB) gap between the proposed and equal-split
// rate curves at the mid-range rate level, 1 dB grid, common random numbers.
// ---------------------------------------------------------------------------

Verdict gap_criterion(TrainingMode mode, double target, double tol) {
  MonteCarloConfig mc;
  mc.samples = 100000;
  const SystemParams shape = canonical(mode, 1.0);
  const SampleCache cache(shape.n_t, shape.T_d, mc);

  std::vector<double> snr, prop, equal;
  for (int s = 10; s <= 50; ++s) {
    SystemParams p = canonical(mode, power_for_snr_db(double(s), 1.0));
    snr.push_back(double(s));
    prop.push_back(rate_of(p, proposed_alloc(p, mode), mode, cache));
    equal.push_back(rate_of(p, equal_split(p, mode), mode, cache));
  }
  const double lo = std::max(prop.front(), equal.front());
  const double hi = std::min(prop.back(), equal.back());
  const double level = 0.5 * (lo + hi);
  const double s_prop = snr_at_level(snr, prop, level);
  const double s_eq = snr_at_level(snr, equal, level);
  const double gap = s_eq - s_prop;
  const bool ok = std::isfinite(gap) && std::fabs(gap - target) <= tol;
  fmt::print(
      "  mid-range level {:.3f} bits: proposed reaches it at {:.2f} dB, "
      "equal split at {:.2f} dB\n  horizontal gap {:.2f} dB (want {} +- {})\n",
      level, s_prop, s_eq, gap, target, tol);
  return {ok, fmt::format("optimized vs equal-split {} horizontal gap "
                          "{:.2f} dB within {} +- {} dB",
                          mode == TrainingMode::kConventional ? "one-stage"
                                                              : "two-stage",
                          gap, target, tol)};
}

Verdict criterion3() {
  return gap_criterion(TrainingMode::kConventional, 4.0, 1.0);
}
Verdict criterion4() { return gap_criterion(TrainingMode::kDce, 7.0, 1.5); }

// ---------------------------------------------------------------------------
// Criterion 5: at 40 and 50 dB the proposed allocation is within
// max(2%, 3 * paired stderr) of a resolution-20 exhaustive grid optimum,
// for both training schemes, on common random numbers.
// ---------------------------------------------------------------------------

Verdict criterion5() {
  MonteCarloConfig mc;
  mc.samples = 100000;
  bool ok = true;
  for (TrainingMode mode :
       {TrainingMode::kConventional, TrainingMode::kDce}) {
    const SystemParams shape = canonical(mode, 1.0);
    const SampleCache cache(shape.n_t, shape.T_d, mc);
    for (double snr : {40.0, 50.0}) {
      const SystemParams p = canonical(mode, power_for_snr_db(snr, 1.0));
      const PowerAllocation prop = proposed_alloc(p, mode);
      const GridSearchResult grid =
          grid_search_best(p, mode, 20, cache, {}, GridObjective::kCentral);
      const double r_prop = rate_of(p, prop, mode, cache);
      const PairedDiff d = paired_rate_diff(p, prop, grid.alloc, mode, cache);
      const double slack = std::max(0.02 * grid.value, 3.0 * d.se);
      const bool pass = r_prop >= grid.value - slack;
      ok = ok && pass;
      fmt::print(
          "  {} {:2.0f} dB: proposed {:.4f}, grid-20 {:.4f}, paired diff "
          "{:+.5f} (se {:.5f}), slack {:.4f} {}\n",
          to_string(mode), snr, r_prop, grid.value, d.mean, d.se, slack,
          pass ? "ok" : "VIOLATION");
    }
  }
  return {ok,
          "proposed allocations are within max(2%, 3*paired-stderr) of the "
          "resolution-20 grid optimum at 40 and 50 dB in both schemes"};
}

// ---------------------------------------------------------------------------
// Criterion 6: the sandwich width ratio (delta_u + delta_l) / r_tilde shrinks
// monotonically over 20..50 dB (3-sigma tolerance) and ends <= 0.05, for both
// proposed allocations.
// ---------------------------------------------------------------------------

Verdict criterion6() {
  MonteCarloConfig mc;
  mc.samples = 100000;
  bool all_ok = true;
  std::string breach;
  for (TrainingMode mode :
       {TrainingMode::kConventional, TrainingMode::kDce}) {
    const SystemParams shape = canonical(mode, 1.0);
    const SampleCache cache(shape.n_t, shape.T_d, mc);
    std::vector<double> ratio, se;
    fmt::print("  {}:\n", to_string(mode));
    for (double snr : {20.0, 30.0, 40.0, 50.0}) {
      const SystemParams p = canonical(mode, power_for_snr_db(snr, 1.0));
      const PowerAllocation a = proposed_alloc(p, mode);
      const ErrorVariances ev = error_variances(p, a, mode);
      const ValueWithError r = r_tilde(p, a, ev, cache);
      const ValueWithError du = delta_upper(p, a, ev, cache);
      const ValueWithError dl = delta_lower(p, a, ev, cache);
      const double q = (du.value + dl.value) / r.value;
      const double qse =
          (du.stderr_value + dl.stderr_value + q * r.stderr_value) / r.value;
      ratio.push_back(q);
      se.push_back(qse);
      fmt::print(
          "    {:2.0f} dB: r {:8.4f}  du {:.4f}  dl {:.4f}  width ratio "
          "{:.4f} (se {:.1e})\n",
          snr, r.value, du.value, dl.value, q, qse);
    }
    bool mode_ok = true;
    for (size_t i = 1; i < ratio.size(); ++i) {
      if (ratio[i] > ratio[i - 1] + 3.0 * (se[i] + se[i - 1])) mode_ok = false;
    }
    if (ratio.back() > 0.05 + 3.0 * se.back()) mode_ok = false;
    fmt::print("    trend {} ({} at 50 dB: {:.4f})\n",
               mode_ok ? "shrinks and ends <= 0.05"
                       : "VIOLATION (not shrinking to <= 0.05)",
               to_string(mode), ratio.back());
    if (!mode_ok && breach.empty()) {
      breach = fmt::format(
          "{} width ratio rises over SNR and ends at {:.3f} > 0.05",
          to_string(mode), ratio.back());
    }
    all_ok = all_ok && mode_ok;
  }
  if (all_ok) {
    return {true,
            "sandwich width ratio shrinks with SNR and is <= 0.05 at 50 dB "
            "for both proposed allocations"};
  }
  return {false, breach};
}

// ---------------------------------------------------------------------------
// Criterion 7: without AN the grid-optimized upper bound saturates (< 0.5
// bits growth from 40 to 60 dB) while the proposed one-stage rate keeps
// growing (>= 5 bits over the same span).
// ---------------------------------------------------------------------------

Verdict criterion7() {
  MonteCarloConfig mc;
  mc.samples = 100000;
  const SystemParams shape = canonical(TrainingMode::kConventional, 1.0);
  const SampleCache cache(shape.n_t, shape.T_d, mc);
  auto upper_noan = [&](double snr) {
    const SystemParams p =
        canonical(TrainingMode::kConventional, power_for_snr_db(snr, 1.0));
    const GridSearchResult g =
        grid_search_best(p, TrainingMode::kConventional, 20, cache, {},
                         GridObjective::kCentral, /*allow_an=*/false);
    const ErrorVariances ev =
        error_variances(p, g.alloc, TrainingMode::kConventional);
    return r_tilde(p, g.alloc, ev, cache).value +
           delta_upper(p, g.alloc, ev, cache).value;
  };
  auto rate_prop = [&](double snr) {
    const SystemParams p =
        canonical(TrainingMode::kConventional, power_for_snr_db(snr, 1.0));
    return rate_of(p, conventional_closed_form(p),
                   TrainingMode::kConventional, cache);
  };
  const double n40 = upper_noan(40.0), n60 = upper_noan(60.0);
  const double c40 = rate_prop(40.0), c60 = rate_prop(60.0);
  const double growth_noan = n60 - n40;
  const double growth_prop = c60 - c40;
  fmt::print(
      "  AN-free upper bound: {:.4f} -> {:.4f} bits (growth {:+.4f}, want < "
      "0.5)\n  proposed rate:       {:.4f} -> {:.4f} bits (growth {:+.4f}, "
      "want >= 5)\n",
      n40, n60, growth_noan, c40, c60, growth_prop);
  const bool ok = growth_noan < 0.5 && growth_prop >= 5.0;
  return {ok, fmt::format("AN-free optimum saturates ({:+.3f} bits from 40 "
                          "to 60 dB) while the proposed split grows {:+.2f} "
                          ">= 5 bits",
                          growth_noan, growth_prop)};
}

// ---------------------------------------------------------------------------
// Criterion 8: coherence-length crossover at 30 dB. The two-stage scheme
// must win for every grid T >= 80 and lose for every grid T <= 60; the
// analytical (non-optimized) two-stage allocation crosses in [200, 300].
// ---------------------------------------------------------------------------

Verdict criterion8() {
  MonteCarloConfig mc;
  mc.samples = 100000;
  const double P = power_for_snr_db(30.0, 1.0);
  std::vector<int> Ts;
  for (int T = 40; T <= 600; T += 10) Ts.push_back(T);

  std::vector<double> conv(Ts.size()), dce(Ts.size()), sub(Ts.size());
  for (size_t i = 0; i < Ts.size(); ++i) {
    SystemParams base{16, Ts[i], 1, 16, 0, 1.0, 0.5, 0.5, P};
    const SystemParams pc =
        validate_params(with_mode_durations(base, TrainingMode::kConventional));
    const SystemParams pd =
        validate_params(with_mode_durations(base, TrainingMode::kDce));
    const SampleCache cc(pc.n_t, pc.T_d, mc);
    const SampleCache cd(pd.n_t, pd.T_d, mc);
    conv[i] = rate_of(pc, conventional_closed_form(pc),
                      TrainingMode::kConventional, cc);
    dce[i] = rate_of(pd, sca_dce(pd).alloc, TrainingMode::kDce, cd);
    sub[i] = rate_of(pd, dce_suboptimal(pd), TrainingMode::kDce, cd);
    if (Ts[i] <= 100 || Ts[i] % 100 == 0) {
      fmt::print("  T={:<4d} one-stage {:7.4f}  two-stage {:7.4f}  "
                 "analytical {:7.4f}\n",
                 Ts[i], conv[i], dce[i], sub[i]);
    }
  }

  std::vector<int> high_fail, low_fail;
  for (size_t i = 0; i < Ts.size(); ++i) {
    if (Ts[i] >= 80 && !(dce[i] > conv[i])) high_fail.push_back(Ts[i]);
    if (Ts[i] <= 60 && !(dce[i] <= conv[i])) low_fail.push_back(Ts[i]);
  }
  int crossing = -1;
  for (size_t i = 1; i < Ts.size(); ++i) {
    if (sub[i] > conv[i] && sub[i - 1] <= conv[i - 1]) {
      crossing = Ts[i];
      break;
    }
  }
  const bool cross_ok = crossing >= 200 && crossing <= 300;
  fmt::print("  two-stage > one-stage violations for T >= 80: {}\n",
             high_fail.empty() ? "none" : fmt::format("{}", high_fail));
  fmt::print("  two-stage <= one-stage violations for T <= 60: {}\n",
             low_fail.empty() ? "none" : fmt::format("{}", low_fail));
  fmt::print("  analytical allocation first beats one-stage at T={} "
             "(want within [200, 300])\n",
             crossing);
  const bool ok = high_fail.empty() && low_fail.empty() && cross_ok;
  if (ok) {
    return {true, fmt::format("two-stage wins for all T >= 80, loses for all "
                              "T <= 60, analytical crossing at T={}",
                              crossing)};
  }
  std::string why;
  if (!low_fail.empty()) {
    why = fmt::format("two-stage already beats one-stage at T={} ", low_fail);
  }
  if (!high_fail.empty()) {
    why += fmt::format("two-stage loses at T={} ", high_fail);
  }
  if (!cross_ok) why += fmt::format("analytical crossing T={} ", crossing);
  return {false, why + fmt::format("(crossing at T={} is in range: {})",
                                   crossing, cross_ok ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// Criterion 9: the coherence-threshold arithmetic is exact.
// ---------------------------------------------------------------------------

Verdict criterion9() {
  const SystemParams p = canonical(TrainingMode::kDce, 1000.0);
  const double th = dce_coherence_threshold(p);
  fmt::print("  threshold(n_t=16, sigma_h2=0.5, P/sigma2=1000) = {:.17g}\n",
             th);
  const bool ok = th == 358.25;
  return {ok, fmt::format("coherence threshold equals 358.25 exactly "
                          "(got {:.17g})",
                          th)};
}

// ---------------------------------------------------------------------------
// Criterion 10: optimizer contract. 20 random strictly positive feasible
// starts give non-increasing surrogate traces (tolerance 1e-9); condensation
// is tight at every expansion point to 1e-10 relative; the three-problem
// analytic suite solves to 1e-6 relative objective error.
// ---------------------------------------------------------------------------

Monomial make_mono(double c, std::vector<std::pair<int, double>> e) {
  Monomial m;
  m.coeff = c;
  m.exponents = std::move(e);
  return m;
}

Verdict criterion10() {
  bool ok = true;
  const SystemParams p = canonical(TrainingMode::kDce, 1000.0);
  const double PT = p.P * p.T;

  // (a) monotone traces from randomized starts.
  int mono_viol = 0;
  double worst_tight = 0.0;
  for (int k = 0; k < 20; ++k) {
    RandomStream rs(4242, Draw::kParams, std::uint64_t(k));
    double u[5], s = 0.0;
    for (double& v : u) {
      v = rs.uniform();
      s += v;
    }
    const double theta = 0.4 + 0.6 * rs.uniform();
    ScaConfig cfg;
    cfg.init.P_r = theta * u[0] / s * PT / p.T_r;
    cfg.init.P_f = theta * u[1] / s * PT / p.T_f;
    cfg.init.P_fa = theta * u[2] / s * PT / p.T_f;
    cfg.init.P_d = theta * u[3] / s * PT / p.T_d;
    cfg.init.P_a = theta * u[4] / s * PT / p.T_d;
    const ScaResult res = sca_dce(p, cfg);
    for (size_t i = 1; i < res.trace.size(); ++i) {
      if (res.trace[i] >
          res.trace[i - 1] + 1e-9 * std::max(1.0, res.trace[i - 1])) {
        ++mono_viol;
        fmt::print("    start {}: trace rises at step {} ({:.12e} -> "
                   "{:.12e})\n",
                   k, i, res.trace[i - 1], res.trace[i]);
      }
    }
    // Condensation tightness at this run's expansion points, exercised on
    // the actual condensed denominator posynomial (variables r,f,fa,d,a).
    const Posynomial den{{make_mono(1.0, {{3, 1}, {2, 1}}),
                          make_mono(1.0, {{4, 1}, {2, 1}}),
                          make_mono(1.0 - 0.01, {{4, 1}, {1, 1}})}};
    for (const PowerAllocation& x : {cfg.init, res.alloc}) {
      Eigen::VectorXd v(5);
      v << x.P_r, x.P_f, x.P_fa, x.P_d, x.P_a;
      const double exact = eval(den, v);
      const double tight = eval(condense(den, v), v);
      worst_tight = std::max(worst_tight, std::fabs(tight / exact - 1.0));
    }
  }
  ok = ok && mono_viol == 0 && worst_tight <= 1e-10;
  fmt::print("  20 random starts: {} monotonicity violations; worst "
             "condensation slack {:.2e} (tol 1e-10)\n",
             mono_viol, worst_tight);

  // Randomized posynomials tighten identically.
  double worst_rand = 0.0;
  for (int k = 0; k < 20; ++k) {
    RandomStream rs(4343, Draw::kParams, std::uint64_t(k));
    const int nvars = 2 + int(rs.uniform() * 4.0);
    const int nterms = 1 + int(rs.uniform() * 6.0);
    Posynomial pos;
    for (int t = 0; t < nterms; ++t) {
      Monomial m;
      m.coeff = 0.1 + 5.0 * rs.uniform();
      for (int j = 0; j < nvars; ++j) {
        m.exponents.emplace_back(j, -2.0 + 4.0 * rs.uniform());
      }
      pos.terms.push_back(std::move(m));
    }
    Eigen::VectorXd v(nvars);
    for (int j = 0; j < nvars; ++j) v(j) = 0.1 + 9.9 * rs.uniform();
    worst_rand = std::max(
        worst_rand, std::fabs(eval(condense(pos, v), v) / eval(pos, v) - 1.0));
  }
  ok = ok && worst_rand <= 1e-10;
  fmt::print("  20 random posynomials: worst condensation slack {:.2e}\n",
             worst_rand);

  // (c) analytic solver suite.
  struct Case {
    const char* name;
    GPProblem prob;
    double want;
  };
  std::vector<Case> cases;
  {
    GPProblem a;
    a.var_count = 1;
    a.objective.terms = {make_mono(1, {{0, 1}})};
    a.ineq_constraints.push_back(Posynomial{{make_mono(2, {{0, -1}})}});
    cases.push_back({"single active constraint", a, 2.0});
    GPProblem b;
    b.var_count = 2;
    b.objective.terms = {make_mono(1, {{0, -1}, {1, -1}})};
    b.ineq_constraints.push_back(
        Posynomial{{make_mono(0.5, {{0, 1}}), make_mono(0.5, {{1, 1}})}});
    cases.push_back({"symmetric product", b, 1.0});
    GPProblem c;
    c.var_count = 2;
    c.objective.terms = {make_mono(1, {{0, 1}}), make_mono(1, {{1, 1}})};
    c.ineq_constraints.push_back(
        Posynomial{{make_mono(4, {{0, -1}, {1, -1}})}});
    cases.push_back({"arithmetic-geometric equality", c, 4.0});
  }
  for (const Case& cse : cases) {
    const GPSolution s = solve_gp(cse.prob);
    const double rel = std::fabs(s.objective_value / cse.want - 1.0);
    const bool pass = s.status == GPStatus::kOptimal && rel <= 1e-6;
    ok = ok && pass;
    fmt::print("  GP {:32s} objective {:.9f} (want {}), rel {:.2e} {}\n",
               cse.name, s.objective_value, cse.want, rel,
               pass ? "ok" : "VIOLATION");
  }
  return {ok,
          "surrogate traces are non-increasing from 20 random starts, "
          "condensation is tight to 1e-10 at every expansion point, and the "
          "analytic solver suite is exact to 1e-6"};
}

// ---------------------------------------------------------------------------
// Criterion 11: low-SNR closed form. Bitwise independent of the data-phase
// AN power, exactly zero in the symmetric single-antenna case, and matching
// the Monte Carlo sign at -20 dB on 10 randomized parameter sets.
// ---------------------------------------------------------------------------

Verdict criterion11() {
  bool ok = true;

  // (a) data-phase AN power never enters.
  {
    const SystemParams p = canonical(TrainingMode::kDce, 0.01);
    PowerAllocation a;
    a.P_r = a.P_f = a.P_fa = a.P_d = 0.01;
    const ErrorVariances ev = error_variances_dce(p, a);
    a.P_a = 0.0;
    const double base = low_snr_rate(p, a, ev);
    bool blind = true;
    for (double pa : {0.3, 7.0, 123.0}) {
      a.P_a = pa;
      blind = blind && low_snr_rate(p, a, ev) == base;
    }
    ok = ok && blind;
    fmt::print("  AN-power blindness: {} (value {:.6e})\n",
               blind ? "bitwise identical" : "VIOLATION", base);
  }

  // (b) symmetric single-antenna case vanishes identically.
  {
    SystemParams p;
    p.n_t = 1;
    p.T = 8;
    p.T_r = 1;
    p.T_f = 1;
    p.T_d = 6;
    p.sigma2 = 1.0;
    p.sigma_h2 = p.sigma_g2 = 0.7;
    p.P = 0.01;
    PowerAllocation a;
    a.P_r = a.P_f = a.P_d = 0.01;
    ErrorVariances ev;
    ev.var_dh = ev.var_dg = 0.3;
    const double v = low_snr_rate(p, a, ev);
    ok = ok && v == 0.0;
    fmt::print("  symmetric single-antenna value: {:.17g} (want exactly 0)\n",
               v);
  }

  // (c) sign agreement with Monte Carlo at -20 dB.
  MonteCarloConfig mc;
  mc.samples = 400000;
  int agree = 0;
  for (int set = 0; set < 10; ++set) {
    RandomStream rs(9876, Draw::kParams, std::uint64_t(set));
    SystemParams p;
    p.n_t = 2 + int(rs.uniform() * 3.0);  // 2..4
    p.T_f = p.n_t;
    p.T_r = 1;
    p.T_d = 20 + int(rs.uniform() * 40.0);
    p.T = p.T_r + p.T_f + p.T_d;
    p.sigma2 = 1.0;
    if (set < 5) {
      p.sigma_g2 = 0.4 + 0.3 * rs.uniform();
      p.sigma_h2 = (1.2 + 0.5 * rs.uniform()) * p.sigma_g2;  // positive side
    } else {
      p.sigma_h2 = 0.4 + 0.3 * rs.uniform();
      p.sigma_g2 = (2.2 + 0.8 * rs.uniform()) * p.sigma_h2;  // negative side
    }
    p.P = 0.01;  // -20 dB
    PowerAllocation a;
    a.P_r = a.P_f = a.P_d = p.P;  // exact budget: energy = P (T_r+T_f+T_d)
    p = validate_params(p);
    const ErrorVariances ev = error_variances_dce(p, a);
    const double closed = low_snr_rate(p, a, ev);
    const SampleCache cache(p.n_t, p.T_d, mc);
    const ValueWithError r = r_tilde(p, a, ev, cache);
    const bool same = (closed > 0) == (r.value > 0);
    agree += same;
    fmt::print(
        "  set {}: closed form {:+.3e}, MC {:+.3e} (se {:.1e}, |z|={:.1f}) "
        "{}\n",
        set, closed, r.value, r.stderr_value,
        std::fabs(r.value) / r.stderr_value, same ? "match" : "MISMATCH");
  }
  ok = ok && agree == 10;
  return {ok, fmt::format("low-SNR closed form is AN-blind bitwise, exactly "
                          "zero when symmetric, and matches the Monte Carlo "
                          "sign on {}/10 randomized sets at -20 dB",
                          agree)};
}

// ---------------------------------------------------------------------------
// Criterion 12: the training-phase AN leakage statistic is Gaussian-like at
// many antennas: per-entry variance within 2% of P * var and |excess
// kurtosis| <= 0.1 at 1e5 trials.
// ---------------------------------------------------------------------------

Verdict criterion12() {
  const double P = 2.0, var = 0.5;
  const LeakageReport rep = an_leakage_gaussianity(64, 4, P, var, 100000, 2026);
  const double rel = std::fabs(rep.entry_variance / (P * var) - 1.0);
  fmt::print(
      "  n_t=64, t=4: entry variance {:.5f} (target {:.5f}, rel {:.4f}); "
      "excess kurtosis {:+.4f}; max cross-corr {:.4f}\n",
      rep.entry_variance, P * var, rel, rep.excess_kurtosis,
      rep.max_cross_corr);
  const bool ok = rel <= 0.02 && std::fabs(rep.excess_kurtosis) <= 0.1;
  return {ok, fmt::format("AN-leakage entries have variance within 2% of "
                          "P*var and |excess kurtosis| {:.3f} <= 0.1 at 1e5 "
                          "trials",
                          std::fabs(rep.excess_kurtosis))};
}

// ---------------------------------------------------------------------------
// Criterion 13: sweeps are byte-deterministic — identical CSV across reruns
// and across worker counts, for both the SNR and the coherence drivers.
// ---------------------------------------------------------------------------

Verdict criterion13() {
  ScenarioConfig cfg;
  cfg.scenario = "determinism";
  cfg.schemes = {Scheme::kConvProposed, Scheme::kConvExhaustive,
                 Scheme::kConvEqual,    Scheme::kDceProposed,
                 Scheme::kDceExhaustive, Scheme::kDceEqual,
                 Scheme::kNoAn};
  cfg.snr_grid_db = {20.0, 30.0};
  cfg.mc.samples = 20000;
  cfg.mc.seed = 7;
  cfg.grid_resolution = 4;

  const std::string once = csv_string(run_snr_sweep(cfg));
  const std::string again = csv_string(run_snr_sweep(cfg));
  bool ok = once == again;
  fmt::print("  SNR sweep rerun, workers=1: {}\n",
             ok ? "byte-identical" : "DIFFERS");
  for (unsigned w : {3u, 5u}) {
    ScenarioConfig c2 = cfg;
    c2.workers = w;
    const bool same = csv_string(run_snr_sweep(c2)) == once;
    ok = ok && same;
    fmt::print("  SNR sweep, workers={}: {}\n", w,
               same ? "byte-identical" : "DIFFERS");
  }

  ScenarioConfig coh = cfg;
  coh.coherence_grid = {120, 480};
  coh.coherence_snr_db = 30.0;
  const std::string c_once = csv_string(run_coherence_sweep(coh));
  ScenarioConfig coh3 = coh;
  coh3.workers = 3;
  const bool c_same = csv_string(run_coherence_sweep(coh3)) == c_once &&
                      csv_string(run_coherence_sweep(coh)) == c_once;
  ok = ok && c_same;
  fmt::print("  coherence sweep rerun and workers=3: {}\n",
             c_same ? "byte-identical" : "DIFFERS");
  fmt::print("  CSV size {} bytes, {} rows\n", once.size(),
             std::count(once.begin(), once.end(), '\n') - 1);
  return {ok,
          "sweep CSV is byte-identical across reruns and worker counts "
          "{1,3,5} for both drivers"};
}

Verdict run_criterion(int n) {
  switch (n) {
    case 1: return criterion1();
    case 2: return criterion2();
    case 3: return criterion3();
    case 4: return criterion4();
    case 5: return criterion5();
    case 6: return criterion6();
    case 7: return criterion7();
    case 8: return criterion8();
    case 9: return criterion9();
    case 10: return criterion10();
    case 11: return criterion11();
    case 12: return criterion12();
    case 13: return criterion13();
    default:
      return {false, "unknown criterion"};
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    fmt::print(stderr, "usage: acceptance <1..13|all>\n");
    return 2;
  }
  if (std::strcmp(argv[1], "all") == 0) {
    int failures = 0;
    for (int n = 1; n <= 13; ++n) {
      const Verdict v = run_criterion(n);
      fmt::print("[{}] criterion {}: {}\n", v.ok ? "PASS" : "FAIL", n,
                 v.summary);
      failures += !v.ok;
    }
    fmt::print("{}/13 criteria passed\n", 13 - failures);
    return failures == 0 ? 0 : 1;
  }
  const int n = std::atoi(argv[1]);
  if (n < 1 || n > 13) {
    fmt::print(stderr, "usage: acceptance <1..13|all>\n");
    return 2;
  }
  const Verdict v = run_criterion(n);
  fmt::print("[{}] criterion {}: {}\n", v.ok ? "PASS" : "FAIL", n, v.summary);
  return v.ok ? 0 : 1;
}
