// SPDX-License-Identifier: MIT
#include "secrecy/allocate.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace secrecy {
namespace {

// Variable order used by every GP built here.
enum : int { kVr = 0, kVf = 1, kVfa = 2, kVd = 3, kVa = 4 };
constexpr int kNumVars = 5;

Monomial mono(double coeff,
              std::initializer_list<std::pair<int, double>> exps) {
  Monomial m;
  m.coeff = coeff;
  m.exponents.assign(exps.begin(), exps.end());
  return m;
}

// The three condensable denominator terms of the inverse surrogate:
// P_d P_fa + P_a P_fa + (1 - eps') P_a P_f.
Posynomial denominator_core(double eps_prime) {
  Posynomial n3;
  n3.terms = {mono(1.0, {{kVd, 1.0}, {kVfa, 1.0}}),
              mono(1.0, {{kVa, 1.0}, {kVfa, 1.0}}),
              mono(1.0 - eps_prime, {{kVa, 1.0}, {kVf, 1.0}})};
  return n3;
}

Eigen::VectorXd as_vector(const PowerAllocation& a) {
  Eigen::VectorXd x(kNumVars);
  x << a.P_r, a.P_f, a.P_fa, a.P_d, a.P_a;
  return x;
}

PowerAllocation from_vector(const Eigen::VectorXd& x) {
  PowerAllocation a;
  a.P_r = x(kVr);
  a.P_f = x(kVf);
  a.P_fa = x(kVfa);
  a.P_d = x(kVd);
  a.P_a = x(kVa);
  return a;
}

// Builds the GP solved at one SCA iteration: minimize the inverse surrogate
// with its posynomial denominator replaced by the monomial condensed at
// `prev`, under the (relaxed-to-inequality) energy budget.
GPProblem build_sca_gp(const SystemParams& p, const Eigen::VectorXd& prev,
                       double eps_prime, bool sigma_retaining) {
  GPProblem prob;
  prob.var_count = kNumVars;

  if (!sigma_retaining) {
    Posynomial n1;
    n1.terms = {mono(1.0, {{kVd, 1.0}, {kVfa, 1.0}}),
                mono(1.0, {{kVd, 1.0}, {kVr, 1.0}}),
                mono(1.0, {{kVa, 1.0}, {kVfa, 1.0}}),
                mono(1.0, {{kVa, 1.0}, {kVr, 1.0}}),
                mono(1.0, {{kVr, 1.0}, {kVf, 1.0}})};
    Posynomial n2 = denominator_core(eps_prime);
    n2.terms.push_back(mono(1.0, {{kVd, 1.0}, {kVf, 1.0}}));
    Monomial denom = mono(1.0, {{kVr, 1.0}, {kVf, 1.0}, {kVd, 1.0}});
    Monomial core = condense(denominator_core(eps_prime), prev);
    denom.coeff *= core.coeff;
    denom.exponents.insert(denom.exponents.end(), core.exponents.begin(),
                           core.exponents.end());
    prob.objective = (n1 * n2) / denom;
  } else {
    const double s2 = p.sigma2, sh2 = p.sigma_h2, sg2 = p.sigma_g2;
    // (P_d + P_a)(sigma^2 + P_r sigma_h^2 + P_fa sigma_h^2)
    //   + P_f (sigma^2 + P_r sigma_h^2)
    Posynomial d1;
    d1.terms = {mono(s2, {{kVd, 1.0}}),
                mono(sh2, {{kVd, 1.0}, {kVr, 1.0}}),
                mono(sh2, {{kVd, 1.0}, {kVfa, 1.0}}),
                mono(s2, {{kVa, 1.0}}),
                mono(sh2, {{kVa, 1.0}, {kVr, 1.0}}),
                mono(sh2, {{kVa, 1.0}, {kVfa, 1.0}}),
                mono(s2, {{kVf, 1.0}}),
                mono(sh2, {{kVf, 1.0}, {kVr, 1.0}})};
    // (P_d + P_a)(P_fa sigma_g^2 + sigma^2) + (1 - eps') P_a P_f sigma_g^2
    Posynomial n2s;
    n2s.terms = {mono(sg2, {{kVd, 1.0}, {kVfa, 1.0}}),
                 mono(s2, {{kVd, 1.0}}),
                 mono(sg2, {{kVa, 1.0}, {kVfa, 1.0}}),
                 mono(s2, {{kVa, 1.0}}),
                 mono((1.0 - eps_prime) * sg2, {{kVa, 1.0}, {kVf, 1.0}})};
    Posynomial d2 = n2s;
    d2.terms.push_back(mono(sg2, {{kVd, 1.0}, {kVf, 1.0}}));
    Posynomial noise_floor;
    noise_floor.terms = {mono(s2, {}), mono(sh2, {{kVr, 1.0}})};

    Monomial denom = mono(1.0, {{kVd, 1.0}, {kVf, 1.0}});
    for (const Monomial& c : {condense(noise_floor, prev), condense(n2s, prev)}) {
      denom.coeff *= c.coeff;
      denom.exponents.insert(denom.exponents.end(), c.exponents.begin(),
                             c.exponents.end());
    }
    prob.objective = (d1 * d2) / denom;
  }

  const double budget = p.P * static_cast<double>(p.T);
  Posynomial energy;
  energy.terms = {mono(p.T_r / budget, {{kVr, 1.0}}),
                  mono(p.T_f / budget, {{kVf, 1.0}}),
                  mono(p.T_f / budget, {{kVfa, 1.0}}),
                  mono(p.T_d / budget, {{kVd, 1.0}}),
                  mono(p.T_d / budget, {{kVa, 1.0}})};
  prob.ineq_constraints.push_back(std::move(energy));
  return prob;
}

void require_mode_durations(const SystemParams& p, TrainingMode mode,
                            const char* who) {
  if (mode == TrainingMode::kConventional && p.T_r != 0) {
    throw std::invalid_argument(std::string(who) +
                                " requires T_r == 0 for conventional training");
  }
  if (mode == TrainingMode::kDce && p.T_r < 1) {
    throw std::invalid_argument(std::string(who) +
                                " requires T_r >= 1 for AN-assisted training");
  }
}

}  // namespace

PowerAllocation conventional_closed_form(const SystemParams& p) {
  require_mode_durations(p, TrainingMode::kConventional,
                         "conventional_closed_form");
  if (p.T_d < 1 || p.T_f < 1) {
    throw std::invalid_argument(
        "conventional_closed_form requires T_f >= 1 and T_d >= 1");
  }
  const double budget = p.P * static_cast<double>(p.T);
  const double sf = std::sqrt(static_cast<double>(p.T_f));
  const double sd = std::sqrt(static_cast<double>(p.T_d));
  PowerAllocation a;
  a.P_f = budget * sf / (p.T_f * (sf + sd));
  a.P_d = budget * sd / (2.0 * p.T_d * (sf + sd));
  a.P_a = a.P_d;
  return a;
}

PowerAllocation equal_split(const SystemParams& p, TrainingMode mode) {
  require_mode_durations(p, mode, "equal_split");
  const double budget = p.P * static_cast<double>(p.T);
  PowerAllocation a;
  if (mode == TrainingMode::kConventional) {
    double q = budget / static_cast<double>(p.T_f + 2 * p.T_d);
    a.P_f = a.P_d = a.P_a = q;
  } else {
    double q = budget / static_cast<double>(p.T_r + 2 * p.T_f + 2 * p.T_d);
    a.P_r = a.P_f = a.P_fa = a.P_d = a.P_a = q;
  }
  return a;
}

GridSearchResult grid_search_best(
    const SystemParams& p, TrainingMode mode, int resolution,
    const SampleCache& cache, const std::vector<PowerAllocation>& extra_candidates,
    GridObjective objective, bool allow_an, unsigned workers) {
  require_mode_durations(p, mode, "grid_search_best");
  if (resolution < 1) {
    throw std::invalid_argument("grid resolution must be at least 1");
  }
  if (!allow_an && mode != TrainingMode::kConventional) {
    throw std::invalid_argument(
        "the AN-free grid applies to conventional training only");
  }
  const double budget = p.P * static_cast<double>(p.T);
  const int parts = mode == TrainingMode::kDce ? 5 : (allow_an ? 3 : 2);

  auto to_alloc = [&](const std::vector<int>& k) {
    PowerAllocation a;
    auto frac = [&](int num) {
      return static_cast<double>(num) / static_cast<double>(resolution);
    };
    if (mode == TrainingMode::kDce) {
      a.P_r = frac(k[0]) * budget / p.T_r;
      a.P_f = frac(k[1]) * budget / p.T_f;
      a.P_fa = frac(k[2]) * budget / p.T_f;
      a.P_d = frac(k[3]) * budget / p.T_d;
      a.P_a = frac(k[4]) * budget / p.T_d;
    } else {
      a.P_f = frac(k[0]) * budget / p.T_f;
      a.P_d = frac(k[1]) * budget / p.T_d;
      if (allow_an) {
        a.P_a = frac(k[2]) * budget / p.T_d;
      }
    }
    return a;
  };

  auto evaluate = [&](const PowerAllocation& a) {
    ErrorVariances ev = error_variances(p, a, mode);
    ValueWithError out{0.0, 0.0};
    if (objective == GridObjective::kCentral) {
      out = r_tilde(p, a, ev, cache, workers);
    } else {
      RateBounds b = secrecy_rate_bounds(p, a, mode, cache, workers);
      out.value = objective == GridObjective::kUpperBound
                      ? b.r_tilde + b.delta_u
                      : b.r_tilde - b.delta_l;
      out.stderr_value = b.stderr_r_tilde;
    }
    return out;
  };

  GridSearchResult best;
  best.value = -std::numeric_limits<double>::infinity();

  std::vector<int> k(static_cast<size_t>(parts), 0);
  std::function<void(int, int)> recurse = [&](int pos, int remaining) {
    if (pos == parts - 1) {
      k[static_cast<size_t>(pos)] = remaining;
      PowerAllocation a = to_alloc(k);
      ValueWithError v = evaluate(a);
      if (v.value > best.value) {
        best.value = v.value;
        best.stderr_value = v.stderr_value;
        best.alloc = a;
        best.fractions = k;
      }
      return;
    }
    for (int used = 0; used <= remaining; ++used) {
      k[static_cast<size_t>(pos)] = used;
      recurse(pos + 1, remaining - used);
    }
  };
  recurse(0, resolution);

  for (const PowerAllocation& a : extra_candidates) {
    if (total_energy(p, a) > budget * (1.0 + 1e-9)) {
      throw std::invalid_argument(
          "infeasible allocation: energy exceeds P*T");
    }
    ValueWithError v = evaluate(a);
    if (v.value > best.value) {
      best.value = v.value;
      best.stderr_value = v.stderr_value;
      best.alloc = a;
      best.fractions.clear();
    }
  }
  return best;
}

CondensationWeights condensation_weights(const PowerAllocation& a,
                                         double eps_prime) {
  double t1 = a.P_d * a.P_fa;
  double t2 = a.P_a * a.P_fa;
  double t3 = (1.0 - eps_prime) * a.P_a * a.P_f;
  double sum = t1 + t2 + t3;
  if (!(sum > 0.0)) {
    throw std::invalid_argument(
        "condensation requires a strictly positive denominator");
  }
  return CondensationWeights{t1 / sum, t2 / sum, t3 / sum};
}

double j_conv(const SystemParams& p, double P_f, double P_d) {
  const double budget = p.P * static_cast<double>(p.T);
  const double train = P_f * p.T_f;
  const double data = P_d * p.T_d;
  if (!(P_f > 0.0) || !(P_d > 0.0) || !(budget - train - data > 0.0)) {
    return -std::numeric_limits<double>::infinity();
  }
  double num = P_d * (budget - train - data) / (budget - train);
  double den = (budget - train) / (P_f * p.T_d) + 1.0;
  return num / den;
}

Eigen::Matrix2d j_conv_hessian_closed_form(const SystemParams& p) {
  const double budget = p.P * static_cast<double>(p.T);
  const double tf = static_cast<double>(p.T_f);
  const double td = static_cast<double>(p.T_d);
  Eigen::Matrix2d h;
  h(0, 0) = -(tf * tf + tf * std::sqrt(tf * td)) / (2.0 * budget * td);
  h(0, 1) = -tf / budget;
  h(1, 0) = -tf / budget;
  h(1, 1) = -2.0 * td / budget;
  return h;
}

double j_inv_dce(const SystemParams& p, const PowerAllocation& a,
                 double eps_prime, bool sigma_retaining) {
  const double pr = a.P_r, pf = a.P_f, pfa = a.P_fa, pd = a.P_d, pa = a.P_a;
  if (!sigma_retaining) {
    double n1 = (pd + pa) * (pfa + pr) + pr * pf;
    double n2 = (pd + pa) * pfa + (1.0 - eps_prime) * pa * pf + pd * pf;
    double n3 = (pd + pa) * pfa + (1.0 - eps_prime) * pa * pf;
    return n1 * n2 / (pr * pf * pd * n3);
  }
  const double s2 = p.sigma2, sh2 = p.sigma_h2, sg2 = p.sigma_g2;
  double floor_r = s2 + pr * sh2;
  double d1 = (pd + pa) * (floor_r + pfa * sh2) + pf * floor_r;
  double n2s = (pd + pa) * (pfa * sg2 + s2) + (1.0 - eps_prime) * pa * pf * sg2;
  double d2 = n2s + pd * pf * sg2;
  return d1 * d2 / (pd * pf * floor_r * n2s);
}

ScaResult sca_dce(const SystemParams& p, const ScaConfig& cfg) {
  require_mode_durations(p, TrainingMode::kDce, "sca_dce");
  if (!(cfg.eps_prime > 0.0) || !(cfg.eps_prime < 1.0)) {
    throw std::invalid_argument("eps_prime must lie in (0, 1)");
  }
  if (!(cfg.eps0 > 0.0)) {
    throw std::invalid_argument("eps0 must be positive");
  }
  if (cfg.max_iters < 1) {
    throw std::invalid_argument("max_iters must be at least 1");
  }
  const double budget = p.P * static_cast<double>(p.T);

  PowerAllocation init = cfg.init;
  bool init_unset = init.P_r == 0.0 && init.P_f == 0.0 && init.P_fa == 0.0 &&
                    init.P_d == 0.0 && init.P_a == 0.0;
  if (init_unset) {
    init = equal_split(p, TrainingMode::kDce);
  }
  if (!(init.P_r > 0.0) || !(init.P_f > 0.0) || !(init.P_fa > 0.0) ||
      !(init.P_d > 0.0) || !(init.P_a > 0.0)) {
    throw std::invalid_argument("SCA initial allocation must be strictly positive");
  }
  if (total_energy(p, init) > budget * (1.0 + 1e-9)) {
    throw std::invalid_argument("infeasible allocation: energy exceeds P*T");
  }

  ScaResult result;
  Eigen::VectorXd x = as_vector(init);
  double obj = j_inv_dce(p, init, cfg.eps_prime, cfg.sigma_retaining);
  result.trace.push_back(obj);

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    GPProblem prob = build_sca_gp(p, x, cfg.eps_prime, cfg.sigma_retaining);
    GPSolution sol = solve_gp(prob, 1e-7, 800);
    if (sol.status == GPStatus::kInfeasible) {
      throw std::logic_error("SCA subproblem reported infeasible");
    }
    PowerAllocation a = from_vector(sol.values);
    // The surrogate strictly improves with reverse-training power, so any
    // budget slack left by the inequality-relaxed GP belongs in P_r.
    double slack = budget - total_energy(p, a);
    if (slack > 0.0) {
      a.P_r += slack / static_cast<double>(p.T_r);
    }
    double next = j_inv_dce(p, a, cfg.eps_prime, cfg.sigma_retaining);
    result.trace.push_back(next);
    result.iterations = iter + 1;
    double rel = (obj - next) / obj;
    x = as_vector(a);
    obj = next;
    if (rel < cfg.eps0) {
      result.converged = true;
      break;
    }
  }
  result.alloc = from_vector(x);
  return result;
}

double dce_coherence_threshold(const SystemParams& p) {
  const double n = static_cast<double>(p.n_t);
  double geometric = (4.0 * n + 10.0) * (4.0 * n + 10.0) / n;
  double power_term =
      22.0 * std::log10(p.P * p.sigma_h2 * n / (4.0 * p.sigma2)) + 1.0;
  return std::max(geometric, power_term) + n;
}

PowerAllocation dce_suboptimal(const SystemParams& p, double gamma) {
  require_mode_durations(p, TrainingMode::kDce, "dce_suboptimal");
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in (0, 1)");
  }
  // Closed form for the conventional scheme over the same coherence block
  // (its data phase is one symbol longer since no reverse pilot is sent).
  SystemParams conv = with_mode_durations(p, TrainingMode::kConventional);
  PowerAllocation ref = conventional_closed_form(conv);
  PowerAllocation a;
  a.P_r = gamma * static_cast<double>(p.T_f) /
          (2.0 * static_cast<double>(p.T_r)) * ref.P_f;
  a.P_f = (1.0 - gamma) * ref.P_f;
  a.P_fa = 0.5 * gamma * ref.P_f;
  a.P_d = ref.P_d;
  a.P_a = ref.P_a;
  return a;
}

}  // namespace secrecy
