// SPDX-License-Identifier: MIT
//
// Power-allocation policies for the training-based secrecy link: the
// closed-form split for conventional training, exhaustive grid search over
// energy fractions, equal splits, and the successive-convex-approximation
// (SCA) loop that optimizes the five-way split for AN-assisted training by
// solving a sequence of geometric programs.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "secrecy/gp.hpp"
#include "secrecy/rates.hpp"
#include "secrecy/system.hpp"

namespace secrecy {

// Closed-form stationary point of the high-power surrogate for conventional
// training: P_f = PT sqrt(T_f) / (T_f (sqrt(T_f) + sqrt(T_d))) and
// P_d = P_a = PT sqrt(T_d) / (2 T_d (sqrt(T_f) + sqrt(T_d))).  Spends the
// budget exactly.  Requires conventional-mode durations (T_r == 0, T_d >= 1).
PowerAllocation conventional_closed_form(const SystemParams& p);

// Spends the budget equally across the per-phase energy sinks: q = PT /
// (T_f + 2 T_d) shared by (P_f, P_d, P_a) for conventional training, and
// q = PT / (T_r + 2 T_f + 2 T_d) shared by all five powers for AN-assisted
// training.
PowerAllocation equal_split(const SystemParams& p, TrainingMode mode);

enum class GridObjective { kCentral, kUpperBound, kLowerBound };

struct GridSearchResult {
  PowerAllocation alloc;
  double value = 0.0;          // best objective found, bits per channel use
  double stderr_value = 0.0;   // Monte Carlo standard error of the winner
  std::vector<int> fractions;  // winning numerators over `resolution` (empty
                               // when an extra candidate won)
};

// Exhaustively splits the energy budget PT into `resolution` equal shares
// over the mode's power components (conventional: P_f, P_d, P_a; AN-assisted:
// P_r, P_f, P_fa, P_d, P_a; conventional with allow_an=false: P_f, P_d) and
// keeps the allocation with the largest Monte Carlo objective.  Enumeration
// is lexicographic and replacement strict, so ties go to the lexicographically
// smallest fraction vector.  `extra_candidates` are evaluated after the grid
// under the same strict-improvement rule.
GridSearchResult grid_search_best(
    const SystemParams& p, TrainingMode mode, int resolution,
    const SampleCache& cache,
    const std::vector<PowerAllocation>& extra_candidates = {},
    GridObjective objective = GridObjective::kCentral, bool allow_an = true,
    unsigned workers = 1);

struct ScaConfig {
  double eps_prime = 0.01;  // guard band on the normalized AN-null gain
  double eps0 = 1e-6;       // relative-decrease stopping threshold
  int max_iters = 100;
  PowerAllocation init;  // all-zero selects the equal split
  // When set, keeps the noise-floor terms in the surrogate objective instead
  // of the high-power simplification that drops them.
  bool sigma_retaining = false;
};

struct ScaResult {
  PowerAllocation alloc;
  // Inverse-surrogate objective at the initial point and after each
  // iteration; successive condensation makes this non-increasing.
  std::vector<double> trace;
  bool converged = false;
  int iterations = 0;
};

// Normalized weights of the three condensed denominator terms
// {P_d P_fa, P_a P_fa, (1 - eps') P_a P_f}; they sum to one.
struct CondensationWeights {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double xi3 = 0.0;
};
CondensationWeights condensation_weights(const PowerAllocation& a,
                                         double eps_prime);

// Successive convex approximation for the AN-assisted five-way power split:
// each iteration condenses the posynomial denominator of the inverse
// surrogate at the previous iterate and solves the resulting geometric
// program under the energy budget; leftover budget slack is poured into the
// reverse-training power, which the surrogate strictly rewards.
ScaResult sca_dce(const SystemParams& p, const ScaConfig& cfg = {});

// Surrogate objective for conventional training at given pilot/data powers
// with the AN power implied by the exhausted budget.
double j_conv(const SystemParams& p, double P_f, double P_d);

// Closed-form Hessian of j_conv at its stationary point.
Eigen::Matrix2d j_conv_hessian_closed_form(const SystemParams& p);

// Inverse surrogate objective for AN-assisted training (the quantity traced
// and minimized by sca_dce).  With sigma_retaining the noise-floor terms are
// kept; otherwise the high-power simplification is used.
double j_inv_dce(const SystemParams& p, const PowerAllocation& a,
                 double eps_prime, bool sigma_retaining = false);

// Coherence length above which AN-assisted training is guaranteed to beat the
// conventional closed form at high power:
// max{(4 n_t + 10)^2 / n_t, 22 log10(P sigma_h^2 n_t / (4 sigma^2)) + 1} + n_t.
double dce_coherence_threshold(const SystemParams& p);

// Analytical (not optimized) AN-assisted allocation built from the
// conventional closed form: a gamma portion of the training energy moves to
// the reverse pilot and training-phase AN, data-phase powers are kept, and
// the total energy comes out strictly below the budget.
PowerAllocation dce_suboptimal(const SystemParams& p, double gamma = 0.5);

}  // namespace secrecy
