// SPDX-License-Identifier: MIT
//
// Minimal geometric-program machinery: posynomials over positive variables,
// the weighted-AM/GM condensation of a posynomial into a tight monomial lower
// bound, and an interior-point solver that works in log-variable space where
// the objective and constraints become log-sum-exp convex.
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace secrecy {

// coeff * prod_j x_j^{e_j}, coeff > 0; exponents stored sparsely.
struct Monomial {
  double coeff = 1.0;
  std::vector<std::pair<int, double>> exponents;
};

// Sum of monomials, all coefficients positive.
struct Posynomial {
  std::vector<Monomial> terms;
};

struct GPProblem {
  Posynomial objective;                      // minimized
  std::vector<Posynomial> ineq_constraints;  // each must be <= 1
  std::vector<Monomial> eq_constraints;      // each must be == 1
  int var_count = 0;
};

enum class GPStatus { kOptimal, kInfeasible, kMaxIter };

struct GPSolution {
  Eigen::VectorXd values;  // positive primal point
  double objective_value = 0.0;
  GPStatus status = GPStatus::kMaxIter;
  double kkt_residual = 0.0;
};

double eval(const Monomial& m, const Eigen::VectorXd& x);
double eval(const Posynomial& p, const Eigen::VectorXd& x);

// Multiplies two posynomials (term-by-term expansion).
Posynomial operator*(const Posynomial& a, const Posynomial& b);

// Divides every term of p by the monomial m.
Posynomial operator/(const Posynomial& p, const Monomial& m);

// Weighted geometric-mean monomial: with term values t_k at `point` and
// xi_k = t_k / sum_j t_j, returns prod_k (term_k / xi_k)^{xi_k}. The result
// equals p at `point` and lower-bounds p everywhere on the positive orthant.
Monomial condense(const Posynomial& p, const Eigen::VectorXd& point);

// Log-barrier interior-point solve after the substitution x = exp(y):
// phase-1 slack minimization for a strictly feasible start, then barrier
// stages with factor-10 weight reduction and damped Newton steps (Armijo
// backtracking) on the equality-constrained subproblems.
//
// kkt_residual = stationarity norm (with barrier multipliers) + duality-gap
// proxy mu*m + equality violation; status is kOptimal iff it ends <= tol.
// The default tol reflects the double-precision floor of that certificate
// (multiplier noise grows like eps/slack near the active set); the primal
// point itself is typically accurate to ~1e-9 in log coordinates.
GPSolution solve_gp(const GPProblem& prob, double tol = 1e-7,
                    int max_iter = 500);

}  // namespace secrecy
