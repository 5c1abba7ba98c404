// SPDX-License-Identifier: MIT
#include "secrecy/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace secrecy {
namespace {

// Dense log-space image of a posynomial: row k holds the exponent vector of
// term k over the first `n` variables and b(k) = log coeff_k, so the
// posynomial value at x = exp(y) is sum_k exp(A.row(k) y + b(k)).
struct LogPosy {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  static LogPosy from(const Posynomial& p, int n) {
    if (p.terms.empty()) {
      throw std::invalid_argument("posynomial must have at least one term");
    }
    LogPosy lp;
    lp.A = Eigen::MatrixXd::Zero(static_cast<int>(p.terms.size()), n);
    lp.b.resize(static_cast<int>(p.terms.size()));
    for (int k = 0; k < lp.b.size(); ++k) {
      const Monomial& m = p.terms[static_cast<size_t>(k)];
      if (!(m.coeff > 0.0)) {
        throw std::invalid_argument("monomial coefficient must be positive");
      }
      for (const auto& [j, e] : m.exponents) {
        if (j < 0 || j >= n) {
          throw std::invalid_argument("monomial references unknown variable");
        }
        lp.A(k, j) += e;
      }
      lp.b(k) = std::log(m.coeff);
    }
    return lp;
  }

  // log-sum-exp value; optionally accumulates weight * gradient and
  // weight * Hessian of the LSE into g and H.
  double value(const Eigen::VectorXd& y) const {
    Eigen::VectorXd z = A * y + b;
    double zmax = z.maxCoeff();
    return zmax + std::log((z.array() - zmax).exp().sum());
  }

  double value_grad_hess(const Eigen::VectorXd& y, Eigen::VectorXd* g,
                         Eigen::MatrixXd* H) const {
    Eigen::VectorXd z = A * y + b;
    double zmax = z.maxCoeff();
    Eigen::VectorXd lam = (z.array() - zmax).exp();
    double s = lam.sum();
    lam /= s;
    double val = zmax + std::log(s);
    if (g != nullptr) {
      *g = A.transpose() * lam;
    }
    if (H != nullptr) {
      Eigen::VectorXd gr = A.transpose() * lam;
      *H = A.transpose() * lam.asDiagonal() * A - gr * gr.transpose();
    }
    return val;
  }
};

// One barrier stage: damped Newton on  obj(y) + mu * sum_i -log(-f_i(y))
// subject to Aeq y = beq, starting from a strictly feasible y.
// `linear` is an optional linear objective (phase 1); otherwise `obj` is used.
struct BarrierProblem {
  const LogPosy* obj = nullptr;           // log objective (phase 2)
  Eigen::VectorXd linear;                 // linear objective (phase 1)
  const std::vector<LogPosy>* ineqs = nullptr;
  Eigen::MatrixXd Aeq;  // may have zero rows
  Eigen::VectorXd beq;

  double merit(const Eigen::VectorXd& y, double mu, bool* feasible) const {
    double val = obj != nullptr ? obj->value(y) : linear.dot(y);
    *feasible = true;
    for (const LogPosy& fi : *ineqs) {
      double v = fi.value(y);
      if (!(v < 0.0)) {
        *feasible = false;
        return std::numeric_limits<double>::infinity();
      }
      val -= mu * std::log(-v);
    }
    return val;
  }
};

// Damped Newton until the stage tolerance, the iteration budget, or (when
// stop_var >= 0) a coordinate dropping below stop_below ends it; updates y in
// place. The coordinate stop is what keeps a feasibility phase from chasing an
// unbounded slack objective to infinity.
void newton_stage(const BarrierProblem& bp, double mu, Eigen::VectorXd& y,
                  Eigen::VectorXd& nu_out, int* iter_budget, int stop_var = -1,
                  double stop_below = 0.0) {
  const int n = static_cast<int>(y.size());
  double best_station = std::numeric_limits<double>::infinity();
  int since_best = 0;
  const int p = static_cast<int>(bp.Aeq.rows());
  // Stage convergence is judged on the stationarity norm, not the Newton
  // decrement: the barrier Hessian grows like 1/mu near the active set, so a
  // decrement threshold would certify gradients as large as sqrt(tol/mu) and
  // leave the final KKT residual orders of magnitude above it.
  const double kStationTol = std::max(1e-8, 1e-3 * mu);

  while (*iter_budget > 0) {
    --*iter_budget;
    Eigen::VectorXd g(n);
    Eigen::MatrixXd H(n, n);
    if (bp.obj != nullptr) {
      bp.obj->value_grad_hess(y, &g, &H);
    } else {
      g = bp.linear;
      H.setZero();
    }
    for (const LogPosy& fi : *bp.ineqs) {
      Eigen::VectorXd gi(n);
      Eigen::MatrixXd Hi(n, n);
      double v = fi.value_grad_hess(y, &gi, &Hi);
      // v < 0 is maintained by the line search below.
      double inv = 1.0 / (-v);
      g += mu * inv * gi;
      H += mu * (inv * inv) * gi * gi.transpose() + mu * inv * Hi;
    }
    // Tiny Tikhonov term keeps the KKT system solvable when the LSE Hessian
    // is singular (e.g. variables absent from all active terms).
    H.diagonal().array() += 1e-12;

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + p, n + p);
    kkt.topLeftCorner(n, n) = H;
    if (p > 0) {
      kkt.topRightCorner(n, p) = bp.Aeq.transpose();
      kkt.bottomLeftCorner(p, n) = bp.Aeq;
    }
    Eigen::VectorXd rhs(n + p);
    rhs.head(n) = -g;
    if (p > 0) {
      rhs.tail(p) = bp.beq - bp.Aeq * y;  // stays ~0 once on the manifold
    }
    Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    Eigen::VectorXd dy = sol.head(n);
    if (p > 0) {
      nu_out = sol.tail(p);
    }

    Eigen::VectorXd station = g;
    if (p > 0) {
      station += bp.Aeq.transpose() * nu_out;
    }
    double decrement2 = -g.dot(dy);
    if (station.norm() <= kStationTol || !(decrement2 > 1e-32)) {
      return;  // stage converged (or direction numerically exhausted)
    }
    // Far from the quadratic regime the Newton direction can be astronomically
    // long (a near-singular Hessian along an unbounded descent ray, e.g. the
    // feasibility phase's slack objective); cap the move in log coordinates so
    // one iteration cannot teleport the iterate beyond recovery.
    const double kMaxStep = 10.0;
    const double dinf = dy.lpNorm<Eigen::Infinity>();
    const bool capped = dinf > kMaxStep;
    if (capped) {
      dy *= kMaxStep / dinf;
    }
    // Rounding can make Armijo accept steps that no longer move the point;
    // once the stationarity norm stops shrinking, the stage has hit its
    // floating-point floor and further iterations only burn budget. Capped
    // steps are exempt: they are full-length travel, and the stationarity
    // norm is naturally flat while marching back from the far field.
    if (station.norm() < 0.9 * best_station) {
      best_station = station.norm();
      since_best = 0;
    } else if (!capped && ++since_best >= 4) {
      return;
    }

    bool feas = false;
    double f0 = bp.merit(y, mu, &feas);
    double t = 1.0;
    const double slope = g.dot(dy);  // negative
    while (t > 1e-14) {
      Eigen::VectorXd yt = y + t * dy;
      double ft = bp.merit(yt, mu, &feas);
      if (feas && ft <= f0 + 0.25 * t * slope) {
        break;
      }
      t *= 0.5;
    }
    if (t <= 1e-14) {
      return;  // no progress possible at this barrier weight
    }
    y += t * dy;
    if (stop_var >= 0 && y(stop_var) < stop_below) {
      return;
    }
  }
}

}  // namespace

double eval(const Monomial& m, const Eigen::VectorXd& x) {
  double v = m.coeff;
  for (const auto& [j, e] : m.exponents) {
    v *= std::pow(x(j), e);
  }
  return v;
}

double eval(const Posynomial& p, const Eigen::VectorXd& x) {
  double v = 0.0;
  for (const Monomial& m : p.terms) {
    v += eval(m, x);
  }
  return v;
}

Posynomial operator*(const Posynomial& a, const Posynomial& b) {
  Posynomial out;
  out.terms.reserve(a.terms.size() * b.terms.size());
  for (const Monomial& ma : a.terms) {
    for (const Monomial& mb : b.terms) {
      Monomial m;
      m.coeff = ma.coeff * mb.coeff;
      m.exponents = ma.exponents;
      m.exponents.insert(m.exponents.end(), mb.exponents.begin(),
                         mb.exponents.end());
      out.terms.push_back(std::move(m));
    }
  }
  return out;
}

Posynomial operator/(const Posynomial& p, const Monomial& m) {
  Posynomial out;
  out.terms.reserve(p.terms.size());
  for (const Monomial& t : p.terms) {
    Monomial q;
    q.coeff = t.coeff / m.coeff;
    q.exponents = t.exponents;
    for (const auto& [j, e] : m.exponents) {
      q.exponents.emplace_back(j, -e);
    }
    out.terms.push_back(std::move(q));
  }
  return out;
}

Monomial condense(const Posynomial& p, const Eigen::VectorXd& point) {
  if (p.terms.empty()) {
    throw std::invalid_argument("cannot condense an empty posynomial");
  }
  for (int j = 0; j < point.size(); ++j) {
    if (!(point(j) > 0.0)) {
      throw std::invalid_argument("condensation point must be positive");
    }
  }
  const int nterms = static_cast<int>(p.terms.size());
  Eigen::VectorXd y = point.array().log();

  // z_k = log of term k at the point; xi_k = softmax(z)_k.
  Eigen::VectorXd z(nterms);
  for (int k = 0; k < nterms; ++k) {
    const Monomial& m = p.terms[static_cast<size_t>(k)];
    double zk = std::log(m.coeff);
    for (const auto& [j, e] : m.exponents) {
      zk += e * y(j);
    }
    z(k) = zk;
  }
  double zmax = z.maxCoeff();
  double lse = zmax + std::log((z.array() - zmax).exp().sum());
  Eigen::VectorXd xi = (z.array() - lse).exp();

  // log prod_k (c_k x^{a_k} / xi_k)^{xi_k}
  //   = sum_k xi_k (log c_k - log xi_k) + (sum_k xi_k a_k) . log x,
  // where log xi_k = z_k - lse exactly (no cancellation for tiny xi_k).
  Eigen::VectorXd expo = Eigen::VectorXd::Zero(point.size());
  double logc = 0.0;
  for (int k = 0; k < nterms; ++k) {
    if (xi(k) == 0.0) {
      continue;  // limit xi log(1/xi) -> 0
    }
    const Monomial& m = p.terms[static_cast<size_t>(k)];
    logc += xi(k) * (std::log(m.coeff) - (z(k) - lse));
    for (const auto& [j, e] : m.exponents) {
      expo(j) += xi(k) * e;
    }
  }
  Monomial out;
  out.coeff = std::exp(logc);
  for (int j = 0; j < expo.size(); ++j) {
    if (expo(j) != 0.0) {
      out.exponents.emplace_back(j, expo(j));
    }
  }
  return out;
}

GPSolution solve_gp(const GPProblem& prob, double tol, int max_iter) {
  const int n = prob.var_count;
  if (n <= 0) {
    throw std::invalid_argument("GP must have at least one variable");
  }
  LogPosy f0 = LogPosy::from(prob.objective, n);
  std::vector<LogPosy> fis;
  fis.reserve(prob.ineq_constraints.size());
  for (const Posynomial& c : prob.ineq_constraints) {
    fis.push_back(LogPosy::from(c, n));
  }
  // Equality monomials c x^a == 1 become a . y = -log c.
  const int p = static_cast<int>(prob.eq_constraints.size());
  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(p, n);
  Eigen::VectorXd beq = Eigen::VectorXd::Zero(p);
  for (int i = 0; i < p; ++i) {
    const Monomial& m = prob.eq_constraints[static_cast<size_t>(i)];
    if (!(m.coeff > 0.0)) {
      throw std::invalid_argument("equality monomial coefficient must be positive");
    }
    for (const auto& [j, e] : m.exponents) {
      if (j < 0 || j >= n) {
        throw std::invalid_argument("monomial references unknown variable");
      }
      Aeq(i, j) += e;
    }
    beq(i) = -std::log(m.coeff);
  }

  GPSolution out;
  out.values = Eigen::VectorXd::Ones(n);
  out.status = GPStatus::kMaxIter;

  // Minimum-norm point on the equality manifold; if even the linear system
  // has no solution the equality set is inconsistent.
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  if (p > 0) {
    y = Aeq.completeOrthogonalDecomposition().solve(beq);
    double resid = (Aeq * y - beq).norm();
    if (resid > 1e-9 * (1.0 + beq.norm())) {
      out.status = GPStatus::kInfeasible;
      out.kkt_residual = resid;
      return out;
    }
  }

  int iter_budget = max_iter;
  // Pushing the barrier weight further buys nothing in double precision: the
  // stationarity evaluation noise grows like eps/(-f_i) ~ eps*lambda^2/mu, so
  // below ~1e-8 the certificate gets noisier, not sharper.
  const double kMuMin = 3e-9;

  // Phase 1: minimize slack s with f_i(y) - s <= 0 over (y, s) until the
  // inequalities hold strictly at s = 0.
  if (!fis.empty()) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const LogPosy& fi : fis) {
      worst = std::max(worst, fi.value(y));
    }
    if (worst >= -1e-6) {
      // f_i(y) - s = lse(A y + b) - s = lse(A y - s 1 + b): the slack enters
      // every term with exponent -1, keeping the constraint in LSE form.
      std::vector<LogPosy> fis_s;
      fis_s.reserve(fis.size());
      for (const LogPosy& fi : fis) {
        LogPosy ext;
        ext.A = Eigen::MatrixXd::Zero(fi.A.rows(), n + 1);
        ext.A.leftCols(n) = fi.A;
        ext.A.col(n).setConstant(-1.0);
        ext.b = fi.b;
        fis_s.push_back(std::move(ext));
      }
      BarrierProblem ph1;
      ph1.linear = Eigen::VectorXd::Zero(n + 1);
      ph1.linear(n) = 1.0;  // minimize s
      ph1.ineqs = &fis_s;
      ph1.Aeq = Eigen::MatrixXd::Zero(p, n + 1);
      ph1.Aeq.leftCols(n) = Aeq;
      ph1.beq = beq;

      Eigen::VectorXd ys(n + 1);
      ys.head(n) = y;
      ys(n) = worst + 1.0;
      Eigen::VectorXd nu;
      for (double mu = 1.0; mu >= kMuMin && iter_budget > 0; mu *= 0.1) {
        // The barrier keeps every f_i(y) < s, so s < -1e-3 certifies a
        // comfortably interior point and the phase can stop mid-stage.
        newton_stage(ph1, mu, ys, nu, &iter_budget, n, -1e-3);
        double cur_worst = -std::numeric_limits<double>::infinity();
        for (const LogPosy& fi : fis) {
          cur_worst = std::max(cur_worst, fi.value(ys.head(n)));
        }
        if (cur_worst < -1e-3) {
          break;  // comfortably interior, good enough to start phase 2
        }
      }
      y = ys.head(n);
      double final_worst = -std::numeric_limits<double>::infinity();
      for (const LogPosy& fi : fis) {
        final_worst = std::max(final_worst, fi.value(y));
      }
      if (final_worst >= -1e-9) {
        out.status = GPStatus::kInfeasible;
        out.values = y.array().exp();
        out.kkt_residual = final_worst;
        return out;
      }
    }
  }

  // Phase 2: barrier stages on the true objective.
  BarrierProblem ph2;
  ph2.obj = &f0;
  ph2.ineqs = &fis;
  ph2.Aeq = Aeq;
  ph2.beq = beq;
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(p);
  double mu_final = 1.0;
  for (double mu = 1.0; mu >= kMuMin && iter_budget > 0; mu *= 0.1) {
    newton_stage(ph2, mu, y, nu, &iter_budget);
    mu_final = mu;
  }

  // KKT residual with the barrier multipliers lambda_i = mu / (-f_i(y)):
  // stationarity norm + equality violation + duality-gap proxy mu * m.
  Eigen::VectorXd g(n);
  f0.value_grad_hess(y, &g, nullptr);
  Eigen::VectorXd station = g;
  for (const LogPosy& fi : fis) {
    Eigen::VectorXd gi(n);
    double v = fi.value_grad_hess(y, &gi, nullptr);
    station += mu_final / (-v) * gi;
  }
  if (p > 0) {
    station += Aeq.transpose() * nu;
  }
  double resid = station.norm() + mu_final * static_cast<double>(fis.size());
  if (p > 0) {
    resid += (Aeq * y - beq).norm();
  }

  out.values = y.array().exp();
  out.objective_value = std::exp(f0.value(y));
  out.kkt_residual = resid;
  // An exhausted iteration budget leaves the gap proxy mu * m large, so a
  // small residual is itself evidence the central path was followed to the end.
  out.status = resid <= tol ? GPStatus::kOptimal : GPStatus::kMaxIter;
  return out;
}

}  // namespace secrecy
