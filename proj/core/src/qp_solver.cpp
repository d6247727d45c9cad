// SPDX-License-Identifier: Apache-2.0
#include "zxprec/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace zxprec::qp {

namespace {

// Largest alpha in [0,1] with x + alpha*dx >= 0.
double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& dx) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  return a;
}

struct Residuals {
  double primal = 0.0;        // max_i (B p + gamma)_i
  double stationarity = 0.0;  // ||Q p + B^T lambda||_inf
  double comp = 0.0;          // max_i |lambda_i (B p + gamma)_i|
};

Residuals residuals(const Eigen::MatrixXd& q, const Eigen::MatrixXd& b, double gamma,
                    const Eigen::VectorXd& p, const Eigen::VectorXd& lambda) {
  Residuals r;
  Eigen::VectorXd slack_neg = b * p;
  slack_neg.array() += gamma;  // (B p + gamma); feasible iff <= 0
  r.primal = slack_neg.maxCoeff();
  r.stationarity = (q * p + b.transpose() * lambda).lpNorm<Eigen::Infinity>();
  r.comp = (lambda.array() * slack_neg.array()).abs().maxCoeff();
  return r;
}

double merit_of(const Residuals& r) {
  return std::max({std::max(r.primal, 0.0), r.stationarity, r.comp});
}

// Finish on the active set implied by (p, lambda): solve the equality
// constrained QP restricted to the near-active rows and keep the result only
// if the full KKT conditions check out. Degenerate instances, where several
// rows are tight with vanishing multipliers, stall the interior point
// iteration a few times above tolerance; the direct solve is exact there.
bool polish(const Eigen::MatrixXd& q, const Eigen::MatrixXd& b, double gamma,
            Eigen::VectorXd& p, Eigen::VectorXd& lambda, const SolveOptions& opts) {
  const Eigen::Index m = b.rows();
  Eigen::VectorXd slack = b * p;
  slack.array() += gamma;
  std::vector<char> in_set(static_cast<std::size_t>(m), 0);
  // A row counts as active when its slack is essentially zero, or when its
  // multiplier dominates the slack. The second test matters for weakly bound
  // rows: with a small multiplier the barrier loop can satisfy the
  // complementarity tolerance while the slack is still well clear of the
  // absolute cutoff.
  for (Eigen::Index i = 0; i < m; ++i)
    if (slack(i) > -1e-7 * std::max(1.0, gamma) || lambda(i) > -slack(i))
      in_set[static_cast<std::size_t>(i)] = 1;
  if (std::find(in_set.begin(), in_set.end(), 1) == in_set.end()) {
    // gamma > 0 forces at least one row tight at the optimum, so start from
    // the row closest to its bound and let the refinement loop sort it out.
    Eigen::Index imax = 0;
    slack.maxCoeff(&imax);
    in_set[static_cast<std::size_t>(imax)] = 1;
  }

  Eigen::LDLT<Eigen::MatrixXd> qf(q);
  if (qf.info() != Eigen::Success) return false;

  // Active set refinement: rows that come back with a negative multiplier do
  // not belong and are dropped; rows the candidate point violates are missing
  // and get added. The stalled iterate is close, so few rounds are needed.
  for (int round = 0; round < 30; ++round) {
    std::vector<Eigen::Index> act;
    for (Eigen::Index i = 0; i < m; ++i)
      if (in_set[static_cast<std::size_t>(i)]) act.push_back(i);
    if (act.empty()) return false;

    Eigen::MatrixXd ba(static_cast<Eigen::Index>(act.size()), b.cols());
    for (std::size_t k = 0; k < act.size(); ++k)
      ba.row(static_cast<Eigen::Index>(k)) = b.row(act[k]);
    Eigen::MatrixXd qinv_bat = qf.solve(ba.transpose());
    // Tight rows are often linearly dependent on degenerate instances; the
    // complete orthogonal decomposition returns the least-norm multipliers.
    Eigen::MatrixXd schur = ba * qinv_bat;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(schur);
    Eigen::VectorXd nu = cod.solve(Eigen::VectorXd::Constant(ba.rows(), gamma));
    if (!nu.allFinite()) return false;

    const double nu_ref = std::max(1.0, nu.cwiseAbs().maxCoeff());
    bool dropped = false;
    for (std::size_t k = 0; k < act.size(); ++k) {
      if (nu(static_cast<Eigen::Index>(k)) < -1e-8 * nu_ref) {
        in_set[static_cast<std::size_t>(act[k])] = 0;
        dropped = true;
      }
    }
    if (dropped) continue;

    Eigen::VectorXd p_new = -qinv_bat * nu;
    Eigen::VectorXd slack_new = b * p_new;
    slack_new.array() += gamma;
    Eigen::Index worst = -1;
    double worst_v = opts.feas_tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!in_set[static_cast<std::size_t>(i)] && slack_new(i) > worst_v) {
        worst_v = slack_new(i);
        worst = i;
      }
    }
    if (worst >= 0) {
      in_set[static_cast<std::size_t>(worst)] = 1;
      continue;
    }

    Eigen::VectorXd lam_new = Eigen::VectorXd::Zero(m);
    for (std::size_t k = 0; k < act.size(); ++k)
      lam_new(act[k]) = std::max(nu(static_cast<Eigen::Index>(k)), 0.0);
    Residuals r = residuals(q, b, gamma, p_new, lam_new);
    if (r.primal > opts.feas_tol || r.stationarity > opts.kkt_tol ||
        r.comp > opts.kkt_tol)
      return false;
    p = p_new;
    lambda = lam_new;
    return true;
  }
  return false;
}

}  // namespace

PrecodeSolution solve(const PrecodeProblem& problem, const SolveOptions& opts) {
  const Eigen::MatrixXd& w = problem.W;
  const Eigen::MatrixXd& b = problem.B;
  const double gamma = problem.gamma;
  const Eigen::Index n = w.cols();
  const Eigen::Index m = b.rows();
  if (b.cols() != n) throw std::invalid_argument("solve: W and B column counts differ");
  if (gamma < 0.0) throw std::invalid_argument("solve: gamma must be >= 0");

  PrecodeSolution sol;
  sol.p = Eigen::VectorXd::Zero(n);
  sol.lambda = Eigen::VectorXd::Zero(m);

  // A zero row of B makes 0 <= -gamma unsatisfiable; everything else is
  // feasible by scaling any strictly feasible direction.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b.row(i).lpNorm<Eigen::Infinity>() == 0.0 && gamma > 0.0) {
      sol.status = SolveStatus::Infeasible;
      sol.max_violation = gamma;
      return sol;
    }
  }
  if (gamma == 0.0) {
    // Unconstrained minimum of a PSD quadratic.
    sol.status = SolveStatus::Optimal;
    return sol;
  }

  Eigen::MatrixXd q = 2.0 * w.transpose() * w;
  {
    // Gram matrices of aggressively truncated pulses can be near-singular;
    // a fixed tiny ridge keeps the Newton systems factorizable without
    // disturbing the solution beyond the requested tolerances.
    Eigen::LDLT<Eigen::MatrixXd> probe(q);
    if (probe.info() != Eigen::Success || probe.vectorD().minCoeff() < 1e-12)
      q.diagonal().array() += 1e-10;
  }

  // Deterministic start: least-norm point aimed at the constraint boundary,
  // slacks and multipliers strictly positive.
  Eigen::MatrixXd bbt = b * b.transpose();
  bbt.diagonal().array() += 1e-8;
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd p = -gamma * b.transpose() * bbt.ldlt().solve(ones);
  Eigen::VectorXd resid = b * p;
  resid.array() += gamma;
  Eigen::VectorXd s(m), lambda(m);
  const double s_floor = std::max(1.0, 0.1 * gamma);
  for (Eigen::Index i = 0; i < m; ++i) {
    s(i) = std::max(-resid(i), s_floor);
    lambda(i) = 1.0;
  }

  int iter = 0;
  bool converged = false;
  int stalled = 0;
  double best_merit = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_p = p, best_lambda = lambda;
  for (; iter < opts.max_iter; ++iter) {
    Residuals r = residuals(q, b, gamma, p, lambda);
    if (p.allFinite() && lambda.allFinite() && lambda.minCoeff() >= 0.0 &&
        merit_of(r) < best_merit) {
      best_merit = merit_of(r);
      best_p = p;
      best_lambda = lambda;
    }
    if (r.primal <= opts.feas_tol && r.stationarity <= opts.kkt_tol &&
        r.comp <= opts.kkt_tol && lambda.minCoeff() >= 0.0) {
      converged = true;
      break;
    }

    Eigen::VectorXd rd = q * p + b.transpose() * lambda;
    Eigen::VectorXd rp = b * p + s;
    rp.array() += gamma;
    Eigen::ArrayXd lam_over_s = lambda.array() / s.array();

    Eigen::MatrixXd k = q;
    k.noalias() += b.transpose() * lam_over_s.matrix().asDiagonal() * b;
    Eigen::LDLT<Eigen::MatrixXd> kf(k);
    if (kf.info() != Eigen::Success) {
      k.diagonal().array() += 1e-10;
      kf.compute(k);
    }

    // Affine (predictor) direction: complementarity target 0.
    Eigen::VectorXd rhs_aff =
        -rd - b.transpose() * (lam_over_s * rp.array() - lambda.array()).matrix();
    Eigen::VectorXd dp_aff = kf.solve(rhs_aff);
    Eigen::VectorXd ds_aff = -rp - b * dp_aff;
    Eigen::VectorXd dl_aff =
        (lam_over_s * (b * dp_aff + rp).array()).matrix() - lambda;

    double mu = s.dot(lambda) / static_cast<double>(m);
    double ap_aff = max_step(s, ds_aff);
    double ad_aff = max_step(lambda, dl_aff);
    double mu_aff = (s + ap_aff * ds_aff).dot(lambda + ad_aff * dl_aff) /
                    static_cast<double>(m);
    double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
    sigma = std::min(std::max(sigma, 0.0), 1.0);

    // Corrector: recenter to sigma*mu and cancel the second-order term.
    // From S dl + Lambda ds = comp_rhs and ds = -rp - B dp:
    //   dl = (lambda/s)(B dp + rp) + comp_rhs/s
    //   (Q + B^T diag(lambda/s) B) dp = -rd - B^T[(lambda/s) rp + comp_rhs/s]
    Eigen::ArrayXd comp_rhs =
        sigma * mu - lambda.array() * s.array() - ds_aff.array() * dl_aff.array();
    Eigen::VectorXd rhs =
        -rd - b.transpose() *
                  (lam_over_s * rp.array() + comp_rhs / s.array()).matrix();
    Eigen::VectorXd dp = kf.solve(rhs);
    Eigen::VectorXd ds = -rp - b * dp;
    Eigen::VectorXd dl =
        (lam_over_s * (b * dp + rp).array() + comp_rhs / s.array()).matrix();

    // Degenerate active sets drive slacks and multipliers to zero together;
    // past machine precision the directions turn non-finite or the step sizes
    // collapse. Stop iterating then and fall through to the recovery path.
    if (!dp.allFinite() || !ds.allFinite() || !dl.allFinite()) break;

    const double eta = 0.995;
    double ap = std::min(1.0, eta * max_step(s, ds));
    double ad = std::min(1.0, eta * max_step(lambda, dl));
    if (ap < 1e-8 && ad < 1e-8) {
      if (++stalled >= 2) break;
    } else {
      stalled = 0;
    }
    p += ap * dp;
    s += ap * ds;
    lambda += ad * dl;
  }

  if (!converged) {
    bool usable = p.allFinite() && lambda.allFinite();
    if (!usable || merit_of(residuals(q, b, gamma, p, lambda)) > best_merit) {
      p = best_p;
      lambda = best_lambda;
    }
    Residuals r = residuals(q, b, gamma, p, lambda);
    if (r.primal <= opts.feas_tol && r.stationarity <= opts.kkt_tol &&
        r.comp <= opts.kkt_tol && lambda.minCoeff() >= 0.0) {
      converged = true;
    }
  }
  // The barrier loop stops once the KKT residual is below kkt_tol, which pins
  // p itself down only to about kkt_tol / lambda_min(Q). The direct solve on
  // the identified active set lands on the exact minimizer, so run it on
  // converged iterates too; it keeps its result only when the full KKT check
  // still passes, so a failed polish leaves the iterate untouched.
  if (polish(q, b, gamma, p, lambda, opts)) converged = true;

  sol.status = converged ? SolveStatus::Optimal : SolveStatus::MaxIter;
  sol.iterations = iter;
  sol.p = p;
  sol.lambda = lambda;
  sol.objective = (w * p).squaredNorm();
  Residuals r = residuals(q, b, gamma, p, lambda);
  sol.max_violation = r.primal;
  sol.kkt_residual = std::max(r.stationarity, r.comp);
  return sol;
}

KktReport verify_kkt(const PrecodeProblem& problem, const PrecodeSolution& solution) {
  KktReport rep;
  Eigen::VectorXd slack = problem.B * solution.p;
  slack.array() += problem.gamma;
  rep.primal_violation = slack.maxCoeff();
  rep.stationarity = (2.0 * problem.W.transpose() * (problem.W * solution.p) +
                      problem.B.transpose() * solution.lambda)
                         .lpNorm<Eigen::Infinity>();
  rep.dual_violation = std::max(0.0, -solution.lambda.minCoeff());
  rep.complementarity = (solution.lambda.array() * slack.array()).abs().maxCoeff();
  return rep;
}

}  // namespace zxprec::qp
