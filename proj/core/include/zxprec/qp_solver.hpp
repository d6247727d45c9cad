// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace zxprec::qp {

// min p^T W^T W p  subject to  B p <= -gamma * 1.
// W is the waveform energy map (3*n_tot x n_q), B collects the sign-aligned
// receive-sample constraints (n_tot x n_q).
struct PrecodeProblem {
  Eigen::MatrixXd W;
  Eigen::MatrixXd B;
  double gamma = 1.0;
};

enum class SolveStatus { Optimal, MaxIter, Infeasible };

struct SolveOptions {
  double feas_tol = 1e-8;
  double kkt_tol = 1e-6;
  int max_iter = 200;
};

struct PrecodeSolution {
  Eigen::VectorXd p;
  Eigen::VectorXd lambda;        // multipliers of B p + gamma <= 0
  double objective = 0.0;
  double max_violation = 0.0;    // max_i (B p + gamma)_i, <= feas_tol when Optimal
  double kkt_residual = 0.0;     // max of stationarity and complementarity norms
  int iterations = 0;
  SolveStatus status = SolveStatus::Optimal;
};

// Mehrotra-style predictor-corrector interior point on the inequality QP.
// Deterministic: fixed iteration schedule, no randomized pivoting, so equal
// inputs give bit-identical results.
PrecodeSolution solve(const PrecodeProblem& problem, const SolveOptions& opts = {});

struct KktReport {
  double primal_violation = 0.0;   // max_i (B p + gamma)_i
  double stationarity = 0.0;       // ||2 W^T W p + B^T lambda||_inf
  double dual_violation = 0.0;     // max(0, -min_i lambda_i)
  double complementarity = 0.0;    // max_i |lambda_i * (B p + gamma)_i|
  bool ok(const SolveOptions& opts = {}) const {
    return primal_violation <= opts.feas_tol && stationarity <= opts.kkt_tol &&
           dual_violation <= opts.kkt_tol && complementarity <= opts.kkt_tol;
  }
};

// Recomputes all KKT quantities from scratch; shares no state with solve().
KktReport verify_kkt(const PrecodeProblem& problem, const PrecodeSolution& solution);

}  // namespace zxprec::qp
