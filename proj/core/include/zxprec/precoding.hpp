// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "zxprec/qp_solver.hpp"
#include "zxprec/waveform.hpp"
#include "zxprec/zx_modulation.hpp"

namespace zxprec {

// Zero-forcing spatial stage. P_sp = c_zf * pinv(H) cancels inter-user
// interference; c_zf normalizes the sum transmit power so every user sees the
// same real-valued effective gain c_zf.
struct SpatialPrecoder {
  Eigen::MatrixXcd p_zf;  // n_tx x n_u
  double c_zf = 1.0;
  Eigen::MatrixXcd p_sp() const { return c_zf * p_zf; }
};

// Throws when H is rank deficient (condition number above 1e8); no
// regularized fallback.
SpatialPrecoder zf_precoder(const Eigen::MatrixXcd& h);

// One per-user, per-quadrature QP: B = -beta * diag(c_out) * V * U,
// W = G_Tx^T * U, constraints B p <= -gamma * 1.
qp::PrecodeProblem build_qos_problem(const Eigen::VectorXi& c_out_q,
                                     const Eigen::MatrixXd& v, const Eigen::MatrixXd& u,
                                     double beta, double gamma);

// Temporal precoding result for all users. p_x[k][0] is the in-phase vector of
// user k, p_x[k][1] the quadrature one; solutions keep the solver certificates.
struct TemporalPrecoder {
  std::vector<std::array<Eigen::VectorXd, 2>> p_x;
  std::vector<std::array<qp::PrecodeSolution, 2>> solutions;
  double beta = 1.0;
  double gamma = 0.0;
};

// Solve the QoS QP for every user and quadrature. c_out[k][0] / c_out[k][1]
// are the target sign patterns of user k. beta is the effective channel gain
// after spatial precoding (c_zf under zero forcing).
TemporalPrecoder qos_precode(const std::vector<std::array<Eigen::VectorXi, 2>>& c_out,
                             const SystemMatrices& sys, double gamma, double beta,
                             const qp::SolveOptions& opts = {});

// Per-user transmit energy: |p_sp_k|^2 * (|W p_I|^2 + |W p_Q|^2).
double user_energy(const Eigen::VectorXcd& p_sp_k, const Eigen::MatrixXd& w,
                   const Eigen::VectorXd& p_i, const Eigen::VectorXd& p_q);

// Frame transmit energy: trace(P_sp R R^H P_sp^H) with row k of R the complex
// fine-grid transmit waveform G_Tx^T U (p_I + j p_Q) of user k.
double total_transmit_energy(const Eigen::MatrixXcd& p_sp,
                             const std::vector<std::array<Eigen::VectorXd, 2>>& p_x,
                             const Eigen::MatrixXd& gtx_dense, const Eigen::MatrixXd& u);

struct SnrRequired {
  double linear = 0.0;
  double db = 0.0;
};

// SNR_Req = E_Tx / (N_q * N_0 * (1 + rolloff_tx)); the transmit-power axis
// used for antenna-count comparisons.
SnrRequired snr_required(double e_tx, int n_q, double n0, double rolloff_tx);

}  // namespace zxprec
