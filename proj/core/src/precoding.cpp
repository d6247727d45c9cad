// SPDX-License-Identifier: Apache-2.0
#include "zxprec/precoding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zxprec {

SpatialPrecoder zf_precoder(const Eigen::MatrixXcd& h) {
  const Eigen::Index n_u = h.rows();
  const Eigen::Index n_t = h.cols();
  if (n_t < n_u) throw std::invalid_argument("zf_precoder: need n_tx >= n_u");

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(n_u - 1);
  if (!(smin > 0.0) || smax / smin > 1e8)
    throw std::invalid_argument("zf_precoder: H is rank deficient or too ill-conditioned");

  Eigen::MatrixXcd hhh = h * h.adjoint();  // n_u x n_u, Hermitian positive definite
  Eigen::MatrixXcd hhh_inv = hhh.inverse();
  SpatialPrecoder sp;
  sp.p_zf = h.adjoint() * hhh_inv;
  sp.c_zf = std::sqrt(static_cast<double>(n_u) / hhh_inv.trace().real());
  return sp;
}

qp::PrecodeProblem build_qos_problem(const Eigen::VectorXi& c_out_q,
                                     const Eigen::MatrixXd& v, const Eigen::MatrixXd& u,
                                     double beta, double gamma) {
  if (c_out_q.size() != v.rows())
    throw std::invalid_argument("build_qos_problem: c_out length does not match V");
  if (!(beta > 0.0)) throw std::invalid_argument("build_qos_problem: beta must be > 0");
  for (Eigen::Index i = 0; i < c_out_q.size(); ++i)
    if (c_out_q(i) != 1 && c_out_q(i) != -1)
      throw std::invalid_argument("build_qos_problem: c_out entries must be +-1");

  Eigen::MatrixXd vu = v * u;
  for (Eigen::Index i = 0; i < vu.rows(); ++i)
    if (vu.row(i).lpNorm<Eigen::Infinity>() == 0.0)
      throw std::invalid_argument("build_qos_problem: V*U has a zero row (degenerate filter)");

  qp::PrecodeProblem prob;
  prob.B = (-beta) * c_out_q.cast<double>().asDiagonal() * vu;
  prob.gamma = gamma;
  return prob;
}

TemporalPrecoder qos_precode(const std::vector<std::array<Eigen::VectorXi, 2>>& c_out,
                             const SystemMatrices& sys, double gamma, double beta,
                             const qp::SolveOptions& opts) {
  TemporalPrecoder tp;
  tp.beta = beta;
  tp.gamma = gamma;
  tp.p_x.resize(c_out.size());
  tp.solutions.resize(c_out.size());
  for (size_t k = 0; k < c_out.size(); ++k) {
    for (int q = 0; q < 2; ++q) {
      qp::PrecodeProblem prob = build_qos_problem(c_out[k][q], sys.v, sys.u, beta, gamma);
      prob.W = sys.w;
      qp::PrecodeSolution s = qp::solve(prob, opts);
      if (s.status == qp::SolveStatus::Infeasible)
        throw std::runtime_error("qos_precode: infeasible QP for user " + std::to_string(k) +
                                 (q == 0 ? " (I)" : " (Q)"));
      tp.p_x[k][q] = s.p;
      tp.solutions[k][q] = std::move(s);
    }
  }
  return tp;
}

double user_energy(const Eigen::VectorXcd& p_sp_k, const Eigen::MatrixXd& w,
                   const Eigen::VectorXd& p_i, const Eigen::VectorXd& p_q) {
  return p_sp_k.squaredNorm() * ((w * p_i).squaredNorm() + (w * p_q).squaredNorm());
}

double total_transmit_energy(const Eigen::MatrixXcd& p_sp,
                             const std::vector<std::array<Eigen::VectorXd, 2>>& p_x,
                             const Eigen::MatrixXd& gtx_dense, const Eigen::MatrixXd& u) {
  const Eigen::Index n_u = p_sp.cols();
  if (static_cast<Eigen::Index>(p_x.size()) != n_u)
    throw std::invalid_argument("total_transmit_energy: one p_x pair per user required");
  Eigen::MatrixXd wmap = gtx_dense.transpose() * u;  // fine-grid waveform map
  Eigen::MatrixXcd r(n_u, wmap.rows());
  for (Eigen::Index k = 0; k < n_u; ++k) {
    Eigen::VectorXcd pk =
        p_x[k][0].cast<std::complex<double>>() +
        std::complex<double>(0.0, 1.0) * p_x[k][1].cast<std::complex<double>>();
    r.row(k) = (wmap * pk).transpose();
  }
  return (p_sp * r).squaredNorm();
}

SnrRequired snr_required(double e_tx, int n_q, double n0, double rolloff_tx) {
  if (!(e_tx >= 0.0) || n_q < 1 || !(n0 > 0.0))
    throw std::invalid_argument("snr_required: bad arguments");
  SnrRequired s;
  s.linear = e_tx / (static_cast<double>(n_q) * n0 * (1.0 + rolloff_tx));
  s.db = 10.0 * std::log10(s.linear);
  return s;
}

}  // namespace zxprec
