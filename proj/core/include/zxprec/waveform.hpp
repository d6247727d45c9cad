// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "zxprec/pulse.hpp"
#include "zxprec/system.hpp"

namespace zxprec {

// Banded Toeplitz filter matrix: row r holds first_row_taps shifted right by
// r*row_shift columns, zeros elsewhere. With taps of length 2*n_tot+1,
// n_tot rows and unit shift this fills a n_tot x 3*n_tot band exactly.
struct BandedToeplitz {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::VectorXd first_row_taps;
  Eigen::Index row_shift = 1;

  Eigen::MatrixXd dense() const;
};

// Transmit filter matrix (RC pulse). Rows are a_Tx-scaled taps on the fine
// T/M_Rx grid; a_Tx = sqrt(T/M_Tx). Requires shape.kind == RaisedCosine,
// shape.samples_per_symbol == dims.m_tx and shape.half_span_symbols ==
// dims.n_symbols (the truncation window is the frame span).
BandedToeplitz build_gtx(const SystemDims& dims, const PulseShape& shape);

// Receive filter matrix (RRC pulse), a_Rx = sqrt(T/M_Rx), same layout.
BandedToeplitz build_grx(const SystemDims& dims, const PulseShape& shape);

// Combined-waveform matrix V (n_tot x n_tot): V = G_Rx * G_Tx^T, i.e. entry
// (i,j) is the correlation of the two sampled unit-energy pulses at lag
// (j-i)*T/M_Rx. Symmetric Toeplitz for matched grids.
Eigen::MatrixXd build_v(const SystemDims& dims, const PulseShape& tx, const PulseShape& rx);

// M-fold upsampling selector (n_tot x n_q): U(m,n) = 1 iff m = M*(n-1)+1 in
// 1-based indices, zero otherwise.
Eigen::MatrixXd build_u(const SystemDims& dims);

// Filtered-noise covariance: sigma2 * (G_Rx G_Rx^T) restricted to window rows
// [window_start, window_start + window_len). sigma2 is the noise variance per
// real dimension. Throws if the result is not positive definite (an
// over-truncated filter shows up here).
Eigen::MatrixXd noise_covariance(const BandedToeplitz& grx, Eigen::Index window_start,
                                 Eigen::Index window_len, double sigma2);

// All frame-level matrices needed by the precoder and the simulator for one
// configuration. W = G_Tx^T * U maps transmit coefficients to the fine-grid
// transmit waveform, so p^T W^T W p is the transmit energy quadratic form.
struct SystemMatrices {
  SystemDims dims;
  PulseShape tx_shape;
  PulseShape rx_shape;
  BandedToeplitz gtx;
  BandedToeplitz grx;
  Eigen::MatrixXd gtx_dense;
  Eigen::MatrixXd grx_dense;
  Eigen::MatrixXd v;
  Eigen::MatrixXd u;
  Eigen::MatrixXd w;
  Eigen::MatrixXd vu;  // V * U, the per-quadrature map from p to receive samples
};

SystemMatrices make_system_matrices(const SystemDims& dims, double rolloff_tx,
                                    double rolloff_rx);

}  // namespace zxprec
