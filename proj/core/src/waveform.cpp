// SPDX-License-Identifier: Apache-2.0
#include "zxprec/waveform.hpp"

#include <cmath>
#include <stdexcept>

namespace zxprec {

namespace {

// Taps on the fine T/M_Rx grid with the amplitude normalization of the
// filter's own rate (a = sqrt(T/amp_sps)). For M = 1 this is sampled_taps();
// for M > 1 the transmit filter keeps its own amplitude but lives on the
// receive-rate grid so both filter matrices share one column space.
Eigen::VectorXd fine_taps(const PulseShape& shape, int grid_sps, int half_span) {
  const int half = half_span * grid_sps + 1;
  const double dt = shape.symbol_period / grid_sps;
  const double amp = std::sqrt(shape.symbol_period / shape.samples_per_symbol);
  const double scale = amp / std::sqrt(pulse_energy(shape));
  Eigen::VectorXd taps(2 * half + 1);
  for (int k = -half; k <= half; ++k)
    taps(k + half) = scale * pulse_value(shape, k * dt);
  return taps;
}

void check_shape(const SystemDims& dims, const PulseShape& shape, PulseKind kind,
                 int expected_sps, const char* who) {
  if (shape.kind != kind) throw std::invalid_argument(std::string(who) + ": wrong pulse kind");
  if (shape.samples_per_symbol != expected_sps)
    throw std::invalid_argument(std::string(who) + ": samples_per_symbol does not match dims");
  if (shape.half_span_symbols != dims.n_symbols)
    throw std::invalid_argument(std::string(who) + ": half_span_symbols must equal n_symbols");
}

}  // namespace

Eigen::MatrixXd BandedToeplitz::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
  const Eigen::Index len = first_row_taps.size();
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index c0 = r * row_shift;
    for (Eigen::Index k = 0; k < len; ++k) {
      const Eigen::Index c = c0 + k;
      if (c >= 0 && c < cols) out(r, c) = first_row_taps(k);
    }
  }
  return out;
}

BandedToeplitz build_gtx(const SystemDims& dims, const PulseShape& shape) {
  dims.validate();
  check_shape(dims, shape, PulseKind::RaisedCosine, dims.m_tx, "build_gtx");
  BandedToeplitz g;
  g.rows = dims.n_tot();
  g.cols = 3 * dims.n_tot();
  g.row_shift = 1;
  g.first_row_taps = fine_taps(shape, dims.m_rx, dims.n_symbols);
  return g;
}

BandedToeplitz build_grx(const SystemDims& dims, const PulseShape& shape) {
  dims.validate();
  check_shape(dims, shape, PulseKind::RootRaisedCosine, dims.m_rx, "build_grx");
  BandedToeplitz g;
  g.rows = dims.n_tot();
  g.cols = 3 * dims.n_tot();
  g.row_shift = 1;
  g.first_row_taps = fine_taps(shape, dims.m_rx, dims.n_symbols);
  return g;
}

Eigen::MatrixXd build_v(const SystemDims& dims, const PulseShape& tx, const PulseShape& rx) {
  const Eigen::MatrixXd grx = build_grx(dims, rx).dense();
  const Eigen::MatrixXd gtx = build_gtx(dims, tx).dense();
  return grx * gtx.transpose();
}

Eigen::MatrixXd build_u(const SystemDims& dims) {
  dims.validate();
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(dims.n_tot(), dims.n_q());
  const int m = dims.m();
  for (int n = 0; n < dims.n_q(); ++n) u(m * n, n) = 1.0;
  return u;
}

Eigen::MatrixXd noise_covariance(const BandedToeplitz& grx, Eigen::Index window_start,
                                 Eigen::Index window_len, double sigma2) {
  if (window_len < 1 || window_start < 0 || window_start + window_len > grx.rows)
    throw std::invalid_argument("noise_covariance: window out of range");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("noise_covariance: sigma2 must be > 0");
  const Eigen::MatrixXd g = grx.dense();
  Eigen::MatrixXd gram = g * g.transpose();
  Eigen::MatrixXd sigma =
      sigma2 * gram.block(window_start, window_start, window_len, window_len);
  sigma = 0.5 * (sigma + sigma.transpose().eval());
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("noise_covariance: window is not positive definite");
  return sigma;
}

SystemMatrices make_system_matrices(const SystemDims& dims, double rolloff_tx,
                                    double rolloff_rx) {
  dims.validate();
  SystemMatrices sys;
  sys.dims = dims;
  sys.tx_shape = PulseShape{PulseKind::RaisedCosine, rolloff_tx, 1.0, dims.m_tx,
                            dims.n_symbols};
  sys.rx_shape = PulseShape{PulseKind::RootRaisedCosine, rolloff_rx, 1.0, dims.m_rx,
                            dims.n_symbols};
  sys.gtx = build_gtx(dims, sys.tx_shape);
  sys.grx = build_grx(dims, sys.rx_shape);
  sys.gtx_dense = sys.gtx.dense();
  sys.grx_dense = sys.grx.dense();
  sys.v = sys.grx_dense * sys.gtx_dense.transpose();
  sys.u = build_u(dims);
  sys.w = sys.gtx_dense.transpose() * sys.u;
  sys.vu = sys.v * sys.u;
  return sys;
}

}  // namespace zxprec
