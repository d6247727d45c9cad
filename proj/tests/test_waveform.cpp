// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "zxprec/rng.hpp"
#include "zxprec/waveform.hpp"

using namespace zxprec;

namespace {

SystemDims dims_of(int n, int m_rx, int m_tx) {
  SystemDims d;
  d.n_symbols = n;
  d.m_rx = m_rx;
  d.m_tx = m_tx;
  return d;
}

}  // namespace

TEST_CASE("transmit filter matrix shape and banded structure") {
  {
    SystemMatrices sys = make_system_matrices(dims_of(1, 1, 1), 0.22, 0.22);
    REQUIRE(sys.gtx_dense.rows() == 2);
    REQUIRE(sys.gtx_dense.cols() == 6);
    // second row is the first shifted right by the stride
    for (int c = 1; c < 6; ++c) CHECK(sys.gtx_dense(1, c) == sys.gtx_dense(0, c - 1));
    CHECK(sys.gtx_dense(1, 0) == 0.0);
  }
  {
    SystemMatrices sys = make_system_matrices(dims_of(2, 2, 2), 0.22, 0.22);
    CHECK(sys.gtx_dense.rows() == 5);
    CHECK(sys.gtx_dense.cols() == 15);
  }
}

TEST_CASE("receive filter matrix shape and tap count") {
  SystemDims d = dims_of(1, 3, 3);
  SystemMatrices sys = make_system_matrices(d, 0.22, 0.22);
  CHECK(sys.grx_dense.rows() == 4);
  CHECK(sys.grx_dense.cols() == 12);
  CHECK(sys.grx.first_row_taps.size() == 2 * (d.n_symbols * d.m_rx + 1) + 1);
  const Eigen::VectorXd& taps = sys.grx.first_row_taps;
  const Eigen::Index half = taps.size() / 2;
  for (Eigen::Index k = 0; k <= half; ++k)
    CHECK(std::abs(taps(half + k) - taps(half - k)) < 1e-12);
}

TEST_CASE("row energies: truncation-limited normalization") {
  // The truncation window scales with the frame length, so the row energy
  // approaches 1 as N grows; short frames keep a measurable deficit.
  auto row0 = [](const Eigen::MatrixXd& g) { return g.row(0).squaredNorm(); };
  SystemMatrices s8 = make_system_matrices(dims_of(8, 3, 3), 0.22, 0.22);
  CHECK(std::abs(row0(s8.gtx_dense) - 1.0) < 1e-4);
  CHECK(std::abs(row0(s8.grx_dense) - 1.0) < 1e-4);
  SystemMatrices s8b = make_system_matrices(dims_of(8, 2, 2), 0.22, 0.22);
  CHECK(std::abs(row0(s8b.gtx_dense) - 1.0) < 1e-4);
  CHECK(std::abs(row0(s8b.grx_dense) - 1.0) < 1e-4);
  // every row carries the same taps
  for (int r = 1; r < s8.gtx_dense.rows(); ++r)
    CHECK(s8.gtx_dense.row(r).squaredNorm() == row0(s8.gtx_dense));

  // regression pins from a verified build
  CHECK(row0(s8.gtx_dense) == doctest::Approx(0.999990175762).epsilon(1e-8));
  CHECK(row0(s8.grx_dense) == doctest::Approx(0.999933134901).epsilon(1e-8));
  SystemMatrices s1 = make_system_matrices(dims_of(1, 3, 3), 0.22, 0.22);
  CHECK(row0(s1.grx_dense) == doctest::Approx(0.979462881425).epsilon(1e-8));

  SystemMatrices s2 = make_system_matrices(dims_of(2, 3, 3), 0.22, 0.22);
  CHECK(std::abs(row0(s2.grx_dense) - 1.0) < std::abs(row0(s1.grx_dense) - 1.0));
  CHECK(std::abs(row0(s8.grx_dense) - 1.0) < std::abs(row0(s2.grx_dense) - 1.0));
}

TEST_CASE("upsampled transmit filter keeps its own amplitude on the fine grid") {
  // M_Tx < M_Rx: the row lives on the T/M_Rx grid but is normalized at rate
  // M_Tx, so the per-coefficient waveform energy is (M_Tx/M_Rx) * row energy.
  SystemDims d = dims_of(6, 3, 1);
  SystemMatrices sys = make_system_matrices(d, 0.22, 0.22);
  const double row = sys.gtx_dense.row(0).squaredNorm();
  CHECK(std::abs(row * d.m_tx / d.m_rx - 1.0) < 1e-4);
  CHECK(row == doctest::Approx(2.999946747317).epsilon(1e-8));
}

TEST_CASE("transmit rows vanish at other symbol instants") {
  // RC zero-ISI: at matched rates, taps at nonzero multiples of T are 0.
  SystemDims d = dims_of(4, 3, 3);
  SystemMatrices sys = make_system_matrices(d, 0.22, 0.22);
  const Eigen::VectorXd& taps = sys.gtx.first_row_taps;
  const Eigen::Index half = taps.size() / 2;
  for (Eigen::Index k = 3; k <= half; k += 3) {
    CHECK(taps(half + k) == 0.0);
    CHECK(taps(half - k) == 0.0);
  }
}

TEST_CASE("combined waveform matrix V") {
  SystemDims d = dims_of(8, 3, 3);
  SystemMatrices sys = make_system_matrices(d, 0.22, 0.22);
  const Eigen::MatrixXd& v = sys.v;
  REQUIRE(v.rows() == d.n_tot());
  REQUIRE(v.cols() == d.n_tot());
  CHECK((v - v.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  // Toeplitz: entries depend on j - i only
  for (int i = 1; i < v.rows(); ++i)
    for (int j = 1; j < v.cols(); ++j)
      CHECK(std::abs(v(i, j) - v(i - 1, j - 1)) < 1e-12);
  // diagonal equals v(0) = inner product of the two tap vectors
  const double v0 = sys.grx.first_row_taps.dot(sys.gtx.first_row_taps);
  for (int i = 0; i < v.rows(); ++i) CHECK(v(i, i) == doctest::Approx(v0).epsilon(1e-12));
  CHECK(v(0, 0) == doctest::Approx(0.994478602303).epsilon(1e-8));
}

TEST_CASE("upsampling selector U") {
  {
    SystemDims d = dims_of(3, 2, 2);  // M = 1
    Eigen::MatrixXd u = build_u(d);
    REQUIRE(u.rows() == d.n_tot());
    REQUIRE(u.cols() == d.n_q());
    CHECK((u - Eigen::MatrixXd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() == 0.0);
  }
  {
    SystemDims d = dims_of(2, 2, 1);  // M = 2
    Eigen::MatrixXd u = build_u(d);
    REQUIRE(u.rows() == 5);
    REQUIRE(u.cols() == 3);
    CHECK(u(0, 0) == 1.0);
    CHECK(u(2, 1) == 1.0);
    CHECK(u(4, 2) == 1.0);
    CHECK(u.sum() == 3.0);
    for (int c = 0; c < u.cols(); ++c) CHECK(u.col(c).sum() == 1.0);
    for (int r = 0; r < u.rows(); ++r) {
      const double s = u.row(r).sum();
      CHECK((s == 0.0 || s == 1.0));
    }
  }
}

TEST_CASE("W stacks the selected transmit columns") {
  SystemDims d = dims_of(2, 2, 1);
  SystemMatrices sys = make_system_matrices(d, 0.22, 0.22);
  REQUIRE(sys.w.rows() == 3 * d.n_tot());
  REQUIRE(sys.w.cols() == d.n_q());
  for (int n = 0; n < d.n_q(); ++n)
    CHECK((sys.w.col(n) - sys.gtx_dense.row(d.m() * n).transpose()).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("dimension validation") {
  SystemDims d = dims_of(2, 3, 2);  // M_Rx not a multiple of M_Tx
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_system_matrices(d, 0.22, 0.22), std::invalid_argument);
  SystemDims d2 = dims_of(0, 3, 3);
  CHECK_THROWS_AS(d2.validate(), std::invalid_argument);
  SystemDims d3 = dims_of(2, 3, 3);
  d3.n_tx = 1;
  d3.n_u = 2;  // more users than antennas
  CHECK_THROWS_AS(d3.validate(), std::invalid_argument);
}

TEST_CASE("noise covariance window") {
  SystemDims d = dims_of(8, 3, 3);
  SystemMatrices sys = make_system_matrices(d, 0.22, 0.22);
  const double sigma2 = 0.7;
  Eigen::MatrixXd s = noise_covariance(sys.grx, 10, 4, sigma2);
  REQUIRE(s.rows() == 4);
  CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s(i, i) - sigma2) < 0.02 * sigma2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  SystemDims d2 = dims_of(8, 2, 2);
  SystemMatrices sys2 = make_system_matrices(d2, 0.22, 0.22);
  Eigen::MatrixXd s2 = noise_covariance(sys2.grx, 6, 5, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(s2);
  CHECK(es2.eigenvalues().minCoeff() > 0.0);

  CHECK_THROWS_AS(noise_covariance(sys.grx, 22, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(noise_covariance(sys.grx, -1, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(noise_covariance(sys.grx, 0, 4, 0.0), std::invalid_argument);
}

TEST_CASE("noise covariance matches filtered-noise statistics") {
  SystemDims d = dims_of(2, 3, 3);
  SystemMatrices sys = make_system_matrices(d, 0.22, 0.22);
  const double sigma2 = 1.3;
  const int m = d.n_tot();
  Eigen::MatrixXd expected = noise_covariance(sys.grx, 0, m, sigma2);

  const long draws = 1000000;
  const int batch = 1000;
  CounterRng rng = CounterRng::stream(42, 0, 0, 3);
  Eigen::MatrixXd x(sys.grx_dense.cols(), batch);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
  for (long done = 0; done < draws; done += batch) {
    for (int c = 0; c < batch; ++c)
      for (int r = 0; r < x.rows(); ++r) x(r, c) = rng.normal();
    Eigen::MatrixXd y = sys.grx_dense * x * std::sqrt(sigma2);
    acc.noalias() += y * y.transpose();
  }
  Eigen::MatrixXd emp = acc / static_cast<double>(draws);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double var = (expected(i, i) * expected(j, j) + expected(i, j) * expected(i, j)) /
                         static_cast<double>(draws);
      CHECK(std::abs(emp(i, j) - expected(i, j)) <= 3.0 * std::sqrt(var));
    }
  }
}
