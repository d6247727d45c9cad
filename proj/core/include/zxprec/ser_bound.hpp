// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "zxprec/mvn.hpp"
#include "zxprec/zx_modulation.hpp"

namespace zxprec {

enum class SigmaMode { Correlated, White };

// Noise covariance of one detection window (m = 1 + block_len samples).
// Correlated mode: sigma2 * G_Rx G_Rx^T of the single-block frame, the
// receive-filtered covariance the detector actually sees. White mode:
// sigma2 * I, provided for comparison.
Eigen::MatrixXd bound_sigma(const ZxAlphabet& a, double sigma2, SigmaMode mode,
                            double rolloff_rx = 0.22);

// All sign patterns the detector maps to one block, as integration orthants.
// mu is the noiseless window gamma * (rho-prefixed block codeword). Patterns
// with a flipped prefix sample are classified against the opposite-polarity
// codebook, exactly like the sequential detector would.
struct DetectionRegion {
  int block_index = 0;
  std::vector<int> symbols;
  Eigen::VectorXd mu;
  std::vector<MvnBox> boxes;
  std::vector<std::vector<int>> patterns;  // signs incl. the prefix coordinate
};

std::vector<DetectionRegion> enumerate_detection_regions(const ZxAlphabet& a, int rho,
                                                         double gamma);

struct SerBoundOptions {
  MvnOptions mvn{};            // integrator settings for the refinement pass
  double box_rel_tol = 1e-4;   // relative error budget for the complement sums
};

struct SerBoundReport {
  double gamma = 0.0;
  double sigma2 = 0.0;                  // Sigma(0,0), per-dimension variance
  std::vector<double> p_correct;        // per block, order of valid_blocks()
  double ser_ub = 0.0;
  double ber_ub = 0.0;
  double cdf_error_estimate = 0.0;      // accumulated integrator error
};

// Semi-analytical symbol error bound: every window sample is assumed to sit
// exactly at distance gamma from the threshold (worst feasible case), so the
// per-block error probability is the normal mass outside the block's own
// detection region. ser_ub averages the per-block error probabilities; ber_ub
// divides by the bits per symbol (2 for m_rx = 3, 1.5 for m_rx = 2).
SerBoundReport ser_upper_bound(double gamma, const Eigen::MatrixXd& sigma,
                               const ZxAlphabet& a, const SerBoundOptions& opts = {});

// Invert the bound by a bracketed root search on gamma in [1e-2, 8], stopping
// at |ser_ub(gamma) - target| <= 1e-3 * target. Throws when the target is
// outside the achievable range.
double gamma_for_ser(double target_ser, const Eigen::MatrixXd& sigma, const ZxAlphabet& a,
                     const SerBoundOptions& opts = {});

// Bits per transmitted symbol (n_s in the BER relation).
double bits_per_symbol(const ZxAlphabet& a);

}  // namespace zxprec
