// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace zxprec {

// Axis-aligned integration box; entries may be -inf / +inf.
struct MvnBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct MvnOptions {
  double abs_tol = 1e-6;
  double rel_tol = 0.0;        // extra stop: error <= rel_tol * |value|
  int n_shifts = 8;            // independent lattice randomizations
  int initial_points = 128;    // points per shift before the first error check
  int max_points = 1 << 16;    // per-shift cap
  std::uint64_t seed = 0x5eedULL;
};

struct MvnResult {
  double value = 0.0;
  double error = 0.0;          // 3x the randomization standard error
  long points = 0;             // per-shift points actually spent
};

// P[lower <= Y <= upper] for Y ~ N(mu, sigma) via the separation-of-variables
// transform with a randomly shifted Kronecker lattice. Variables are reordered
// for variance reduction during the Cholesky pass. Exactly diagonal sigma is
// evaluated as a closed-form product. Throws on non-SPD sigma or m > 12.
MvnResult mvn_cdf(const MvnBox& box, const Eigen::VectorXd& mu,
                  const Eigen::MatrixXd& sigma, const MvnOptions& opts = {});

// Standard normal CDF and inverse, shared with tests and the bound module.
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace zxprec
