// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace zxprec {

enum class PulseKind { RaisedCosine, RootRaisedCosine };

// Truncated pulse description. T stays a field even though it is always 1 in
// this project, so the closed forms below read like the textbook expressions.
// half_span_symbols is the truncation window: taps cover
// t in [-(half_span + 1/sps) T, +(half_span + 1/sps) T] on the T/sps grid,
// i.e. 2*(half_span*sps + 1) + 1 samples.
struct PulseShape {
  PulseKind kind = PulseKind::RaisedCosine;
  double rolloff = 0.22;
  double symbol_period = 1.0;
  int samples_per_symbol = 1;
  int half_span_symbols = 1;
};

// Peak-normalized RC or RRC amplitude at time t. Removable singularities
// (RC at |t| = T/(2e); RRC at t = 0 and |t| = T/(4e)) return their analytic
// limits; RC is exactly zero at nonzero integer multiples of T.
double pulse_value(const PulseShape& shape, double t);

// Continuous energy integral of the peak-normalized pulse.
// RC: T*(1 - rolloff/4). RRC: T. Both verified against quadrature in tests.
double pulse_energy(const PulseShape& shape);

// Sampled taps scaled for unit discrete energy: a * g(k*T/sps) / sqrt(energy)
// with a = sqrt(T/sps), k = -(half_span*sps + 1) .. +(half_span*sps + 1).
// The scaled tap-squared sum approaches 1 as half_span grows (truncation and
// the Riemann-sum gap are the only error terms).
Eigen::VectorXd sampled_taps(const PulseShape& shape);

}  // namespace zxprec
