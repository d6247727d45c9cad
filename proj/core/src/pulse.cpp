// SPDX-License-Identifier: Apache-2.0
#include "zxprec/pulse.hpp"

#include <cmath>
#include <stdexcept>

namespace zxprec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Relative half-width of the guard interval around removable singularities.
// Inside it the analytic limit is returned; the closed forms lose digits well
// before this point matters.
constexpr double kSingGuard = 1e-8;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

double rc_value(double e, double tau) {
  // tau = t/T. Peak-normalized raised cosine with roll-off e.
  // Singularity at |tau| = 1/(2e): limit (pi/4) * sinc(1/(2e)).
  double denom_arg = 2.0 * e * tau;
  if (std::abs(std::abs(denom_arg) - 1.0) < kSingGuard)
    return (kPi / 4.0) * sinc(1.0 / (2.0 * e));
  // Exact Nyquist zeros at nonzero integers; the product form below returns
  // ~1e-17 garbage there, so pin them.
  double r = std::round(tau);
  if (r != 0.0 && std::abs(tau - r) < 1e-12) return 0.0;
  return sinc(tau) * std::cos(kPi * e * tau) / (1.0 - denom_arg * denom_arg);
}

double rrc_value(double e, double tau) {
  // Peak value at tau = 0: 1 - e + 4e/pi.
  if (std::abs(tau) < kSingGuard) return 1.0 - e + 4.0 * e / kPi;
  // Singularity at |tau| = 1/(4e).
  if (std::abs(std::abs(4.0 * e * tau) - 1.0) < kSingGuard) {
    double a = kPi / (4.0 * e);
    return (e / std::sqrt(2.0)) *
           ((1.0 + 2.0 / kPi) * std::sin(a) + (1.0 - 2.0 / kPi) * std::cos(a));
  }
  double num = std::sin(kPi * tau * (1.0 - e)) +
               4.0 * e * tau * std::cos(kPi * tau * (1.0 + e));
  double den = kPi * tau * (1.0 - 16.0 * e * e * tau * tau);
  return num / den;
}

}  // namespace

double pulse_value(const PulseShape& shape, double t) {
  if (!(shape.rolloff > 0.0 && shape.rolloff <= 1.0))
    throw std::invalid_argument("pulse_value: rolloff must be in (0, 1]");
  double tau = t / shape.symbol_period;
  if (shape.kind == PulseKind::RaisedCosine) return rc_value(shape.rolloff, tau);
  return rrc_value(shape.rolloff, tau);
}

double pulse_energy(const PulseShape& shape) {
  if (shape.kind == PulseKind::RaisedCosine)
    return shape.symbol_period * (1.0 - shape.rolloff / 4.0);
  return shape.symbol_period;
}

Eigen::VectorXd sampled_taps(const PulseShape& shape) {
  if (shape.samples_per_symbol < 1 || shape.half_span_symbols < 1)
    throw std::invalid_argument("sampled_taps: bad sampling geometry");
  const int sps = shape.samples_per_symbol;
  const int half = shape.half_span_symbols * sps + 1;
  const double dt = shape.symbol_period / sps;
  const double scale = std::sqrt(dt) / std::sqrt(pulse_energy(shape));
  Eigen::VectorXd taps(2 * half + 1);
  for (int k = -half; k <= half; ++k)
    taps(k + half) = scale * pulse_value(shape, k * dt);
  return taps;
}

}  // namespace zxprec
