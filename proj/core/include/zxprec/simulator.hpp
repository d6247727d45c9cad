// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "zxprec/precoding.hpp"
#include "zxprec/rng.hpp"
#include "zxprec/ser_bound.hpp"
#include "zxprec/system.hpp"
#include "zxprec/waveform.hpp"
#include "zxprec/zx_modulation.hpp"

namespace zxprec {

struct SimConfig {
  SystemDims dims;
  double rolloff_tx = 0.22;
  double rolloff_rx = 0.22;
  double sigma2 = 1.0;
  std::optional<double> gamma;       // exactly one of gamma / target_ser
  std::optional<double> target_ser;
  long trials = 1000;                // frames per evaluation (upper limit)
  std::optional<long> stop_at_errors;  // optional early stop, checked per batch
  std::uint64_t seed = 1;
  SigmaMode sigma_mode = SigmaMode::Correlated;
  bool redraw_channel = false;       // false: one channel draw per curve
  int rho0 = +1;
  int threads = 0;                   // 0: ZXPREC_THREADS env or 1

  void validate() const;
};

// Immutable per-configuration state shared by all trials, plus a memoized QP
// cache. The QoS QP is positively homogeneous: the solution for pattern c at
// (gamma, beta) is (gamma/beta) times the unit solution for c, so one solve
// per distinct sign pattern covers every trial and channel draw.
class SimContext {
 public:
  explicit SimContext(const SimConfig& cfg);

  const SimConfig& config() const { return cfg_; }
  const ZxAlphabet& alphabet() const { return alphabet_; }
  const ZxCodebook& codebook() const { return codebook_; }
  const SystemMatrices& matrices() const { return sys_; }
  double gamma() const { return gamma_; }           // resolved threshold
  double ser_ub() const { return ser_ub_; }         // companion bound at gamma
  double ber_ub() const { return ber_ub_; }
  int blocks_per_frame() const { return blocks_per_frame_; }

  // Unit-threshold QP solution for one sign pattern (including the pilot).
  // Scaled p = (gamma/beta) * q. Thread-safe.
  const Eigen::VectorXd& unit_solution(const Eigen::VectorXi& c_out) const;

 private:
  SimConfig cfg_;
  ZxAlphabet alphabet_;
  ZxCodebook codebook_;
  SystemMatrices sys_;
  double gamma_ = 0.0;
  double ser_ub_ = 0.0;
  double ber_ub_ = 0.0;
  int blocks_per_frame_ = 0;

  mutable std::mutex cache_mu_;
  mutable std::unordered_map<std::string, Eigen::VectorXd> cache_;
};

struct TrialOutcome {
  long symbol_errors = 0;  // block-level errors (one block = one counted symbol)
  long bit_errors = 0;
  long symbols = 0;
  long bits = 0;
  double e_tx = 0.0;
};

// i.i.d. complex Gaussian channel, unit variance per entry.
Eigen::MatrixXcd draw_channel(int n_u, int n_t, CounterRng& rng);

// One frame through Eq.-level signal chain: payload bits, Gray mapping,
// zero-crossing encoding, QoS precoding, spatial combining, filtered noise,
// 1-bit quantization per quadrature, block detection, error counts.
TrialOutcome run_trial(const SimContext& ctx, const Eigen::MatrixXcd& h, long trial);

struct McResult {
  double gamma = 0.0;
  double ser = 0.0, ber = 0.0;
  double ser_ci_lo = 0.0, ser_ci_hi = 0.0;  // Wilson 95%
  double ser_ub = 0.0, ber_ub = 0.0;
  long symbol_errors = 0, symbols = 0;
  long bit_errors = 0, bits = 0;
  long trials_run = 0;
  double etx_mean = 0.0;
  double snr_req_lin = 0.0, snr_req_db = 0.0;
};

McResult monte_carlo(const SimConfig& cfg);

enum class SweepAxis { Gamma, TargetSer, NSymbols, NTx };

struct SweepRow {
  double axis_value = 0.0;
  bool ok = false;
  std::string error;
  McResult result;
};

// One monte_carlo per grid value; per-point failures are recorded and the
// sweep continues.
std::vector<SweepRow> sweep(const SimConfig& base, SweepAxis axis,
                            const std::vector<double>& values);

struct SerCdfResult {
  double gamma = 0.0;
  std::vector<double> ser_sorted;   // one measured SER per channel realization
  // Empirical CDF at s: fraction of realizations with SER <= s.
  double cdf_at(double s) const;
};

SerCdfResult ser_cdf(const SimConfig& cfg, int n_channels);

}  // namespace zxprec
