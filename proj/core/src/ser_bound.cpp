// SPDX-License-Identifier: Apache-2.0
#include "zxprec/ser_bound.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "zxprec/system.hpp"
#include "zxprec/waveform.hpp"

namespace zxprec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MvnBox orthant_box(const std::vector<int>& pattern) {
  const Eigen::Index m = static_cast<Eigen::Index>(pattern.size());
  MvnBox box;
  box.lower.resize(m);
  box.upper.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (pattern[i] > 0) {
      box.lower(i) = 0.0;
      box.upper(i) = kInf;
    } else {
      box.lower(i) = -kInf;
      box.upper(i) = 0.0;
    }
  }
  return box;
}

// Disjoint box cover of every orthant the detector does NOT map to block j.
// Cells start as sign vectors; two cells identical except for one coordinate
// with opposite halves merge into a cell spanning the whole line there (0).
// Fewer, fatter boxes cost far less to integrate than raw orthants.
std::vector<MvnBox> complement_cover(const std::vector<DetectionRegion>& regions,
                                     size_t j, int m) {
  std::vector<std::vector<int>> cells;
  for (size_t i = 0; i < regions.size(); ++i) {
    if (i == j) continue;
    for (const auto& p : regions[i].patterns) cells.push_back(p);
  }
  bool merged = true;
  while (merged) {
    merged = false;
    for (size_t x = 0; x < cells.size() && !merged; ++x) {
      for (size_t y = x + 1; y < cells.size() && !merged; ++y) {
        int diff = -1;
        bool ok = true;
        for (int c = 0; c < m; ++c) {
          if (cells[x][c] == cells[y][c]) continue;
          if (cells[x][c] != 0 && cells[y][c] != 0 && diff < 0) {
            diff = c;
          } else {
            ok = false;
            break;
          }
        }
        if (ok && diff >= 0) {
          cells[x][diff] = 0;
          cells.erase(cells.begin() + static_cast<long>(y));
          merged = true;
        }
      }
    }
  }
  std::vector<MvnBox> boxes;
  boxes.reserve(cells.size());
  for (const auto& cell : cells) {
    MvnBox box;
    box.lower.resize(m);
    box.upper.resize(m);
    for (int c = 0; c < m; ++c) {
      box.lower(c) = cell[c] > 0 ? 0.0 : -kInf;
      box.upper(c) = cell[c] < 0 ? 0.0 : kInf;
    }
    boxes.push_back(std::move(box));
  }
  return boxes;
}

}  // namespace

double bits_per_symbol(const ZxAlphabet& a) {
  return static_cast<double>(a.bits_per_block()) / a.block_symbols;
}

Eigen::MatrixXd bound_sigma(const ZxAlphabet& a, double sigma2, SigmaMode mode,
                            double rolloff_rx) {
  a.validate();
  const int m = a.block_len() + 1;
  if (mode == SigmaMode::White)
    return sigma2 * Eigen::MatrixXd::Identity(m, m);
  // Single-block frame: its n_tot equals the detection window length, so the
  // full G_Rx Gram is the window covariance.
  SystemDims dims;
  dims.n_symbols = a.block_symbols;
  dims.m_rx = a.m_rx;
  dims.m_tx = a.m_rx;
  PulseShape rx{PulseKind::RootRaisedCosine, rolloff_rx, 1.0, a.m_rx, dims.n_symbols};
  BandedToeplitz grx = build_grx(dims, rx);
  return noise_covariance(grx, 0, m, sigma2);
}

std::vector<DetectionRegion> enumerate_detection_regions(const ZxAlphabet& a, int rho,
                                                         double gamma) {
  a.validate();
  if (rho != 1 && rho != -1)
    throw std::invalid_argument("enumerate_detection_regions: rho must be +-1");
  const int m = a.block_len() + 1;
  const auto& blocks = valid_blocks(a);
  ZxCodebook cb(a);

  std::vector<DetectionRegion> regions(blocks.size());
  for (size_t j = 0; j < blocks.size(); ++j) {
    regions[j].block_index = static_cast<int>(j);
    regions[j].symbols = blocks[j];
    std::vector<int> noiseless = block_pattern(blocks[j], rho, a);
    regions[j].mu.resize(m);
    regions[j].mu(0) = gamma * rho;
    for (int i = 0; i < a.block_len(); ++i) regions[j].mu(i + 1) = gamma * noiseless[i];
  }

  // Assign every window sign pattern to the block the detector returns for it.
  // The pattern's own first sample is the polarity reference, so flipped-pilot
  // patterns land in the region their actual detection outcome dictates.
  std::vector<int> pattern(m);
  for (int code = 0; code < (1 << m); ++code) {
    for (int i = 0; i < m; ++i) pattern[i] = (code >> i) & 1 ? 1 : -1;
    DetectedBlock d = cb.detect_block(pattern.data());
    regions[d.block_index].patterns.push_back(pattern);
    regions[d.block_index].boxes.push_back(orthant_box(pattern));
  }
  return regions;
}

SerBoundReport ser_upper_bound(double gamma, const Eigen::MatrixXd& sigma,
                               const ZxAlphabet& a, const SerBoundOptions& opts) {
  a.validate();
  const int m = a.block_len() + 1;
  if (sigma.rows() != m || sigma.cols() != m)
    throw std::invalid_argument("ser_upper_bound: sigma must match the detection window");
  if (!(gamma >= 0.0)) throw std::invalid_argument("ser_upper_bound: gamma must be >= 0");

  const auto regions = enumerate_detection_regions(a, +1, gamma);
  const int n_blocks = static_cast<int>(regions.size());

  SerBoundReport rep;
  rep.gamma = gamma;
  rep.sigma2 = sigma(0, 0);
  rep.p_correct.resize(n_blocks);

  // Error mass per block: every orthant the detector maps elsewhere,
  // integrated under this block's noiseless mean. Summing the complement
  // keeps the result accurate in relative terms when the bound is tiny.
  struct Job {
    int region;
    MvnBox box;
    double value = 0.0;
    double error = 0.0;
  };
  std::vector<Job> jobs;
  for (int j = 0; j < n_blocks; ++j)
    for (MvnBox& box : complement_cover(regions, static_cast<size_t>(j), m))
      jobs.push_back(Job{j, std::move(box), 0.0, 0.0});

  // Survey pass: cheap estimates to locate where the mass actually is.
  MvnOptions survey = opts.mvn;
  survey.abs_tol = 0.0;
  survey.rel_tol = 0.05;
  survey.max_points = std::min(survey.max_points, 1024);
  double ser_sum = 0.0;
  for (Job& job : jobs) {
    MvnResult r = mvn_cdf(job.box, regions[job.region].mu, sigma, survey);
    job.value = r.value;
    job.error = r.error;
    ser_sum += r.value;
  }

  // Refinement pass: spend points only on boxes whose survey error exceeds
  // their share of the total budget box_rel_tol * sum. The 1e-12 floor keeps
  // the budget meaningful when every box is essentially empty.
  const double budget = std::max(opts.box_rel_tol * ser_sum, 1e-12);
  const double share = budget / static_cast<double>(jobs.size());
  MvnOptions refine = opts.mvn;
  refine.abs_tol = share;
  refine.rel_tol = opts.box_rel_tol;
  double err_sum = 0.0;
  for (Job& job : jobs) {
    if (job.error > share && job.error > opts.box_rel_tol * job.value) {
      MvnResult r = mvn_cdf(job.box, regions[job.region].mu, sigma, refine);
      job.value = r.value;
      job.error = r.error;
    }
    err_sum += job.error;
  }

  std::vector<double> p_err(n_blocks, 0.0);
  for (const Job& job : jobs) p_err[job.region] += job.value;
  double total = 0.0;
  for (int j = 0; j < n_blocks; ++j) {
    rep.p_correct[j] = 1.0 - p_err[j];
    total += p_err[j];
  }
  rep.ser_ub = total / n_blocks;
  rep.ber_ub = rep.ser_ub / bits_per_symbol(a);
  rep.cdf_error_estimate = err_sum / n_blocks;
  return rep;
}

double gamma_for_ser(double target_ser, const Eigen::MatrixXd& sigma, const ZxAlphabet& a,
                     const SerBoundOptions& opts) {
  if (!(target_ser > 0.0 && target_ser < 1.0))
    throw std::invalid_argument("gamma_for_ser: target must be in (0,1)");
  const double rel = 1e-3;
  auto eval = [&](double g) { return ser_upper_bound(g, sigma, a, opts).ser_ub; };
  auto logf = [](double f) { return std::log(std::max(f, 1e-300)); };

  double lo = 1e-2, hi = 8.0;
  double f_lo = eval(lo);
  double f_hi = eval(hi);
  if (target_ser > f_lo || target_ser < f_hi)
    throw std::invalid_argument("gamma_for_ser: target outside achievable range");
  if (std::abs(f_lo - target_ser) <= rel * target_ser) return lo;
  if (std::abs(f_hi - target_ser) <= rel * target_ser) return hi;

  // Bracketed search, interpolating in (gamma, log ser) where the bound is
  // close to straight; falls back to the midpoint when the proposal leaves
  // the open bracket. Stops on the same criterion as plain bisection.
  const double lt = std::log(target_ser);
  double x0 = lo, l0 = logf(f_lo);
  double x1 = hi, l1 = logf(f_hi);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    double w = hi - lo;
    x = (l1 == l0) ? 0.5 * (lo + hi) : x1 + (lt - l1) * (x1 - x0) / (l1 - l0);
    if (!(x > lo + 0.02 * w && x < hi - 0.02 * w)) x = 0.5 * (lo + hi);
    double f = eval(x);
    if (std::abs(f - target_ser) <= rel * target_ser) return x;
    if (f > target_ser)
      lo = x;
    else
      hi = x;
    x0 = x1;
    l0 = l1;
    x1 = x;
    l1 = logf(f);
    if (hi - lo < 1e-10) break;
  }
  return x;
}

}  // namespace zxprec
