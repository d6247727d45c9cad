// SPDX-License-Identifier: Apache-2.0
#include "zxprec/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace zxprec {

namespace {

// Stream roles; the (seed, trial, user, role) key spans all randomness.
constexpr std::uint64_t kRoleBitsI = 1;
constexpr std::uint64_t kRoleBitsQ = 2;
constexpr std::uint64_t kRoleNoise = 3;
constexpr std::uint64_t kRoleChannel = 4;
constexpr std::uint64_t kRoleRealization = 5;

// Frames per deterministic scheduling unit. Early stopping is only evaluated
// at batch boundaries so the set of simulated trials never depends on the
// thread count.
constexpr long kBatch = 256;

int thread_count(const SimConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("ZXPREC_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

// Sequential bit source over one counter stream.
class BitDrawer {
 public:
  explicit BitDrawer(CounterRng rng) : rng_(rng) {}
  std::uint8_t next() {
    if (left_ == 0) {
      buf_ = rng_.next_u64();
      left_ = 64;
    }
    std::uint8_t b = buf_ & 1;
    buf_ >>= 1;
    --left_;
    return b;
  }

 private:
  CounterRng rng_;
  std::uint64_t buf_ = 0;
  int left_ = 0;
};

std::string pattern_key(const Eigen::VectorXi& c_out) {
  std::string key(static_cast<size_t>(c_out.size()), '0');
  for (Eigen::Index i = 0; i < c_out.size(); ++i) key[i] = c_out(i) > 0 ? '1' : '0';
  return key;
}

struct WilsonInterval {
  double lo, hi;
};

WilsonInterval wilson95(long errors, long total) {
  if (total <= 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, (center - half) / denom), std::min(1.0, (center + half) / denom)};
}

}  // namespace

void SimConfig::validate() const {
  dims.validate();
  if (gamma.has_value() == target_ser.has_value())
    throw std::invalid_argument("SimConfig: set exactly one of gamma / target_ser");
  if (gamma && !(*gamma > 0.0))
    throw std::invalid_argument("SimConfig: gamma must be > 0 (degenerate design otherwise)");
  if (target_ser && !(*target_ser > 0.0 && *target_ser < 1.0))
    throw std::invalid_argument("SimConfig: target_ser must be in (0,1)");
  if (trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("SimConfig: sigma2 must be > 0");
  if (rho0 != 1 && rho0 != -1) throw std::invalid_argument("SimConfig: rho0 must be +-1");
  ZxAlphabet a = ZxAlphabet::standard(dims.m_rx);
  if (dims.n_symbols % a.block_symbols != 0)
    throw std::invalid_argument("SimConfig: n_symbols must be a multiple of the block size");
  a.bits_per_block();  // rejects alphabets without a bit mapping early
}

SimContext::SimContext(const SimConfig& cfg)
    : cfg_(cfg),
      alphabet_(ZxAlphabet::standard(cfg.dims.m_rx)),
      codebook_(alphabet_),
      sys_(make_system_matrices(cfg.dims, cfg.rolloff_tx, cfg.rolloff_rx)) {
  cfg_.validate();
  Eigen::MatrixXd sigma =
      bound_sigma(alphabet_, cfg_.sigma2, cfg_.sigma_mode, cfg_.rolloff_rx);
  if (cfg_.gamma) {
    gamma_ = *cfg_.gamma;
  } else {
    gamma_ = gamma_for_ser(*cfg_.target_ser, sigma, alphabet_);
  }
  SerBoundReport rep = ser_upper_bound(gamma_, sigma, alphabet_);
  ser_ub_ = rep.ser_ub;
  ber_ub_ = rep.ber_ub;
  blocks_per_frame_ = cfg_.dims.n_symbols / alphabet_.block_symbols;
}

const Eigen::VectorXd& SimContext::unit_solution(const Eigen::VectorXi& c_out) const {
  const std::string key = pattern_key(c_out);
  {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  qp::PrecodeProblem prob = build_qos_problem(c_out, sys_.v, sys_.u, 1.0, 1.0);
  prob.W = sys_.w;
  qp::PrecodeSolution s = qp::solve(prob);
  if (s.status == qp::SolveStatus::Infeasible)
    throw std::runtime_error("SimContext: infeasible QoS problem");
  std::lock_guard<std::mutex> lock(cache_mu_);
  // Long frames have too many distinct patterns to keep; hand back a
  // call-local copy once the cache is saturated (callers copy immediately).
  if (cache_.size() >= 200000) {
    thread_local Eigen::VectorXd overflow;
    overflow = std::move(s.p);
    return overflow;
  }
  auto [it, inserted] = cache_.emplace(key, std::move(s.p));
  return it->second;
}

Eigen::MatrixXcd draw_channel(int n_u, int n_t, CounterRng& rng) {
  const double s = std::sqrt(0.5);
  Eigen::MatrixXcd h(n_u, n_t);
  for (int r = 0; r < n_u; ++r)
    for (int c = 0; c < n_t; ++c) {
      double re = s * rng.normal();
      double im = s * rng.normal();
      h(r, c) = {re, im};
    }
  return h;
}

namespace {

// As run_trial but with an explicit stream seed, so independent realizations
// (ser_cdf) get independent payloads and noise.
TrialOutcome run_trial_seeded(const SimContext& ctx, const Eigen::MatrixXcd& h, long trial,
                              std::uint64_t stream_seed);

}  // namespace

TrialOutcome run_trial(const SimContext& ctx, const Eigen::MatrixXcd& h, long trial) {
  return run_trial_seeded(ctx, h, trial, ctx.config().seed);
}

namespace {

TrialOutcome run_trial_seeded(const SimContext& ctx, const Eigen::MatrixXcd& h, long trial,
                              std::uint64_t stream_seed) {
  const SimConfig& cfg = ctx.config();
  const SystemMatrices& sys = ctx.matrices();
  const ZxAlphabet& a = ctx.alphabet();
  const int n_u = cfg.dims.n_u;
  const int n_tot = cfg.dims.n_tot();
  const int n_fine = 3 * n_tot;
  const int n_blocks = ctx.blocks_per_frame();
  const int bits_per_quad = n_blocks * a.bits_per_block();
  const double sigma = std::sqrt(cfg.sigma2);

  SpatialPrecoder sp = zf_precoder(h);
  const double scale = ctx.gamma() / sp.c_zf;

  std::vector<std::array<std::vector<std::uint8_t>, 2>> tx_bits(n_u);
  std::vector<std::array<std::vector<int>, 2>> tx_symbols(n_u);
  std::vector<std::array<Eigen::VectorXd, 2>> p_x(n_u);
  std::vector<Eigen::VectorXcd> x_fine(n_u);  // VU p per user, complex

  const std::uint64_t t = static_cast<std::uint64_t>(trial);
  for (int k = 0; k < n_u; ++k) {
    for (int q = 0; q < 2; ++q) {
      BitDrawer bd(CounterRng::stream(stream_seed, t, static_cast<std::uint64_t>(k),
                                      q == 0 ? kRoleBitsI : kRoleBitsQ));
      auto& bits = tx_bits[k][q];
      bits.resize(bits_per_quad);
      for (auto& b : bits) b = bd.next();
      tx_symbols[k][q] = gray_encode(bits, a);
      ZxFrame frame = encode(tx_symbols[k][q], cfg.rho0, a);
      p_x[k][q] = scale * ctx.unit_solution(frame.c_out);
    }
    x_fine[k] = (sys.vu * p_x[k][0]).cast<std::complex<double>>() +
                std::complex<double>(0.0, 1.0) *
                    (sys.vu * p_x[k][1]).cast<std::complex<double>>();
  }

  // Effective spatial matrix; zero forcing makes it c_zf * I up to rounding,
  // but the full product keeps the signal chain honest.
  Eigen::MatrixXcd eff = h * sp.p_sp();

  TrialOutcome out;
  Eigen::VectorXi z(n_tot);
  for (int k = 0; k < n_u; ++k) {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n_tot);
    for (int j = 0; j < n_u; ++j) y += eff(k, j) * x_fine[j];

    CounterRng noise_rng =
        CounterRng::stream(stream_seed, t, static_cast<std::uint64_t>(k), kRoleNoise);
    Eigen::VectorXcd n(n_fine);
    for (int i = 0; i < n_fine; ++i) {
      double re = sigma * noise_rng.normal();
      double im = sigma * noise_rng.normal();
      n(i) = {re, im};
    }
    y += sys.grx_dense * n;

    for (int q = 0; q < 2; ++q) {
      for (int i = 0; i < n_tot; ++i) {
        double v = (q == 0) ? y(i).real() : y(i).imag();
        z(i) = (v >= 0.0) ? 1 : -1;  // sign with 0 -> +1
      }
      std::vector<int> rx_symbols = detect(z, ctx.codebook());
      const auto& tx = tx_symbols[k][q];
      for (int b = 0; b < n_blocks; ++b) {
        bool block_err = false;
        for (int s = 0; s < a.block_symbols; ++s)
          if (rx_symbols[b * a.block_symbols + s] != tx[b * a.block_symbols + s])
            block_err = true;
        out.symbol_errors += block_err ? 1 : 0;
      }
      out.symbols += n_blocks;
      std::vector<std::uint8_t> rx_bits = gray_decode(rx_symbols, a);
      for (int i = 0; i < bits_per_quad; ++i)
        out.bit_errors += (rx_bits[i] != tx_bits[k][q][i]) ? 1 : 0;
      out.bits += bits_per_quad;
    }
  }
  out.e_tx = total_transmit_energy(sp.p_sp(), p_x, sys.gtx_dense, sys.u);
  return out;
}

// Deterministic batched trial loop shared by monte_carlo and ser_cdf.
// Outcomes are reduced in trial order regardless of the thread split.
struct Accumulated {
  TrialOutcome total;
  double etx_sum = 0.0;
  long trials_run = 0;
};

Accumulated run_trials(const SimContext& ctx, std::uint64_t stream_seed) {
  const SimConfig& cfg = ctx.config();
  const int n_threads = thread_count(cfg);

  Eigen::MatrixXcd h_fixed;
  if (!cfg.redraw_channel) {
    CounterRng rng = CounterRng::stream(stream_seed, 0, 0, kRoleChannel);
    h_fixed = draw_channel(cfg.dims.n_u, cfg.dims.n_tx, rng);
  }

  Accumulated acc;
  std::vector<TrialOutcome> slots(kBatch);
  for (long start = 0; start < cfg.trials; start += kBatch) {
    const long count = std::min<long>(kBatch, cfg.trials - start);
    auto worker = [&](long lo, long hi) {
      for (long i = lo; i < hi; ++i) {
        Eigen::MatrixXcd h = h_fixed;
        if (cfg.redraw_channel) {
          CounterRng rng = CounterRng::stream(stream_seed,
                                              static_cast<std::uint64_t>(start + i), 0,
                                              kRoleChannel);
          h = draw_channel(cfg.dims.n_u, cfg.dims.n_tx, rng);
        }
        slots[i] = run_trial_seeded(ctx, h, start + i, stream_seed);
      }
    };
    if (n_threads <= 1 || count < 2) {
      worker(0, count);
    } else {
      std::vector<std::thread> pool;
      const long chunk = (count + n_threads - 1) / n_threads;
      for (int tid = 0; tid < n_threads; ++tid) {
        long lo = tid * chunk;
        long hi = std::min<long>(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(worker, lo, hi);
      }
      for (auto& th : pool) th.join();
    }
    for (long i = 0; i < count; ++i) {
      acc.total.symbol_errors += slots[i].symbol_errors;
      acc.total.bit_errors += slots[i].bit_errors;
      acc.total.symbols += slots[i].symbols;
      acc.total.bits += slots[i].bits;
      acc.etx_sum += slots[i].e_tx;
    }
    acc.trials_run += count;
    if (cfg.stop_at_errors && acc.total.symbol_errors >= *cfg.stop_at_errors) break;
  }
  return acc;
}

}  // namespace

McResult monte_carlo(const SimConfig& cfg) {
  cfg.validate();
  SimContext ctx(cfg);
  Accumulated acc = run_trials(ctx, cfg.seed);

  McResult r;
  r.gamma = ctx.gamma();
  r.symbol_errors = acc.total.symbol_errors;
  r.symbols = acc.total.symbols;
  r.bit_errors = acc.total.bit_errors;
  r.bits = acc.total.bits;
  r.trials_run = acc.trials_run;
  r.ser = static_cast<double>(r.symbol_errors) / static_cast<double>(r.symbols);
  r.ber = static_cast<double>(r.bit_errors) / static_cast<double>(r.bits);
  WilsonInterval ci = wilson95(r.symbol_errors, r.symbols);
  r.ser_ci_lo = ci.lo;
  r.ser_ci_hi = ci.hi;
  r.ser_ub = ctx.ser_ub();
  r.ber_ub = ctx.ber_ub();
  r.etx_mean = acc.etx_sum / static_cast<double>(acc.trials_run);
  SnrRequired snr = snr_required(r.etx_mean, cfg.dims.n_q(), cfg.sigma2, cfg.rolloff_tx);
  r.snr_req_lin = snr.linear;
  r.snr_req_db = snr.db;
  return r;
}

std::vector<SweepRow> sweep(const SimConfig& base, SweepAxis axis,
                            const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("sweep: empty grid");
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    SweepRow row;
    row.axis_value = v;
    SimConfig cfg = base;
    try {
      switch (axis) {
        case SweepAxis::Gamma:
          cfg.gamma = v;
          cfg.target_ser.reset();
          break;
        case SweepAxis::TargetSer:
          cfg.target_ser = v;
          cfg.gamma.reset();
          break;
        case SweepAxis::NSymbols:
          cfg.dims.n_symbols = static_cast<int>(v);
          break;
        case SweepAxis::NTx:
          cfg.dims.n_tx = static_cast<int>(v);
          break;
      }
      row.result = monte_carlo(cfg);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double SerCdfResult::cdf_at(double s) const {
  auto it = std::upper_bound(ser_sorted.begin(), ser_sorted.end(), s);
  return static_cast<double>(it - ser_sorted.begin()) /
         static_cast<double>(ser_sorted.size());
}

SerCdfResult ser_cdf(const SimConfig& cfg, int n_channels) {
  cfg.validate();
  if (n_channels < 1) throw std::invalid_argument("ser_cdf: n_channels must be >= 1");
  SimConfig per_real = cfg;
  per_real.redraw_channel = false;
  SimContext ctx(per_real);

  SerCdfResult res;
  res.gamma = ctx.gamma();
  res.ser_sorted.reserve(n_channels);
  for (int r = 0; r < n_channels; ++r) {
    // Distinct sub-seed per realization; trial streams hang off it.
    std::uint64_t sub = CounterRng::derive_key(cfg.seed, static_cast<std::uint64_t>(r), 0,
                                               kRoleRealization);
    Accumulated acc = run_trials(ctx, sub);
    res.ser_sorted.push_back(static_cast<double>(acc.total.symbol_errors) /
                             static_cast<double>(acc.total.symbols));
  }
  std::sort(res.ser_sorted.begin(), res.ser_sorted.end());
  return res;
}

}  // namespace zxprec
