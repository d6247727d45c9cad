// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the hot paths: the per-pattern QoS QP, the MVN box
// integral behind the SER bound, one full Monte Carlo trial and frame
// detection. Run with --benchmark_min_time=... to trade precision for time.
#include <benchmark/benchmark.h>

#include <limits>

#include <Eigen/Dense>

#include "zxprec/mvn.hpp"
#include "zxprec/precoding.hpp"
#include "zxprec/ser_bound.hpp"
#include "zxprec/simulator.hpp"
#include "zxprec/waveform.hpp"
#include "zxprec/zx_modulation.hpp"

using namespace zxprec;

namespace {

SystemDims siso_dims(int n_symbols) {
  SystemDims d;
  d.n_symbols = n_symbols;
  d.m_rx = 3;
  d.m_tx = 3;
  d.n_tx = 1;
  d.n_u = 1;
  return d;
}

void bm_qp_solve_frame(benchmark::State& state) {
  SystemMatrices sys = make_system_matrices(siso_dims(8), 0.22, 0.22);
  ZxAlphabet a = ZxAlphabet::standard(3);
  ZxFrame f = encode({2, 1, 4, 3, 1, 2, 3, 4}, +1, a);
  qp::PrecodeProblem prob = build_qos_problem(f.c_out, sys.v, sys.u, 1.0, 2.65);
  prob.W = sys.w;
  for (auto _ : state) {
    qp::PrecodeSolution s = qp::solve(prob);
    benchmark::DoNotOptimize(s.objective);
  }
}
BENCHMARK(bm_qp_solve_frame);

void bm_mvn_box(benchmark::State& state) {
  ZxAlphabet a = ZxAlphabet::standard(3);
  Eigen::MatrixXd sigma = bound_sigma(a, 1.0, SigmaMode::Correlated);
  MvnBox box;
  box.lower = Eigen::VectorXd::Zero(4);
  box.upper = Eigen::VectorXd::Constant(4, std::numeric_limits<double>::infinity());
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(4, 2.65);
  for (auto _ : state) {
    MvnResult r = mvn_cdf(box, mu, sigma);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(bm_mvn_box);

void bm_ser_bound(benchmark::State& state) {
  ZxAlphabet a = ZxAlphabet::standard(3);
  Eigen::MatrixXd sigma = bound_sigma(a, 1.0, SigmaMode::Correlated);
  for (auto _ : state) {
    SerBoundReport r = ser_upper_bound(2.65, sigma, a);
    benchmark::DoNotOptimize(r.ser_ub);
  }
}
BENCHMARK(bm_ser_bound);

void bm_run_trial(benchmark::State& state) {
  SimConfig cfg;
  cfg.dims = siso_dims(8);
  cfg.sigma2 = 1.0;
  cfg.gamma = 2.65;
  cfg.trials = 1;
  cfg.seed = 3;
  cfg.threads = 1;
  SimContext ctx(cfg);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(1, 1);
  long trial = 0;
  for (auto _ : state) {
    TrialOutcome out = run_trial(ctx, h, trial++ % 64);  // bounded pattern cache
    benchmark::DoNotOptimize(out.symbol_errors);
  }
}
BENCHMARK(bm_run_trial);

void bm_detect_frame(benchmark::State& state) {
  ZxAlphabet a = ZxAlphabet::standard(3);
  ZxCodebook cb(a);
  ZxFrame f = encode({2, 1, 4, 3, 1, 2, 3, 4}, +1, a);
  for (auto _ : state) {
    std::vector<int> symbols = detect(f.c_out, cb);
    benchmark::DoNotOptimize(symbols.data());
  }
}
BENCHMARK(bm_detect_frame);

}  // namespace

BENCHMARK_MAIN();
