// SPDX-License-Identifier: Apache-2.0
//
// zxprec: QoS precoder design, semi-analytical SER bounds and link-level
// Monte Carlo for the 1-bit oversampled zero-crossing downlink. Subcommands
// write machine-readable results plus a manifest that replays bit-identically.
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "util.hpp"

#include "zxprec/precoding.hpp"
#include "zxprec/rng.hpp"
#include "zxprec/ser_bound.hpp"
#include "zxprec/simulator.hpp"
#include "zxprec/version.hpp"

using nlohmann::json;
using namespace zxprec;
using zxtool::UsageError;
using zxtool::fmt9;

namespace {

SigmaMode parse_mode(const std::string& s) {
  if (s == "correlated") return SigmaMode::Correlated;
  if (s == "white") return SigmaMode::White;
  throw UsageError("--sigma-mode: want correlated or white, got '" + s + "'");
}

const char* mode_name(SigmaMode m) {
  return m == SigmaMode::White ? "white" : "correlated";
}

const char* status_name(qp::SolveStatus s) {
  switch (s) {
    case qp::SolveStatus::Optimal: return "optimal";
    case qp::SolveStatus::MaxIter: return "max_iter";
    case qp::SolveStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// ser-bound

int run_ser_bound(const json& in, const std::string& out_dir) {
  ZxAlphabet a = ZxAlphabet::standard(in.at("m_rx").get<int>());
  SigmaMode mode = parse_mode(in.at("sigma_mode").get<std::string>());
  const double sigma2 = in.at("sigma2").get<double>();
  const double rolloff_rx = in.at("rolloff_rx").get<double>();
  Eigen::MatrixXd sigma = bound_sigma(a, sigma2, mode, rolloff_rx);
  SerBoundOptions opts;

  double gamma;
  if (in.contains("target_ser"))
    gamma = gamma_for_ser(in.at("target_ser").get<double>(), sigma, a, opts);
  else
    gamma = in.at("gamma").get<double>();
  SerBoundReport rep = ser_upper_bound(gamma, sigma, a, opts);

  json out;
  out["m_rx"] = a.m_rx;
  out["block_symbols"] = a.block_symbols;
  out["sigma_mode"] = mode_name(mode);
  out["sigma2"] = sigma2;
  out["rolloff_rx"] = rolloff_rx;
  if (in.contains("target_ser")) out["target_ser"] = in.at("target_ser");
  out["gamma"] = rep.gamma;
  out["ser_ub"] = rep.ser_ub;
  out["ber_ub"] = rep.ber_ub;
  out["bits_per_symbol"] = bits_per_symbol(a);
  out["p_correct"] = rep.p_correct;
  out["cdf_error_estimate"] = rep.cdf_error_estimate;
  zxtool::write_text(out_dir + "/report.json", out.dump(2) + "\n");
  std::vector<std::string> outputs{"report.json"};

  if (in.contains("grid")) {
    std::string csv = "gamma,ser_ub,ber_ub\n";
    for (double g : in.at("grid").get<std::vector<double>>()) {
      SerBoundReport r = ser_upper_bound(g, sigma, a, opts);
      csv += fmt9(g) + "," + fmt9(r.ser_ub) + "," + fmt9(r.ber_ub) + "\n";
    }
    zxtool::write_text(out_dir + "/bound_grid.csv", csv);
    outputs.push_back("bound_grid.csv");
  }

  zxtool::write_manifest(out_dir, "ser-bound", in, outputs);
  std::printf("m_rx=%d mode=%s gamma=%.4f ser_ub=%.6g ber_ub=%.6g\n", a.m_rx,
              mode_name(mode), rep.gamma, rep.ser_ub, rep.ber_ub);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

std::string results_csv(const std::vector<SweepRow>& rows) {
  std::string csv = "gamma,ser_mc,ser_ci_lo,ser_ci_hi,ser_ub,ber_mc,ber_ub,etx,snr_req_db\n";
  for (const SweepRow& row : rows) {
    if (!row.ok) continue;
    const McResult& r = row.result;
    csv += fmt9(r.gamma) + "," + fmt9(r.ser) + "," + fmt9(r.ser_ci_lo) + "," +
           fmt9(r.ser_ci_hi) + "," + fmt9(r.ser_ub) + "," + fmt9(r.ber) + "," +
           fmt9(r.ber_ub) + "," + fmt9(r.etx_mean) + "," + fmt9(r.snr_req_db) + "\n";
  }
  return csv;
}

int run_simulate(const json& in, const std::string& out_dir) {
  SimConfig cfg = zxtool::config_from_json(in.at("config"));
  const std::string mode = in.at("mode").get<std::string>();

  if (mode == "cdf") {
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const int channels = in.at("channels").get<int>();
    SerCdfResult r = ser_cdf(cfg, channels);
    std::string csv = "ser,cdf\n";
    for (size_t i = 0; i < r.ser_sorted.size(); ++i)
      csv += fmt9(r.ser_sorted[i]) + "," +
             fmt9(static_cast<double>(i + 1) / static_cast<double>(r.ser_sorted.size())) +
             "\n";
    zxtool::write_text(out_dir + "/cdf.csv", csv);
    zxtool::write_manifest(out_dir, "simulate", in, {"cdf.csv"});
    std::printf("cdf: gamma=%.4f channels=%d median_ser=%.6g\n", r.gamma, channels,
                r.ser_sorted[r.ser_sorted.size() / 2]);
    if (cfg.target_ser)
      std::printf("fraction at/below target %.3g: %.3f\n", *cfg.target_ser,
                  r.cdf_at(*cfg.target_ser));
    return 0;
  }

  SweepAxis axis = SweepAxis::Gamma;
  const std::string axis_name = in.at("axis").get<std::string>();
  if (axis_name == "gamma")
    axis = SweepAxis::Gamma;
  else if (axis_name == "target_ser")
    axis = SweepAxis::TargetSer;
  else if (axis_name == "n_symbols")
    axis = SweepAxis::NSymbols;
  else if (axis_name == "n_tx")
    axis = SweepAxis::NTx;
  else
    throw UsageError("unknown sweep axis '" + axis_name + "'");
  std::vector<double> values = in.at("values").get<std::vector<double>>();
  if (values.empty()) throw UsageError("simulate: empty sweep grid");

  // Structural config problems surface as usage errors before running;
  // per-point failures are reported and skipped by the sweep itself.
  {
    SimConfig probe = cfg;
    switch (axis) {
      case SweepAxis::Gamma:
        probe.gamma = values.front();
        probe.target_ser.reset();
        break;
      case SweepAxis::TargetSer:
        probe.target_ser = values.front();
        probe.gamma.reset();
        break;
      case SweepAxis::NSymbols:
        probe.dims.n_symbols = static_cast<int>(values.front());
        break;
      case SweepAxis::NTx:
        probe.dims.n_tx = static_cast<int>(values.front());
        break;
    }
    try {
      probe.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  std::vector<SweepRow> rows = sweep(cfg, axis, values);
  int ok = 0;
  for (const SweepRow& row : rows) {
    if (row.ok) {
      ++ok;
      std::printf("%s=%.6g gamma=%.4f ser=%.6g ci=[%.6g,%.6g] ser_ub=%.6g snr=%.2fdB\n",
                  axis_name.c_str(), row.axis_value, row.result.gamma, row.result.ser,
                  row.result.ser_ci_lo, row.result.ser_ci_hi, row.result.ser_ub,
                  row.result.snr_req_db);
    } else {
      std::fprintf(stderr, "point %s=%.6g failed: %s\n", axis_name.c_str(),
                   row.axis_value, row.error.c_str());
    }
  }
  zxtool::write_text(out_dir + "/results.csv", results_csv(rows));
  zxtool::write_manifest(out_dir, "simulate", in, {"results.csv"});
  if (ok == 0) throw std::runtime_error("simulate: every grid point failed");
  return 0;
}

// ---------------------------------------------------------------------------
// design

int run_design(const json& in, const std::string& out_dir) {
  Eigen::MatrixXcd h = zxtool::channel_from_json(in.at("channel"));
  SystemDims dims;
  dims.n_symbols = in.at("n_symbols").get<int>();
  dims.m_rx = in.at("m_rx").get<int>();
  dims.m_tx = in.at("m_tx").get<int>();
  dims.n_u = static_cast<int>(h.rows());
  dims.n_tx = static_cast<int>(h.cols());
  try {
    dims.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  ZxAlphabet a = ZxAlphabet::standard(dims.m_rx);
  if (dims.n_symbols % a.block_symbols != 0)
    throw UsageError("design: n_symbols must be a multiple of the block size");

  SigmaMode mode = parse_mode(in.at("sigma_mode").get<std::string>());
  const double sigma2 = in.at("sigma2").get<double>();
  const double rolloff_tx = in.at("rolloff_tx").get<double>();
  const double rolloff_rx = in.at("rolloff_rx").get<double>();
  const std::uint64_t seed = in.at("seed").get<std::uint64_t>();

  double gamma;
  if (in.contains("target_ser")) {
    Eigen::MatrixXd sigma = bound_sigma(a, sigma2, mode, rolloff_rx);
    gamma = gamma_for_ser(in.at("target_ser").get<double>(), sigma, a);
  } else {
    gamma = in.at("gamma").get<double>();
  }

  SystemMatrices sys = make_system_matrices(dims, rolloff_tx, rolloff_rx);
  SpatialPrecoder sp = zf_precoder(h);

  // Payload draw mirrors simulator trial 0, so a designed frame can be
  // cross-checked against the first simulated frame for the same seed.
  const int blocks = dims.n_symbols / a.block_symbols;
  const int bits_per_quad = blocks * a.bits_per_block();
  std::vector<std::array<Eigen::VectorXi, 2>> c_out(dims.n_u);
  std::vector<std::array<std::vector<int>, 2>> symbols(dims.n_u);
  for (int k = 0; k < dims.n_u; ++k) {
    for (int q = 0; q < 2; ++q) {
      CounterRng rng = CounterRng::stream(seed, 0, static_cast<std::uint64_t>(k),
                                          q == 0 ? 1 : 2);
      std::uint64_t buf = 0;
      int left = 0;
      std::vector<std::uint8_t> bits(bits_per_quad);
      for (int i = 0; i < bits_per_quad; ++i) {
        if (left == 0) {
          buf = rng.next_u64();
          left = 64;
        }
        bits[i] = buf & 1;
        buf >>= 1;
        --left;
      }
      symbols[k][q] = gray_encode(bits, a);
      c_out[k][q] = encode(symbols[k][q], +1, a).c_out;
    }
  }

  TemporalPrecoder tp = qos_precode(c_out, sys, gamma, sp.c_zf);
  double e_tx = total_transmit_energy(sp.p_sp(), tp.p_x, sys.gtx_dense, sys.u);
  SnrRequired snr = snr_required(e_tx, dims.n_q(), sigma2, rolloff_tx);

  json out;
  out["gamma"] = gamma;
  if (in.contains("target_ser")) out["target_ser"] = in.at("target_ser");
  out["c_zf"] = sp.c_zf;
  out["e_tx"] = e_tx;
  out["snr_req_db"] = snr.db;
  out["n_q"] = dims.n_q();
  out["dims"] = {{"n_symbols", dims.n_symbols}, {"m_rx", dims.m_rx},
                 {"m_tx", dims.m_tx},           {"n_tx", dims.n_tx},
                 {"n_u", dims.n_u}};
  json users = json::array();
  bool all_ok = true;
  for (int k = 0; k < dims.n_u; ++k) {
    json user;
    const char* quad_names[2] = {"i", "q"};
    for (int q = 0; q < 2; ++q) {
      const qp::PrecodeSolution& sol = tp.solutions[k][q];
      if (sol.status != qp::SolveStatus::Optimal) all_ok = false;
      json jq;
      jq["symbols"] = symbols[k][q];
      jq["p"] = std::vector<double>(tp.p_x[k][q].data(),
                                    tp.p_x[k][q].data() + tp.p_x[k][q].size());
      jq["objective"] = sol.objective;
      jq["max_violation"] = sol.max_violation;
      jq["kkt_residual"] = sol.kkt_residual;
      jq["iterations"] = sol.iterations;
      jq["status"] = status_name(sol.status);
      user[quad_names[q]] = std::move(jq);
    }
    user["e_user"] = user_energy(sp.p_sp().col(k), sys.w, tp.p_x[k][0], tp.p_x[k][1]);
    users.push_back(std::move(user));
  }
  out["users"] = std::move(users);
  zxtool::write_text(out_dir + "/design.json", out.dump(2) + "\n");
  zxtool::write_manifest(out_dir, "design", in, {"design.json"});

  std::printf("gamma=%.4f c_zf=%.6g e_tx=%.6g snr_req=%.2fdB\n", gamma, sp.c_zf, e_tx,
              snr.db);
  for (int k = 0; k < dims.n_u; ++k)
    std::printf("user %d: obj_i=%.6g viol_i=%.3g obj_q=%.6g viol_q=%.3g\n", k,
                tp.solutions[k][0].objective, tp.solutions[k][0].max_violation,
                tp.solutions[k][1].objective, tp.solutions[k][1].max_violation);
  if (!all_ok) throw std::runtime_error("design: QP did not reach optimality");
  return 0;
}

int dispatch(const std::string& command, const json& inputs, const std::string& out_dir) {
  if (command == "ser-bound") return run_ser_bound(inputs, out_dir);
  if (command == "simulate") return run_simulate(inputs, out_dir);
  if (command == "design") return run_design(inputs, out_dir);
  throw UsageError("manifest: unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-crossing precoding toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // ser-bound
  auto* sb = app.add_subcommand("ser-bound", "semi-analytical SER/BER upper bound");
  int sb_mrx = 0;
  double sb_gamma = 0.0, sb_target = 0.0, sb_sigma2 = 1.0, sb_rolloff = 0.22;
  std::string sb_mode = "correlated", sb_grid, sb_out = ".";
  sb->add_option("--mrx", sb_mrx, "receive oversampling factor (2 or 3)")->required();
  auto* sb_og = sb->add_option("--gamma", sb_gamma, "threshold distance");
  auto* sb_ot = sb->add_option("--target-ser", sb_target, "target symbol error rate");
  sb->add_option("--sigma2", sb_sigma2, "noise variance per real dimension");
  sb->add_option("--sigma-mode", sb_mode, "correlated or white");
  sb->add_option("--rolloff-rx", sb_rolloff, "receive filter rolloff");
  sb->add_option("--gamma-grid", sb_grid, "also tabulate the bound on start:step:stop");
  sb->add_option("--out", sb_out, "output directory");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo link simulation");
  std::string sim_config, sim_out = ".", sim_mode = "correlated";
  std::string g_gamma, g_ser, g_ntx, g_n;
  int sim_mrx = 0, sim_mtx = 0, sim_ntx = 0, sim_nu = 0, sim_n = 0, sim_threads = 0;
  int sim_channels = 200;
  double sim_sigma2 = 0.0, sim_gamma = 0.0, sim_target = 0.0;
  double sim_rtx = 0.22, sim_rrx = 0.22;
  long sim_trials = 0, sim_stop = 0;
  std::uint64_t sim_seed = 0;
  bool sim_cdf = false, sim_redraw = false;
  sim->add_option("--config", sim_config, "JSON config file (flags override)");
  auto* o_mrx = sim->add_option("--mrx", sim_mrx, "receive oversampling factor");
  auto* o_mtx = sim->add_option("--mtx", sim_mtx, "transmit rate factor (default: mrx)");
  auto* o_ntx = sim->add_option("--ntx", sim_ntx, "transmit antennas");
  auto* o_nu = sim->add_option("--nu", sim_nu, "users");
  auto* o_n = sim->add_option("--n", sim_n, "symbols per frame");
  auto* o_s2 = sim->add_option("--sigma2", sim_sigma2, "noise variance per dimension");
  auto* o_g = sim->add_option("--gamma", sim_gamma, "threshold distance");
  auto* o_t = sim->add_option("--target-ser", sim_target, "target SER (resolves gamma)");
  auto* o_tr = sim->add_option("--trials", sim_trials, "frames per point");
  auto* o_st = sim->add_option("--stop-at-errors", sim_stop, "early stop per point");
  auto* o_sd = sim->add_option("--seed", sim_seed, "RNG seed");
  auto* o_md = sim->add_option("--sigma-mode", sim_mode, "correlated or white");
  auto* o_rtx = sim->add_option("--rolloff-tx", sim_rtx, "transmit rolloff");
  auto* o_rrx = sim->add_option("--rolloff-rx", sim_rrx, "receive rolloff");
  auto* o_th = sim->add_option("--threads", sim_threads, "worker threads (0: env)");
  auto* o_rd = sim->add_flag("--redraw-channel", sim_redraw, "new channel per trial");
  sim->add_option("--gamma-grid", g_gamma, "sweep gamma over start:step:stop");
  sim->add_option("--ser-grid", g_ser, "sweep target SER over a comma list");
  sim->add_option("--ntx-grid", g_ntx, "sweep antenna count");
  sim->add_option("--n-grid", g_n, "sweep frame length");
  sim->add_flag("--cdf", sim_cdf, "per-channel SER CDF instead of a sweep");
  sim->add_option("--channels", sim_channels, "channel draws for --cdf");
  sim->add_option("--out", sim_out, "output directory");

  // design
  auto* des = app.add_subcommand("design", "QoS precoder for one channel");
  std::string des_channel, des_inline, des_mode = "correlated", des_out = ".";
  int des_mrx = 3, des_mtx = 0, des_n = 1;
  double des_gamma = 0.0, des_target = 0.0, des_sigma2 = 1.0;
  double des_rtx = 0.22, des_rrx = 0.22;
  std::uint64_t des_seed = 1;
  des->add_option("--channel", des_channel, "channel CSV file, cells a+bi");
  des->add_option("--channel-inline", des_inline, "inline channel, rows ; separated");
  des->add_option("--mrx", des_mrx, "receive oversampling factor");
  auto* d_mtx = des->add_option("--mtx", des_mtx, "transmit rate factor (default: mrx)");
  des->add_option("--n", des_n, "symbols per frame");
  auto* d_g = des->add_option("--gamma", des_gamma, "threshold distance");
  auto* d_t = des->add_option("--target-ser", des_target, "target SER (resolves gamma)");
  des->add_option("--sigma2", des_sigma2, "noise variance per dimension");
  des->add_option("--sigma-mode", des_mode, "correlated or white");
  des->add_option("--rolloff-tx", des_rtx, "transmit rolloff");
  des->add_option("--rolloff-rx", des_rrx, "receive rolloff");
  des->add_option("--seed", des_seed, "payload bit seed");
  des->add_option("--out", des_out, "output directory");

  // replay
  auto* rep = app.add_subcommand("replay", "re-run a manifest bit-identically");
  std::string rep_manifest, rep_out = ".";
  rep->add_option("manifest", rep_manifest, "manifest.json path")->required();
  rep->add_option("--out", rep_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sb->parsed()) {
      if (sb_og->count() == sb_ot->count())
        throw UsageError("ser-bound: set exactly one of --gamma / --target-ser");
      if (sb_mrx != 2 && sb_mrx != 3) throw UsageError("ser-bound: --mrx must be 2 or 3");
      json in;
      in["m_rx"] = sb_mrx;
      if (sb_og->count())
        in["gamma"] = sb_gamma;
      else
        in["target_ser"] = sb_target;
      in["sigma2"] = sb_sigma2;
      in["sigma_mode"] = sb_mode;
      in["rolloff_rx"] = sb_rolloff;
      if (!sb_grid.empty()) in["grid"] = zxtool::parse_grid(sb_grid);
      return dispatch("ser-bound", in, sb_out);
    }

    if (sim->parsed()) {
      SimConfig cfg;
      if (!sim_config.empty()) {
        json j;
        try {
          j = json::parse(zxtool::read_text(sim_config));
        } catch (const json::exception& e) {
          throw UsageError(sim_config + ": " + e.what());
        }
        cfg = zxtool::config_from_json(j);
      }
      if (o_mrx->count()) {
        cfg.dims.m_rx = sim_mrx;
        if (!o_mtx->count()) cfg.dims.m_tx = sim_mrx;
      }
      if (o_mtx->count()) cfg.dims.m_tx = sim_mtx;
      if (o_ntx->count()) cfg.dims.n_tx = sim_ntx;
      if (o_nu->count()) cfg.dims.n_u = sim_nu;
      if (o_n->count()) cfg.dims.n_symbols = sim_n;
      if (o_s2->count()) cfg.sigma2 = sim_sigma2;
      if (o_g->count()) {
        cfg.gamma = sim_gamma;
        cfg.target_ser.reset();
      }
      if (o_t->count()) {
        cfg.target_ser = sim_target;
        cfg.gamma.reset();
      }
      if (o_tr->count()) cfg.trials = sim_trials;
      if (o_st->count()) cfg.stop_at_errors = sim_stop;
      if (o_sd->count()) cfg.seed = sim_seed;
      if (o_md->count()) cfg.sigma_mode = parse_mode(sim_mode);
      if (o_rtx->count()) cfg.rolloff_tx = sim_rtx;
      if (o_rrx->count()) cfg.rolloff_rx = sim_rrx;
      if (o_th->count()) cfg.threads = sim_threads;
      if (o_rd->count()) cfg.redraw_channel = sim_redraw;

      int grids = (!g_gamma.empty()) + (!g_ser.empty()) + (!g_ntx.empty()) + (!g_n.empty());
      if (grids > 1) throw UsageError("simulate: at most one sweep grid");
      if (sim_cdf && grids > 0) throw UsageError("simulate: --cdf excludes sweep grids");

      json in;
      if (sim_cdf) {
        in["mode"] = "cdf";
        if (sim_channels < 1) throw UsageError("simulate: --channels must be >= 1");
        in["channels"] = sim_channels;
      } else {
        in["mode"] = "sweep";
        if (!g_gamma.empty()) {
          in["axis"] = "gamma";
          in["values"] = zxtool::parse_grid(g_gamma);
        } else if (!g_ser.empty()) {
          in["axis"] = "target_ser";
          in["values"] = zxtool::parse_grid(g_ser);
        } else if (!g_ntx.empty()) {
          in["axis"] = "n_tx";
          in["values"] = zxtool::parse_grid(g_ntx);
        } else if (!g_n.empty()) {
          in["axis"] = "n_symbols";
          in["values"] = zxtool::parse_grid(g_n);
        } else if (cfg.gamma) {
          in["axis"] = "gamma";
          in["values"] = std::vector<double>{*cfg.gamma};
        } else if (cfg.target_ser) {
          in["axis"] = "target_ser";
          in["values"] = std::vector<double>{*cfg.target_ser};
        } else {
          throw UsageError("simulate: set --gamma, --target-ser or a sweep grid");
        }
      }
      in["config"] = zxtool::config_to_json(cfg);
      return dispatch("simulate", in, sim_out);
    }

    if (des->parsed()) {
      if (des_channel.empty() == des_inline.empty())
        throw UsageError("design: set exactly one of --channel / --channel-inline");
      if (d_g->count() == d_t->count())
        throw UsageError("design: set exactly one of --gamma / --target-ser");
      Eigen::MatrixXcd h;
      if (!des_channel.empty()) {
        h = zxtool::parse_complex_matrix(zxtool::read_text(des_channel), des_channel);
      } else {
        std::string text = des_inline;
        for (char& c : text)
          if (c == ';') c = '\n';
        h = zxtool::parse_complex_matrix(text, "--channel-inline");
      }
      json in;
      in["channel"] = zxtool::channel_to_json(h);
      in["n_symbols"] = des_n;
      in["m_rx"] = des_mrx;
      in["m_tx"] = d_mtx->count() ? des_mtx : des_mrx;
      if (d_g->count())
        in["gamma"] = des_gamma;
      else
        in["target_ser"] = des_target;
      in["sigma2"] = des_sigma2;
      in["sigma_mode"] = des_mode;
      in["rolloff_tx"] = des_rtx;
      in["rolloff_rx"] = des_rrx;
      in["seed"] = des_seed;
      return dispatch("design", in, des_out);
    }

    // replay
    json m;
    try {
      m = json::parse(zxtool::read_text(rep_manifest));
    } catch (const json::exception& e) {
      throw UsageError(rep_manifest + ": " + e.what());
    }
    if (!m.contains("command") || !m.contains("inputs"))
      throw UsageError(rep_manifest + ": not a zxprec manifest");
    return dispatch(m.at("command").get<std::string>(), m.at("inputs"), rep_out);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
