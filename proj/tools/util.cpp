// SPDX-License-Identifier: Apache-2.0
#include "util.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zxprec/version.hpp"

using nlohmann::json;
using zxprec::SigmaMode;
using zxprec::SimConfig;

namespace zxtool {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string iso_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& body) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> vals;
  try {
    if (spec.find(':') != std::string::npos) {
      size_t c1 = spec.find(':');
      size_t c2 = spec.find(':', c1 + 1);
      if (c2 == std::string::npos) throw UsageError("");
      double a = std::stod(spec.substr(0, c1));
      double s = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
      double b = std::stod(spec.substr(c2 + 1));
      if (!(s > 0.0) || b < a) throw UsageError("");
      for (double v = a; v <= b + 1e-9 * std::max(1.0, std::abs(b)); v += s)
        vals.push_back(v);
    } else {
      std::stringstream ss(spec);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        size_t used = 0;
        double v = std::stod(tok, &used);
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
          ++used;
        if (used != tok.size()) throw UsageError("");
        vals.push_back(v);
      }
    }
  } catch (const std::exception&) {
    throw UsageError("bad grid '" + spec + "': want start:step:stop or v1,v2,...");
  }
  if (vals.empty()) throw UsageError("bad grid '" + spec + "': empty");
  return vals;
}

namespace {

// One "a+bi" cell; also accepts plain reals, pure imaginaries and 'j'.
std::complex<double> parse_complex_cell(const std::string& cell, const std::string& where) {
  std::string s;
  for (char c : cell)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw UsageError(where + ": empty cell");
  auto fail = [&]() -> std::complex<double> {
    throw UsageError(where + ": cannot parse '" + cell + "' as a+bi");
  };
  double re = 0.0, im = 0.0;
  size_t pos = 0;
  auto read_num = [&](double& out) -> bool {
    size_t used = 0;
    try {
      out = std::stod(s.substr(pos), &used);
    } catch (const std::exception&) {
      return false;
    }
    pos += used;
    return used > 0;
  };
  double first = 0.0;
  if (!read_num(first)) return fail();
  if (pos == s.size()) {
    re = first;
  } else if (s[pos] == 'i' || s[pos] == 'j') {
    im = first;
    ++pos;
  } else {
    re = first;
    double second = 0.0;
    if (!read_num(second)) return fail();
    if (pos >= s.size() || (s[pos] != 'i' && s[pos] != 'j')) return fail();
    im = second;
    ++pos;
  }
  if (pos != s.size()) return fail();
  return {re, im};
}

}  // namespace

Eigen::MatrixXcd parse_complex_matrix(const std::string& text, const std::string& origin) {
  std::vector<std::vector<std::complex<double>>> rows;
  std::stringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    std::vector<std::complex<double>> row;
    std::stringstream cells(line);
    std::string cell;
    int col = 0;
    while (std::getline(cells, cell, ',')) {
      ++col;
      std::string where =
          origin + " row " + std::to_string(lineno) + " col " + std::to_string(col);
      row.push_back(parse_complex_cell(cell, where));
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw UsageError(origin + " row " + std::to_string(lineno) + ": expected " +
                       std::to_string(rows.front().size()) + " columns, got " +
                       std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw UsageError(origin + ": no channel entries");
  Eigen::MatrixXcd h(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows.front().size(); ++c)
      h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return h;
}

json config_to_json(const SimConfig& cfg) {
  json j;
  j["n_symbols"] = cfg.dims.n_symbols;
  j["m_rx"] = cfg.dims.m_rx;
  j["m_tx"] = cfg.dims.m_tx;
  j["n_tx"] = cfg.dims.n_tx;
  j["n_u"] = cfg.dims.n_u;
  j["rolloff_tx"] = cfg.rolloff_tx;
  j["rolloff_rx"] = cfg.rolloff_rx;
  j["sigma2"] = cfg.sigma2;
  if (cfg.gamma) j["gamma"] = *cfg.gamma;
  if (cfg.target_ser) j["target_ser"] = *cfg.target_ser;
  j["trials"] = cfg.trials;
  if (cfg.stop_at_errors) j["stop_at_errors"] = *cfg.stop_at_errors;
  j["seed"] = cfg.seed;
  j["sigma_mode"] = cfg.sigma_mode == SigmaMode::White ? "white" : "correlated";
  j["redraw_channel"] = cfg.redraw_channel;
  j["rho0"] = cfg.rho0;
  j["threads"] = cfg.threads;
  return j;
}

SimConfig config_from_json(const json& j) {
  if (!j.is_object()) throw UsageError("config: expected a JSON object");
  SimConfig cfg;
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    const json& v = item.value();
    try {
      if (k == "n_symbols")
        cfg.dims.n_symbols = v.get<int>();
      else if (k == "m_rx")
        cfg.dims.m_rx = v.get<int>();
      else if (k == "m_tx")
        cfg.dims.m_tx = v.get<int>();
      else if (k == "n_tx")
        cfg.dims.n_tx = v.get<int>();
      else if (k == "n_u")
        cfg.dims.n_u = v.get<int>();
      else if (k == "rolloff_tx")
        cfg.rolloff_tx = v.get<double>();
      else if (k == "rolloff_rx")
        cfg.rolloff_rx = v.get<double>();
      else if (k == "sigma2")
        cfg.sigma2 = v.get<double>();
      else if (k == "gamma")
        cfg.gamma = v.get<double>();
      else if (k == "target_ser")
        cfg.target_ser = v.get<double>();
      else if (k == "trials")
        cfg.trials = v.get<long>();
      else if (k == "stop_at_errors")
        cfg.stop_at_errors = v.get<long>();
      else if (k == "seed")
        cfg.seed = v.get<std::uint64_t>();
      else if (k == "sigma_mode") {
        std::string s = v.get<std::string>();
        if (s == "correlated")
          cfg.sigma_mode = SigmaMode::Correlated;
        else if (s == "white")
          cfg.sigma_mode = SigmaMode::White;
        else
          throw UsageError("config field 'sigma_mode': want correlated or white");
      } else if (k == "redraw_channel")
        cfg.redraw_channel = v.get<bool>();
      else if (k == "rho0") {
        cfg.rho0 = v.get<int>();
        if (cfg.rho0 != 1 && cfg.rho0 != -1)
          throw UsageError("config field 'rho0': want +1 or -1");
      } else if (k == "threads")
        cfg.threads = v.get<int>();
      else
        throw UsageError("config: unknown field '" + k + "'");
    } catch (const json::exception& e) {
      throw UsageError("config field '" + k + "': " + e.what());
    }
  }
  return cfg;
}

json channel_to_json(const Eigen::MatrixXcd& h) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      row.push_back({h(r, c).real(), h(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd channel_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw UsageError("manifest channel: expected an array of rows");
  Eigen::MatrixXcd h(j.size(), j[0].size());
  for (size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j[0].size()) throw UsageError("manifest channel: ragged rows");
    for (size_t c = 0; c < j[r].size(); ++c)
      h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = {
          j[r][c].at(0).get<double>(), j[r][c].at(1).get<double>()};
  }
  return h;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& inputs, const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = "zxprec";
  m["version"] = zxprec::kVersion;
  m["command"] = command;
  m["created_utc"] = iso_utc_now();
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  write_text(out_dir + "/manifest.json", m.dump(2) + "\n");
}

}  // namespace zxtool
