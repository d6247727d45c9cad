// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "zxprec/simulator.hpp"

namespace zxtool {

// Config or argument problems exit with code 2; anything thrown later (solver
// failures, out-of-range targets) exits with 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed %.9g formatting keeps result files byte-identical across replays.
std::string fmt9(double v);

std::string iso_utc_now();

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& body);

// "a:s:b" inclusive range or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec);

// Complex matrix in "a+bi" cells, one row per line, commas between columns.
// origin names the input in parse errors ("file.csv" or "--channel-inline").
Eigen::MatrixXcd parse_complex_matrix(const std::string& text, const std::string& origin);

nlohmann::json config_to_json(const zxprec::SimConfig& cfg);
zxprec::SimConfig config_from_json(const nlohmann::json& j);

nlohmann::json channel_to_json(const Eigen::MatrixXcd& h);
Eigen::MatrixXcd channel_from_json(const nlohmann::json& j);

void write_manifest(const std::string& out_dir, const std::string& command,
                    const nlohmann::json& inputs, const std::vector<std::string>& outputs);

}  // namespace zxtool
