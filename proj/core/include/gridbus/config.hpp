#pragma once

// INI configuration: [section] headers, key = value lines, '#'/';'
// comments. Every key carries its unit in the name (GHz, mT, fF, nm,
// V/um); values are converted to internal units (angular rad/ns, ns,
// SI geometry) on ingestion. The full schema lives in
// configs/schema.ini, generated from the same table the parser
// validates against; unknown keys and malformed values are errors.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridbus/device.hpp"
#include "gridbus/lindblad.hpp"

namespace gridbus {

struct ExperimentConfig {
  // [device], defaults DeviceParams::baseline()
  DeviceParams device;

  // [simulation]
  int rows = 2, cols = 2;
  int d_ph = 3;
  double kappa = 0.0;  // 1/ns
  double gamma = 0.0;  // 1/ns
  double rtol = 1e-8, atol = 1e-10;
  Frame frame = Frame::rotating;
  bool reduce_spectators = true;

  // [experiment]
  std::string mode = "params";  // params | params_sweep | coupling |
                                // gate_rx | gate_iswap | schedule
  double E_z = 1.0;             // V/um
  double E_z_min = 0.0, E_z_max = 1.0;
  int E_z_points = 11;
  double angle_over_pi = 1.0;
  std::vector<double> T_ns;  // gate_rx sweep grid
  int coupling_N = 8, coupling_M = 8;
  std::vector<double> J_over_Delta;
  std::vector<std::pair<int, int>> separations;  // (dn, dm) rows
  int schedule_rows = 4, schedule_cols = 4;
  int fold_level = 0;
  int site = 0, site_b = 1;

  // [output]
  std::string out_dir = ".";
  std::string format = "csv";  // csv | json

  // provenance
  std::string config_hash;  // fnv1a64 of the raw file text, hex
  std::string source = "<defaults>";
};

// 64-bit FNV-1a over the raw bytes.
std::uint64_t fnv1a64(std::string_view bytes);

ExperimentConfig default_config();
ExperimentConfig parse_config(const std::string& text,
                              const std::string& source);
ExperimentConfig load_config(const std::string& path);

// Canonical schema document; configs/schema.ini must match verbatim.
std::string config_schema_text();

}  // namespace gridbus
