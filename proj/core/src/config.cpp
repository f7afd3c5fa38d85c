#include "gridbus/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "gridbus/errors.hpp"
#include "gridbus/units.hpp"

namespace gridbus {

namespace {

enum class FieldKind { f64, i64, boolean, str, f64_list, pair_list };

struct FieldSpec {
  const char* section;
  const char* key;
  FieldKind kind;
  const char* def;  // default as written in the schema
  const char* doc;
};

// One table drives parsing, validation, and the shipped schema file.
constexpr FieldSpec kSchema[] = {
    {"device", "mass_ratio", FieldKind::f64, "0.012",
     "effective mass over the electron mass"},
    {"device", "omega_h_GHz", FieldKind::f64, "28.0",
     "orbital confinement frequency, ordinary GHz"},
    {"device", "omega_r_GHz", FieldKind::f64, "13.35",
     "bare resonator frequency, ordinary GHz"},
    {"device", "width_um", FieldKind::f64, "0.5",
     "field-plate separation W, micrometers"},
    {"device", "length_mm", FieldKind::f64, "10.0",
     "resonator length l, millimeters"},
    {"device", "cap_nF_per_m", FieldKind::f64, "0.127",
     "distributed capacitance c, nF/m"},
    {"device", "g_factor", FieldKind::f64, "5.5", "qubit g-factor"},
    {"device", "B_perp_mT", FieldKind::f64, "194.0",
     "out-of-axis magnetic field, mT"},
    {"device", "C_c_fF", FieldKind::f64, "14.0",
     "inter-resonator coupling capacitance, fF"},
    {"device", "soi_coeff_e_nm2", FieldKind::f64, "10.0",
     "spin-orbit coefficient alpha/E_z, e*nm^2"},
    {"device", "J_sim_GHz", FieldKind::f64, "0.159",
     "hopping used in simulations, ordinary GHz"},

    {"simulation", "rows", FieldKind::i64, "2", "lattice rows"},
    {"simulation", "cols", FieldKind::i64, "2", "lattice columns"},
    {"simulation", "d_ph", FieldKind::i64, "3",
     "photon levels per resonator"},
    {"simulation", "kappa_kHz", FieldKind::f64, "10.0",
     "resonator loss rate kappa/2pi, ordinary kHz"},
    {"simulation", "gamma_kHz", FieldKind::f64, "10.0",
     "qubit relaxation rate gamma/2pi, ordinary kHz"},
    {"simulation", "rtol", FieldKind::f64, "1e-8",
     "integrator relative tolerance"},
    {"simulation", "atol", FieldKind::f64, "1e-10",
     "integrator absolute tolerance"},
    {"simulation", "frame", FieldKind::str, "rotating",
     "integration frame: rotating | lab"},
    {"simulation", "reduce_spectators", FieldKind::boolean, "true",
     "drop decoupled ground-state qubits (exact)"},

    {"experiment", "mode", FieldKind::str, "params",
     "params | params_sweep | coupling | gate_rx | gate_iswap | schedule"},
    {"experiment", "E_z_V_um", FieldKind::f64, "1.0",
     "tuning field, V/um"},
    {"experiment", "E_z_min_V_um", FieldKind::f64, "0.0",
     "sweep start, V/um"},
    {"experiment", "E_z_max_V_um", FieldKind::f64, "1.0",
     "sweep end, V/um"},
    {"experiment", "E_z_points", FieldKind::i64, "11", "sweep length"},
    {"experiment", "angle_over_pi", FieldKind::f64, "1.0",
     "rotation angle in units of pi"},
    {"experiment", "T_ns", FieldKind::f64_list, "",
     "gate duration grid, ns, comma separated"},
    {"experiment", "coupling_N", FieldKind::i64, "8",
     "coupling-sweep lattice rows"},
    {"experiment", "coupling_M", FieldKind::i64, "8",
     "coupling-sweep lattice columns"},
    {"experiment", "J_over_Delta", FieldKind::f64_list, "",
     "coupling-sweep hopping ratios, comma separated"},
    {"experiment", "separations", FieldKind::pair_list, "",
     "coupling-sweep site offsets, dn:dm pairs, comma separated"},
    {"experiment", "schedule_rows", FieldKind::i64, "4",
     "code lattice rows"},
    {"experiment", "schedule_cols", FieldKind::i64, "4",
     "code lattice columns"},
    {"experiment", "fold_level", FieldKind::i64, "0", "folding level f"},
    {"experiment", "site", FieldKind::i64, "0",
     "target site (flat row-major index)"},
    {"experiment", "site_b", FieldKind::i64, "1", "pair partner site"},

    {"output", "dir", FieldKind::str, ".", "output directory"},
    {"output", "format", FieldKind::str, "csv", "csv | json"},
};

struct RawEntry {
  std::string section, key, value;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<RawEntry> parse_ini(const std::string& text,
                                const std::string& source) {
  std::vector<RawEntry> out;
  std::istringstream is(text);
  std::string line, section;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError(source + ":" + std::to_string(ln) +
                          ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw ConfigError(source + ":" + std::to_string(ln) +
                          ": empty section name");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(ln) +
                        ": expected key = value");
    RawEntry e;
    e.section = section;
    e.key = trim(t.substr(0, eq));
    e.value = trim(t.substr(eq + 1));
    e.line = ln;
    if (e.key.empty())
      throw ConfigError(source + ":" + std::to_string(ln) + ": empty key");
    if (e.section.empty())
      throw ConfigError(source + ":" + std::to_string(ln) +
                        ": key before any [section]");
    out.push_back(std::move(e));
  }
  return out;
}

double parse_f64(const RawEntry& e, const std::string& source) {
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (end == e.value.c_str() || *end != '\0' || !std::isfinite(v))
    throw ConfigError(source + ":" + std::to_string(e.line) + ": " +
                      e.key + " is not a number: '" + e.value + "'");
  return v;
}

long long parse_i64(const RawEntry& e, const std::string& source) {
  char* end = nullptr;
  const long long v = std::strtoll(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || *end != '\0')
    throw ConfigError(source + ":" + std::to_string(e.line) + ": " +
                      e.key + " is not an integer: '" + e.value + "'");
  return v;
}

bool parse_bool(const RawEntry& e, const std::string& source) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ConfigError(source + ":" + std::to_string(e.line) + ": " + e.key +
                    " must be true or false");
}

std::vector<std::string> split_csv(const std::string& v) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(v);
  while (std::getline(is, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) parts.push_back(cur);
  }
  return parts;
}

std::vector<double> parse_f64_list(const RawEntry& e,
                                   const std::string& source) {
  std::vector<double> out;
  for (const std::string& p : split_csv(e.value)) {
    RawEntry sub = e;
    sub.value = p;
    out.push_back(parse_f64(sub, source));
  }
  return out;
}

std::vector<std::pair<int, int>> parse_pair_list(const RawEntry& e,
                                                 const std::string& source) {
  std::vector<std::pair<int, int>> out;
  for (const std::string& p : split_csv(e.value)) {
    const auto colon = p.find(':');
    if (colon == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(e.line) + ": " +
                        e.key + " entries must be dn:dm, got '" + p + "'");
    RawEntry a = e, b = e;
    a.value = trim(p.substr(0, colon));
    b.value = trim(p.substr(colon + 1));
    out.emplace_back(static_cast<int>(parse_i64(a, source)),
                     static_cast<int>(parse_i64(b, source)));
  }
  return out;
}

const FieldSpec* find_field(const std::string& section,
                            const std::string& key) {
  for (const FieldSpec& f : kSchema)
    if (section == f.section && key == f.key) return &f;
  return nullptr;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.device = DeviceParams::baseline();
  c.kappa = units::twopi * 10e3 * 1e-9;  // 10 kHz in 1/ns
  c.gamma = c.kappa;
  c.config_hash = "0000000000000000";
  return c;
}

ExperimentConfig parse_config(const std::string& text,
                              const std::string& source) {
  ExperimentConfig c = default_config();
  c.source = source;
  {
    std::ostringstream hex;
    hex << std::hex;
    hex.width(16);
    hex.fill('0');
    hex << fnv1a64(text);
    c.config_hash = hex.str();
  }

  std::set<std::pair<std::string, std::string>> seen;
  for (const RawEntry& e : parse_ini(text, source)) {
    const FieldSpec* f = find_field(e.section, e.key);
    if (f == nullptr)
      throw ConfigError(source + ":" + std::to_string(e.line) +
                        ": unknown key [" + e.section + "] " + e.key);
    if (!seen.insert({e.section, e.key}).second)
      throw ConfigError(source + ":" + std::to_string(e.line) +
                        ": duplicate key [" + e.section + "] " + e.key);

    const std::string& k = e.key;
    if (e.section == "device") {
      const double v = parse_f64(e, source);
      if (k == "mass_ratio") c.device.mass_ratio = v;
      else if (k == "omega_h_GHz") c.device.omega_h = units::twopi * v;
      else if (k == "omega_r_GHz") c.device.omega_r = units::twopi * v;
      else if (k == "width_um") c.device.width_m = v * 1e-6;
      else if (k == "length_mm") c.device.length_m = v * 1e-3;
      else if (k == "cap_nF_per_m") c.device.cap_per_len = v * 1e-9;
      else if (k == "g_factor") c.device.g_factor = v;
      else if (k == "B_perp_mT") c.device.B_perp_T = v * 1e-3;
      else if (k == "C_c_fF") c.device.C_c = v * 1e-15;
      else if (k == "soi_coeff_e_nm2") c.device.soi_coeff_e_nm2 = v;
      else if (k == "J_sim_GHz") c.device.J_sim = units::twopi * v;
    } else if (e.section == "simulation") {
      if (k == "rows") c.rows = static_cast<int>(parse_i64(e, source));
      else if (k == "cols") c.cols = static_cast<int>(parse_i64(e, source));
      else if (k == "d_ph") c.d_ph = static_cast<int>(parse_i64(e, source));
      else if (k == "kappa_kHz")
        c.kappa = units::twopi * parse_f64(e, source) * 1e3 * 1e-9;
      else if (k == "gamma_kHz")
        c.gamma = units::twopi * parse_f64(e, source) * 1e3 * 1e-9;
      else if (k == "rtol") c.rtol = parse_f64(e, source);
      else if (k == "atol") c.atol = parse_f64(e, source);
      else if (k == "frame") {
        if (e.value == "rotating") c.frame = Frame::rotating;
        else if (e.value == "lab") c.frame = Frame::lab;
        else
          throw ConfigError(source + ":" + std::to_string(e.line) +
                            ": frame must be rotating or lab");
      } else if (k == "reduce_spectators")
        c.reduce_spectators = parse_bool(e, source);
    } else if (e.section == "experiment") {
      if (k == "mode") c.mode = e.value;
      else if (k == "E_z_V_um") c.E_z = parse_f64(e, source);
      else if (k == "E_z_min_V_um") c.E_z_min = parse_f64(e, source);
      else if (k == "E_z_max_V_um") c.E_z_max = parse_f64(e, source);
      else if (k == "E_z_points")
        c.E_z_points = static_cast<int>(parse_i64(e, source));
      else if (k == "angle_over_pi") c.angle_over_pi = parse_f64(e, source);
      else if (k == "T_ns") c.T_ns = parse_f64_list(e, source);
      else if (k == "coupling_N")
        c.coupling_N = static_cast<int>(parse_i64(e, source));
      else if (k == "coupling_M")
        c.coupling_M = static_cast<int>(parse_i64(e, source));
      else if (k == "J_over_Delta") c.J_over_Delta = parse_f64_list(e, source);
      else if (k == "separations") c.separations = parse_pair_list(e, source);
      else if (k == "schedule_rows")
        c.schedule_rows = static_cast<int>(parse_i64(e, source));
      else if (k == "schedule_cols")
        c.schedule_cols = static_cast<int>(parse_i64(e, source));
      else if (k == "fold_level")
        c.fold_level = static_cast<int>(parse_i64(e, source));
      else if (k == "site") c.site = static_cast<int>(parse_i64(e, source));
      else if (k == "site_b")
        c.site_b = static_cast<int>(parse_i64(e, source));
    } else if (e.section == "output") {
      if (k == "dir") c.out_dir = e.value;
      else if (k == "format") {
        if (e.value != "csv" && e.value != "json")
          throw ConfigError(source + ":" + std::to_string(e.line) +
                            ": format must be csv or json");
        c.format = e.value;
      }
    }
  }

  static const std::set<std::string> kModes = {
      "params", "params_sweep", "coupling",
      "gate_rx", "gate_iswap", "schedule"};
  if (kModes.find(c.mode) == kModes.end())
    throw ConfigError(source + ": unknown experiment mode '" + c.mode + "'");
  if (c.rows < 1 || c.cols < 1 || c.d_ph < 2)
    throw ConfigError(source + ": lattice needs rows, cols >= 1, d_ph >= 2");
  if (c.E_z_points < 1)
    throw ConfigError(source + ": E_z_points must be >= 1");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string config_schema_text() {
  std::ostringstream os;
  os << "# Configuration schema. Keys carry their unit in the name;\n"
     << "# frequencies are ordinary (divide angular by 2pi). Unknown or\n"
     << "# duplicate keys are rejected. Lists are comma separated; site\n"
     << "# offsets are dn:dm pairs.\n";
  std::string section;
  for (const FieldSpec& f : kSchema) {
    if (section != f.section) {
      section = f.section;
      os << "\n[" << section << "]\n";
    }
    os << f.key << " = " << f.def;
    for (std::size_t n = std::string(f.key).size() +
                         std::string(f.def).size();
         n < 34; ++n)
      os << ' ';
    os << "  # " << f.doc << "\n";
  }
  return os.str();
}

}  // namespace gridbus
