// Command-line front end: params | coupling | gate | schedule.
// Exit codes: 0 success, 1 config error, 2 validation failure,
// 3 numerical failure.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridbus/config.hpp"
#include "gridbus/coupling.hpp"
#include "gridbus/device.hpp"
#include "gridbus/errors.hpp"
#include "gridbus/gates.hpp"
#include "gridbus/output.hpp"
#include "gridbus/schedule.hpp"
#include "gridbus/units.hpp"

namespace {

using namespace gridbus;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

GateOptions gate_options(const ExperimentConfig& cfg) {
  GateOptions opt;
  opt.rows = cfg.rows;
  opt.cols = cfg.cols;
  opt.d_ph = cfg.d_ph;
  opt.site = cfg.site;
  opt.site_b = cfg.site_b;
  opt.kappa = cfg.kappa;
  opt.gamma = cfg.gamma;
  opt.reduce_spectators = cfg.reduce_spectators;
  opt.frame = cfg.frame;
  opt.integ.rtol = cfg.rtol;
  opt.integ.atol = cfg.atol;
  return opt;
}

int cmd_params(const ExperimentConfig& cfg) {
  const Provenance prov = make_provenance(cfg.config_hash);
  const ResonatorCoupling rc = resonator_coupling_J(cfg.device);

  if (cfg.mode == "params_sweep") {
    const std::vector<double> grid =
        linspace(cfg.E_z_min, cfg.E_z_max, cfg.E_z_points);
    const double twopi = units::twopi;
    std::vector<std::vector<double>> rows;
    for (double ez : grid) {
      const EffectiveQubitParams q = effective_qubit_params(cfg.device, ez);
      rows.push_back({ez, q.x_zpf_nm, q.l_so_nm, q.beta / twopi,
                      q.omega_Z / twopi, q.omega_Z_prime / twopi,
                      q.nu / twopi * 1e3, q.delta / twopi,
                      q.chi / twopi * 1e3});
    }
    const std::string path = out_path(cfg, "params_sweep.csv");
    write_text_file(
        path, csv_table(prov,
                        {"E_z_V_um", "x_zpf_nm", "l_so_nm", "beta_GHz",
                         "omega_Z_GHz", "omega_Z_prime_GHz", "nu_MHz",
                         "delta_GHz", "chi_MHz"},
                        rows));
    std::cout << "wrote " << path << " (" << rows.size() << " rows)\n";
    return 0;
  }

  const EffectiveQubitParams q = effective_qubit_params(cfg.device, cfg.E_z);
  const std::string text = params_report_text(prov, cfg.device, q, rc);
  std::cout << text;
  const std::string jpath = out_path(cfg, "params.json");
  write_text_file(jpath, params_report_json(prov, cfg.device, q, rc));
  const std::string tpath = out_path(cfg, "params.txt");
  write_text_file(tpath, text);
  std::cout << "wrote " << jpath << "\nwrote " << tpath << "\n";
  return 0;
}

int cmd_coupling(const ExperimentConfig& cfg) {
  const Provenance prov = make_provenance(cfg.config_hash);
  std::vector<double> ratios = cfg.J_over_Delta;
  if (ratios.empty()) ratios = {0.1, 0.2};
  std::vector<std::pair<int, int>> seps = cfg.separations;
  if (seps.empty()) seps = {{0, 1}, {1, 1}, {2, 0}};

  std::vector<std::vector<double>> rows;
  const double nan = std::nan("");
  for (double r : ratios)
    for (const auto& [dn, dm] : seps) {
      CouplingQuery q;
      q.N = cfg.coupling_N;
      q.M = cfg.coupling_M;
      q.delta = 1.0;  // K reported in units of nu^2/delta
      q.nu = 1.0;
      q.J = r;
      q.dn = dn;
      q.dm = dm;
      double k_exact = nan, k_series = nan, k_leading = nan;
      try {
        k_exact = coupling_exact_fourier(q).K;
      } catch (const NumericError&) {
        // resonant mode on this finite lattice; row kept, value nan
      }
      try {
        k_series = coupling_parity_series(q, 5).K;
      } catch (const NumericError&) {
      }
      k_leading = coupling_leading_order(q).K;
      const double re_s = std::abs(k_series / k_exact - 1.0);
      const double re_l = std::abs(k_leading / k_exact - 1.0);
      rows.push_back({static_cast<double>(q.N), static_cast<double>(q.M), r,
                      static_cast<double>(dn), static_cast<double>(dm),
                      k_exact, k_series, k_leading, re_s, re_l});
    }
  const std::string path = out_path(cfg, "coupling_sweep.csv");
  write_text_file(
      path, csv_table(prov,
                      {"N", "M", "J_over_Delta", "dn", "dm", "K_exact",
                       "K_series", "K_leading", "rel_err_series",
                       "rel_err_leading"},
                      rows));
  std::cout << "wrote " << path << " (" << rows.size() << " rows)\n";
  return 0;
}

int cmd_gate(const ExperimentConfig& cfg) {
  const Provenance prov = make_provenance(cfg.config_hash);
  const GateOptions opt = gate_options(cfg);

  if (cfg.mode == "gate_iswap") {
    const std::vector<double> grid =
        linspace(cfg.E_z_min, cfg.E_z_max, cfg.E_z_points);
    const std::vector<GateSweepRow> rows =
        iswap_field_sweep(cfg.device, grid, opt);
    const std::string cpath = out_path(cfg, "gate_iswap.csv");
    write_text_file(cpath, gate_sweep_csv(prov, rows));
    SvgSeries f_av{"F_av", {}, {}}, f_b{"decay bound", {}, {}};
    for (const GateSweepRow& r : rows) {
      f_av.x.push_back(r.sweep_var);
      f_av.y.push_back(r.F_av);
      f_b.x.push_back(r.sweep_var);
      f_b.y.push_back(r.F_bound);
    }
    const std::string spath = out_path(cfg, "gate_iswap.svg");
    write_text_file(spath,
                    svg_line_plot(prov, "two-qubit gate fidelity",
                                  "E_z (V/um)", "average fidelity",
                                  {f_av, f_b}));
    std::cout << "wrote " << cpath << "\nwrote " << spath << "\n";
    return 0;
  }

  std::vector<double> Ts = cfg.T_ns;
  if (Ts.empty()) Ts = {20, 35, 50, 70, 100, 140, 200, 280, 400};
  const std::vector<GateSweepRow> rows =
      rx_duration_sweep(cfg.device, cfg.E_z, Ts, opt);
  const std::string cpath = out_path(cfg, "gate_rx.csv");
  write_text_file(cpath, gate_sweep_csv(prov, rows));
  SvgSeries f_av{"F_av", {}, {}}, f_b{"dephasing bound", {}, {}};
  double peak = 0.0, peak_T = 0.0;
  for (const GateSweepRow& r : rows) {
    f_av.x.push_back(r.T_ns);
    f_av.y.push_back(r.F_av);
    f_b.x.push_back(r.T_ns);
    f_b.y.push_back(r.F_bound);
    if (r.F_av > peak) {
      peak = r.F_av;
      peak_T = r.T_ns;
    }
  }
  const std::string spath = out_path(cfg, "gate_rx.svg");
  write_text_file(spath, svg_line_plot(prov, "single-qubit gate fidelity",
                                       "T (ns)", "average fidelity",
                                       {f_av, f_b}));
  std::cout << "peak F_av = " << peak << " at T = " << peak_T << " ns\n";
  std::cout << "wrote " << cpath << "\nwrote " << spath << "\n";
  return 0;
}

int cmd_schedule(const ExperimentConfig& cfg) {
  const Provenance prov = make_provenance(cfg.config_hash);
  const CodeLayout layout =
      build_layout(cfg.schedule_rows, cfg.schedule_cols);
  const SyndromeCycle cycle = build_syndrome_cycle(layout);
  const ValidationReport report = validate_cycle(layout, cycle);
  const FoldedLayout folded = fold_layout(layout, cfg.fold_level);

  const std::string jpath = out_path(cfg, "schedule.json");
  write_text_file(jpath,
                  schedule_json(prov, layout, cycle, report, &folded));
  std::cout << render_cycle_text(layout, cycle);
  std::cout << "fold f=" << folded.f << ": multiplicity "
            << folded.multiplicity << ", depth multiplier "
            << folded.depth_multiplier << ", total rounds "
            << folded.serialization_factor << "\n";
  std::cout << "wrote " << jpath << "\n";
  if (!report.ok()) {
    for (const Violation& v : report.violations)
      std::cerr << "violation [" << to_string(v.kind) << "] step "
                << v.step << ": " << v.detail << "\n";
    return 2;
  }
  std::cout << "cycle valid: 0 violations\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grid-bus surface-code simulation toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format, frame;
  int threads = 1, truncation = 0;
  long long seed = 0;
  app.add_option("--config", config_path, "configuration file (INI)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "worker threads for dense algebra");
  app.add_option("--truncation", truncation,
                 "photon levels per resonator (overrides d_ph)");
  app.add_option("--frame", frame, "integration frame")
      ->check(CLI::IsMember({"lab", "rotating"}));
  app.add_option("--seed", seed,
                 "accepted for workflow compatibility; all computations "
                 "are deterministic");

  CLI::App* sub_params =
      app.add_subcommand("params", "derived device parameters");
  CLI::App* sub_coupling =
      app.add_subcommand("coupling", "mediated-coupling method comparison");
  CLI::App* sub_gate = app.add_subcommand("gate", "gate fidelity sweeps");
  CLI::App* sub_schedule =
      app.add_subcommand("schedule", "syndrome cycle and folding");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig cfg =
        config_path.empty() ? default_config() : load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format.empty()) cfg.format = format;
    if (truncation > 0) cfg.d_ph = truncation;
    if (frame == "lab") cfg.frame = Frame::lab;
    if (frame == "rotating") cfg.frame = Frame::rotating;
    if (threads > 0) Eigen::setNbThreads(threads);

    if (sub_params->parsed()) {
      if (cfg.mode != "params" && cfg.mode != "params_sweep")
        cfg.mode = "params";
      return cmd_params(cfg);
    }
    if (sub_coupling->parsed()) return cmd_coupling(cfg);
    if (sub_gate->parsed()) {
      if (cfg.mode != "gate_rx" && cfg.mode != "gate_iswap")
        cfg.mode = "gate_rx";
      return cmd_gate(cfg);
    }
    if (sub_schedule->parsed()) return cmd_schedule(cfg);
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
