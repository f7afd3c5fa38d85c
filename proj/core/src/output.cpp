#include "gridbus/output.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gridbus/errors.hpp"
#include "gridbus/units.hpp"
#include "gridbus/version.hpp"

namespace gridbus {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

json provenance_json(const Provenance& prov) {
  return json{{"toolkit_version", prov.version},
              {"config_hash", prov.config_hash}};
}

const char* kPalette[] = {"#1f6fb2", "#c23b22", "#2e8b57",
                          "#8a2be2", "#b8860b", "#444444"};

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round a range outward to tick-friendly bounds.
void nice_axis(double lo, double hi, double& out_lo, double& out_hi,
               double& out_step) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  out_lo = std::floor(lo / step) * step;
  out_hi = std::ceil(hi / step) * step;
  out_step = step;
}

}  // namespace

Provenance make_provenance(const std::string& config_hash) {
  return Provenance{kVersion, config_hash};
}

std::string csv_table(const Provenance& prov,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os << "# gridbus " << prov.version << " config " << prov.config_hash
     << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "");
  os << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw ValidationError("csv row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i)
      os << fmt(row[i]) << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
  return os.str();
}

std::string gate_sweep_csv(const Provenance& prov,
                           const std::vector<GateSweepRow>& rows) {
  std::vector<std::vector<double>> table;
  table.reserve(rows.size());
  for (const GateSweepRow& r : rows)
    table.push_back({r.sweep_var, r.T_ns, r.F_av, r.F_bound, r.eps, r.nbar,
                     r.gamma_phi});
  return csv_table(
      prov, {"sweep_var", "T_ns", "F_av", "F_bound", "eps", "nbar",
             "gamma_phi"},
      table);
}

std::string params_report_text(const Provenance& prov,
                               const DeviceParams& dev,
                               const EffectiveQubitParams& q,
                               const ResonatorCoupling& rc) {
  const double twopi = units::twopi;
  std::ostringstream os;
  os << "# gridbus " << prov.version << " config " << prov.config_hash
     << "\n";
  auto line = [&os](const char* name, const std::string& value,
                    const char* unit) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-22s %16s  %s\n", name, value.c_str(),
                  unit);
    os << buf;
  };
  line("E_z", fmt6(q.E_z), "V/um");
  line("x_zpf", fmt6(q.x_zpf_nm), "nm");
  line("l_so", fmt6(q.l_so_nm), "nm");
  line("E_rms", fmt6(rms_vacuum_field(dev)), "V/m");
  line("beta/2pi", fmt6(q.beta / twopi), "GHz");
  line("omega_Z/2pi", fmt6(q.omega_Z / twopi), "GHz");
  line("omega_Z_prime/2pi", fmt6(q.omega_Z_prime / twopi), "GHz");
  if (q.nu == 0.0)
    line("nu", "decoupled", "");
  else
    line("nu/2pi", fmt6(q.nu / twopi * 1e3), "MHz");
  line("delta/2pi", fmt6(q.delta / twopi), "GHz");
  if (q.nu == 0.0)
    line("chi", "decoupled", "");
  else
    line("chi/2pi", fmt6(q.chi / twopi * 1e3), "MHz");
  line("J_formula/2pi", fmt6(rc.J_formula / twopi * 1e3), "MHz");
  line("omega_loaded/2pi", fmt6(rc.omega_loaded / twopi), "GHz");
  return os.str();
}

std::string params_report_json(const Provenance& prov,
                               const DeviceParams& dev,
                               const EffectiveQubitParams& q,
                               const ResonatorCoupling& rc) {
  const double twopi = units::twopi;
  json doc = provenance_json(prov);
  doc["E_z_V_um"] = q.E_z;
  doc["x_zpf_nm"] = q.x_zpf_nm;
  doc["l_so_nm"] = q.l_so_nm;
  doc["E_rms_V_m"] = rms_vacuum_field(dev);
  doc["beta_GHz"] = q.beta / twopi;
  doc["omega_Z_GHz"] = q.omega_Z / twopi;
  doc["omega_Z_prime_GHz"] = q.omega_Z_prime / twopi;
  if (q.nu == 0.0) {
    doc["nu"] = "decoupled";
    doc["chi"] = "decoupled";
  } else {
    doc["nu_MHz"] = q.nu / twopi * 1e3;
    doc["chi_MHz"] = q.chi / twopi * 1e3;
  }
  doc["delta_GHz"] = q.delta / twopi;
  doc["J_formula_MHz"] = rc.J_formula / twopi * 1e3;
  doc["omega_loaded_GHz"] = rc.omega_loaded / twopi;
  return doc.dump(2) + "\n";
}

std::string schedule_json(const Provenance& prov, const CodeLayout& layout,
                          const SyndromeCycle& cycle,
                          const ValidationReport& report,
                          const FoldedLayout* folded) {
  json doc = provenance_json(prov);
  doc["rows"] = layout.rows;
  doc["cols"] = layout.cols;
  json steps = json::array();
  for (const CycleStep& st : cycle.steps) {
    json pairs = json::array();
    for (const StepPair& pr : st.pairs) {
      const char* fs = "";
      if (static_cast<int>(st.freq.size()) == layout.sites())
        fs = st.freq[pr.ancilla] == FreqSet::r ? "r" : "b";
      pairs.push_back(
          {{"ancilla", {layout.row(pr.ancilla), layout.col(pr.ancilla)}},
           {"data", {layout.row(pr.data), layout.col(pr.data)}},
           {"freq_set", fs}});
    }
    steps.push_back(std::move(pairs));
  }
  doc["steps"] = std::move(steps);

  json violations = json::array();
  for (const Violation& v : report.violations)
    violations.push_back({{"kind", to_string(v.kind)},
                          {"step", v.step},
                          {"site_a", v.site_a},
                          {"site_b", v.site_b},
                          {"detail", v.detail}});
  doc["violations"] = std::move(violations);

  if (folded != nullptr) {
    doc["fold"] = {{"f", folded->f},
                   {"multiplicity", folded->multiplicity},
                   {"res_rows", folded->res_rows},
                   {"res_cols", folded->res_cols},
                   {"step_rounds", folded->step_rounds},
                   {"depth_multiplier", folded->depth_multiplier},
                   {"serialization_factor", folded->serialization_factor}};
  }
  return doc.dump(2) + "\n";
}

std::string svg_line_plot(const Provenance& prov, const std::string& title,
                          const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<SvgSeries>& series, int width,
                          int height) {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool any = false;
  for (const SvgSeries& s : series) {
    if (s.x.size() != s.y.size())
      throw ValidationError("svg series with mismatched x/y lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!any) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        any = true;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  double xs, ys;
  nice_axis(x_min, x_max, x_min, x_max, xs);
  nice_axis(y_min, y_max, y_min, y_max, ys);

  const double ml = 72, mr = 18, mt = 34, mb = 48;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) {
    return mt + ph - (y - y_min) / (y_max - y_min) * ph;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
     << height << "\">\n";
  os << "<!-- gridbus " << prov.version << " config " << prov.config_hash
     << " -->\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title)
     << "</text>\n";

  // axes and ticks
  os << "<g stroke=\"#222\" stroke-width=\"1\" fill=\"none\">\n";
  os << "<path d=\"M" << ml << " " << mt << " V" << (mt + ph) << " H"
     << (ml + pw) << "\"/>\n";
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" "
        "fill=\"#222\">\n";
  for (double x = x_min; x <= x_max + 0.5 * xs; x += xs) {
    const double X = px(x);
    os << "<line x1=\"" << fmt6(X) << "\" y1=\"" << (mt + ph) << "\" x2=\""
       << fmt6(X) << "\" y2=\"" << (mt + ph + 4)
       << "\" stroke=\"#222\"/>\n";
    os << "<text x=\"" << fmt6(X) << "\" y=\"" << (mt + ph + 16)
       << "\" text-anchor=\"middle\">" << fmt6(x) << "</text>\n";
  }
  for (double y = y_min; y <= y_max + 0.5 * ys; y += ys) {
    const double Y = py(y);
    os << "<line x1=\"" << (ml - 4) << "\" y1=\"" << fmt6(Y) << "\" x2=\""
       << ml << "\" y2=\"" << fmt6(Y) << "\" stroke=\"#222\"/>\n";
    os << "<text x=\"" << (ml - 7) << "\" y=\"" << fmt6(Y + 3.5)
       << "\" text-anchor=\"end\">" << fmt6(y) << "</text>\n";
  }
  os << "<text x=\"" << (ml + pw / 2) << "\" y=\"" << (height - 10)
     << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";
  os << "<text x=\"14\" y=\"" << (mt + ph / 2)
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << (mt + ph / 2) << ")\">" << xml_escape(y_label) << "</text>\n";
  os << "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i)
      os << fmt6(px(series[k].x[i])) << "," << fmt6(py(series[k].y[i]))
         << " ";
    os << "\"/>\n";
  }

  // legend, top right inside the plot area
  double ly = mt + 14;
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double lx = ml + pw - 150;
    os << "<line x1=\"" << lx << "\" y1=\"" << (ly - 4) << "\" x2=\""
       << (lx + 22) << "\" y2=\"" << (ly - 4) << "\" stroke=\""
       << kPalette[k % 6] << "\" stroke-width=\"1.6\"/>\n";
    os << "<text x=\"" << (lx + 28) << "\" y=\"" << ly << "\">"
       << xml_escape(series[k].label) << "</text>\n";
    ly += 16;
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << content;
  if (!out) throw ConfigError("failed writing output file: " + path);
}

void write_checkpoint(const std::string& path, const DenseMat& rho) {
  if (rho.rows() != rho.cols())
    throw ValidationError("checkpoint requires a square matrix");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open checkpoint file: " + path);
  const std::uint64_t dim = static_cast<std::uint64_t>(rho.rows());
  out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  std::vector<double> row(2 * dim);
  for (std::uint64_t i = 0; i < dim; ++i) {
    for (std::uint64_t j = 0; j < dim; ++j) {
      const cplx v = rho(static_cast<long>(i), static_cast<long>(j));
      row[2 * j] = v.real();
      row[2 * j + 1] = v.imag();
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw ConfigError("failed writing checkpoint: " + path);
}

DenseMat read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint file: " + path);
  std::uint64_t dim = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
  if (!in || dim == 0 || dim > (1u << 20))
    throw ConfigError("checkpoint has invalid dimension header");
  DenseMat rho(static_cast<long>(dim), static_cast<long>(dim));
  std::vector<double> row(2 * dim);
  for (std::uint64_t i = 0; i < dim; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) throw ConfigError("checkpoint truncated: " + path);
    for (std::uint64_t j = 0; j < dim; ++j)
      rho(static_cast<long>(i), static_cast<long>(j)) =
          cplx(row[2 * j], row[2 * j + 1]);
  }
  return rho;
}

}  // namespace gridbus
