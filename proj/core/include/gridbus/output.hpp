#pragma once

// Result emission: CSV tables, JSON documents, a minimal SVG line-plot
// emitter, aligned-text reports, and the binary density-matrix
// checkpoint. Every text output embeds the toolkit version and the
// config hash on its first line (or as top-level JSON fields).

#include <string>
#include <vector>

#include "gridbus/device.hpp"
#include "gridbus/gates.hpp"
#include "gridbus/schedule.hpp"
#include "gridbus/sparse.hpp"

namespace gridbus {

struct Provenance {
  std::string version;      // kVersion unless overridden
  std::string config_hash;  // fnv1a64 hex of the config text
};

Provenance make_provenance(const std::string& config_hash);

// Generic numeric CSV: one '#' provenance line, a header row, then
// rows formatted with %.12g (integers print without a decimal point).
std::string csv_table(const Provenance& prov,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows);

std::string gate_sweep_csv(const Provenance& prov,
                           const std::vector<GateSweepRow>& rows);

// Derived-parameter report, aligned columns / JSON document.
std::string params_report_text(const Provenance& prov,
                               const DeviceParams& dev,
                               const EffectiveQubitParams& q,
                               const ResonatorCoupling& rc);
std::string params_report_json(const Provenance& prov,
                               const DeviceParams& dev,
                               const EffectiveQubitParams& q,
                               const ResonatorCoupling& rc);

// Schedule document: steps as {ancilla:[n,m], data:[n,m], freq_set}
// pair lists plus the validation report and optional fold summary.
std::string schedule_json(const Provenance& prov, const CodeLayout& layout,
                          const SyndromeCycle& cycle,
                          const ValidationReport& report,
                          const FoldedLayout* folded);

struct SvgSeries {
  std::string label;
  std::vector<double> x, y;
};

// Self-contained SVG: axes, ticks, polylines, legend. No external
// renderer or fonts beyond generic sans-serif.
std::string svg_line_plot(const Provenance& prov, const std::string& title,
                          const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<SvgSeries>& series,
                          int width = 640, int height = 420);

void write_text_file(const std::string& path, const std::string& content);

// Density-matrix snapshot: u64 little-endian dimension, then dim*dim
// complex doubles (re, im) in row-major order, little-endian.
void write_checkpoint(const std::string& path, const DenseMat& rho);
DenseMat read_checkpoint(const std::string& path);

}  // namespace gridbus
