#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "gridbus/device.hpp"
#include "gridbus/errors.hpp"
#include "gridbus/output.hpp"
#include "gridbus/schedule.hpp"
#include "gridbus/version.hpp"

using namespace gridbus;

namespace {
std::filesystem::path tmp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}
}  // namespace

TEST_CASE("csv carries provenance, full precision, and fixed width") {
  const Provenance prov = make_provenance("00ff00ff00ff00ff");
  CHECK(prov.version == std::string(kVersion));
  const std::string csv = csv_table(prov, {"a", "b"},
                                    {{1.0, 1.0 / 3.0}, {42.0, 2.5e-11}});
  CHECK(csv.rfind("# gridbus 0.1.0 config 00ff00ff00ff00ff\n", 0) == 0);
  CHECK(csv.find("a,b\n") != std::string::npos);
  CHECK(csv.find("1,0.333333333333\n") != std::string::npos);
  CHECK(csv.find("42,2.5e-11\n") != std::string::npos);

  // deterministic: same input, identical bytes
  CHECK(csv == csv_table(prov, {"a", "b"}, {{1.0, 1.0 / 3.0},
                                            {42.0, 2.5e-11}}));
  CHECK_THROWS_AS(csv_table(prov, {"a", "b"}, {{1.0}}), ValidationError);
}

TEST_CASE("gate sweep table lists the calibration columns") {
  GateSweepRow r;
  r.sweep_var = 35.0;
  r.T_ns = 35.0;
  r.F_av = 0.9955;
  r.F_bound = 0.9985;
  const std::string csv = gate_sweep_csv(make_provenance("0"), {r});
  CHECK(csv.find("sweep_var,T_ns,F_av,F_bound,eps,nbar,gamma_phi") !=
        std::string::npos);
  CHECK(csv.find("35,35,0.9955,0.9985,0,0,0") != std::string::npos);
}

TEST_CASE("parameter reports in both formats") {
  const DeviceParams dev = DeviceParams::baseline();
  const ResonatorCoupling rc = resonator_coupling_J(dev);
  const Provenance prov = make_provenance("abc");

  const EffectiveQubitParams on = effective_qubit_params(dev, 1.0);
  const std::string text = params_report_text(prov, dev, on, rc);
  CHECK(text.rfind("# gridbus", 0) == 0);
  CHECK(text.find("x_zpf") != std::string::npos);
  CHECK(text.find("165.584") != std::string::npos);
  CHECK(text.find("decoupled") == std::string::npos);

  const EffectiveQubitParams off = effective_qubit_params(dev, 0.0);
  CHECK(params_report_text(prov, dev, off, rc).find("decoupled") !=
        std::string::npos);

  const nlohmann::json doc =
      nlohmann::json::parse(params_report_json(prov, dev, on, rc));
  CHECK(doc["toolkit_version"] == std::string(kVersion));
  CHECK(doc["config_hash"] == "abc");
  CHECK(doc["x_zpf_nm"].get<double>() == doctest::Approx(165.584245));
  CHECK(doc["nu_MHz"].get<double>() == doctest::Approx(39.722888));
  const nlohmann::json doc_off =
      nlohmann::json::parse(params_report_json(prov, dev, off, rc));
  CHECK(doc_off["nu"] == "decoupled");
}

TEST_CASE("schedule document round-trips through a JSON parser") {
  const CodeLayout lay = build_layout(4, 4);
  const SyndromeCycle cy = build_syndrome_cycle(lay);
  const ValidationReport rep = validate_cycle(lay, cy);
  const FoldedLayout fold = fold_layout(lay, 1);
  const std::string s =
      schedule_json(make_provenance("deadbeef"), lay, cy, rep, &fold);
  const nlohmann::json doc = nlohmann::json::parse(s);
  CHECK(doc["rows"] == 4);
  CHECK(doc["cols"] == 4);
  REQUIRE(doc["steps"].size() == 4);
  CHECK(doc["steps"][1].size() == 8);
  CHECK(doc["steps"][1][0].contains("ancilla"));
  CHECK(doc["violations"].empty());
  CHECK(doc["fold"]["multiplicity"] == 2);
  CHECK(doc["fold"]["step_rounds"].size() == 4);

  // without fold block
  const nlohmann::json lean = nlohmann::json::parse(
      schedule_json(make_provenance("deadbeef"), lay, cy, rep, nullptr));
  CHECK_FALSE(lean.contains("fold"));
}

TEST_CASE("svg plot is self-contained and labeled") {
  SvgSeries s1{"measured", {0.0, 1.0, 2.0}, {0.5, 0.8, 0.7}};
  SvgSeries s2{"bound", {0.0, 1.0, 2.0}, {0.9, 0.92, 0.91}};
  const std::string svg = svg_line_plot(make_provenance("11"), "fidelity",
                                        "T (ns)", "F", {s1, s2});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<!-- gridbus 0.1.0 config 11 -->") != std::string::npos);
  CHECK(svg.find("measured") != std::string::npos);
  CHECK(svg.find("bound") != std::string::npos);
  CHECK(svg.find("fidelity") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  SvgSeries bad{"bad", {0.0, 1.0}, {0.5}};
  CHECK_THROWS_AS(svg_line_plot(make_provenance("11"), "t", "x", "y", {bad}),
                  ValidationError);
}

TEST_CASE("checkpoint round-trips a density matrix bit for bit") {
  const auto path = tmp_file("gridbus_ckpt_test.bin");
  DenseMat rho(3, 3);
  rho.setZero();
  rho(0, 0) = cplx(0.25, 0.0);
  rho(1, 1) = cplx(0.75, 0.0);
  rho(0, 2) = cplx(0.1, -0.2);
  rho(2, 0) = cplx(0.1, 0.2);
  write_checkpoint(path.string(), rho);
  const DenseMat back = read_checkpoint(path.string());
  REQUIRE(back.rows() == 3);
  CHECK((back - rho).norm() == 0.0);
  std::filesystem::remove(path);

  DenseMat rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(write_checkpoint(path.string(), rect), ValidationError);
  CHECK_THROWS_AS(read_checkpoint("/nonexistent/ckpt.bin"), ConfigError);

  // truncated payload
  const auto trunc = tmp_file("gridbus_ckpt_trunc.bin");
  {
    std::ofstream out(trunc, std::ios::binary);
    const std::uint64_t dim = 4;
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    const double d = 1.0;
    out.write(reinterpret_cast<const char*>(&d), sizeof(d));
  }
  CHECK_THROWS_AS(read_checkpoint(trunc.string()), ConfigError);
  std::filesystem::remove(trunc);
}

TEST_CASE("text writer reports unwritable destinations") {
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/file.txt", "x"),
                  ConfigError);
  const auto path = tmp_file("gridbus_text_test.txt");
  write_text_file(path.string(), "hello\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "hello");
  std::filesystem::remove(path);
}
