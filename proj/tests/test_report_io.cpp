#include <cstdlib>
#include <filesystem>

#include "bvloc/localization.hpp"
#include "bvloc/report_io.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bvloc;

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0, -1.0, 0.1, 14.768014086869886, 1e-300, -2.5e17,
                   3.0000000000000004, 6.283185307179586}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
    CHECK(s.find('\n') == std::string::npos);
  }
}

namespace {

LocalizationReport sample_report() {
  LocalizationReport r;
  r.entry = "sphere_dh";
  r.evaluator = "fixed_loci";
  r.phi = 1.0;
  r.speed = 1.0;
  r.order = 24;
  r.direct = 14.768014086869886;
  r.localized = 14.768014086869899;
  r.abs_residual = 1.3e-14;
  r.rel_residual = 9e-16;
  r.closedness = 2e-15;
  r.closed = true;
  LocusReport n;
  n.id = "north_pole";
  n.chart = 1;
  n.value = 17.07;
  n.weight_product = -1.0;
  n.weight_abs = {1.0};
  n.rank = 2;
  n.sym_residual = 1e-16;
  r.loci.push_back(n);
  return r;
}

SweepResult sample_sweep() {
  SweepResult s;
  s.entry = "sphere_dh";
  s.phi = 1.0;
  s.order = 24;
  s.t = {0.0, 1.5, 3.0};
  s.z = {{14.7, 0.0}, {14.7, 1e-9}, {14.7, -1e-9}};
  s.max_rel_dev = 7e-11;
  s.flat = true;
  return s;
}

}  // namespace

TEST_CASE("localization report serializes to schema 1 json") {
  std::string s = localization_json(sample_report());
  auto j = nlohmann::json::parse(s);
  CHECK(j["schema"] == 1);
  CHECK(j["kind"] == "localization");
  CHECK(j["entry"] == "sphere_dh");
  CHECK(j["direct"].get<double>() == 14.768014086869886);
  CHECK(j["loci"].size() == 1);
  CHECK(j["loci"][0]["id"] == "north_pole");
  CHECK(j["loci"][0]["rank"] == 2);
  CHECK(s.back() == '\n');
}

TEST_CASE("localization table mentions the verdict fields") {
  std::string s = localization_table(sample_report());
  CHECK(s.find("sphere_dh") != std::string::npos);
  CHECK(s.find("rel_residual") != std::string::npos);
  CHECK(s.find("north_pole") != std::string::npos);
}

TEST_CASE("sweep csv carries a header and one row per grid point") {
  std::string s = sweep_csv(sample_sweep());
  CHECK(s.rfind("t,re_z,im_z\n", 0) == 0);
  int rows = 0;
  for (char ch : s)
    if (ch == '\n') ++rows;
  CHECK(rows == 4);
  // values parse back exactly
  auto pos = s.find('\n') + 1;
  CHECK(std::strtod(s.c_str() + pos, nullptr) == 0.0);
}

TEST_CASE("sweep json and svg are well formed") {
  SweepResult sw = sample_sweep();
  auto j = nlohmann::json::parse(sweep_json(sw));
  CHECK(j["schema"] == 1);
  CHECK(j["kind"] == "sweep");
  CHECK(j["points"].size() == 3);
  CHECK(j["flat"] == true);

  std::string svg = sweep_svg(sw);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  size_t first = svg.find("<polyline");
  CHECK(svg.find("<polyline", first + 1) != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("single-point sweep still renders") {
  SweepResult sw = sample_sweep();
  sw.t = {0.0};
  sw.z = {{14.7, 0.0}};
  std::string svg = sweep_svg(sw);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(sweep_csv(sw).rfind("t,re_z,im_z\n", 0) == 0);
}

TEST_CASE("phase points serialize") {
  std::vector<PhasePoint> pts;
  PhasePoint p;
  p.t = 50.0;
  p.direct = {0.1, -0.2};
  p.estimate = {0.1001, -0.2002};
  p.rel_err = 1e-3;
  pts.push_back(p);
  auto j = nlohmann::json::parse(phase_json("gaussian_line", pts));
  CHECK(j["schema"] == 1);
  CHECK(j["kind"] == "phase");
  CHECK(j["points"][0]["t"] == 50.0);
  std::string tbl = phase_table("gaussian_line", pts);
  CHECK(tbl.find("gaussian_line") != std::string::npos);
}

TEST_CASE("file io round-trips and reports failures") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "bvloc_report_io_test";
  fs::create_directories(dir);
  fs::path file = dir / "out.json";
  write_file(file.string(), "{\"a\": 1}\n");
  CHECK(read_file(file.string()) == "{\"a\": 1}\n");
  CHECK_THROWS_AS(write_file((dir / "no_such" / "x.json").string(), "x"),
                  IOError);
  CHECK_THROWS_AS(read_file((dir / "missing.json").string()), IOError);
  fs::remove_all(dir);
}
