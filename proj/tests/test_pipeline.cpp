#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "charvar/mcg_action.hpp"
#include "charvar/pipeline.hpp"
#include "doctest.h"

using namespace charvar;

namespace {

RunConfig config(Pipeline p, const std::string& s) {
  RunConfig cfg;
  cfg.pipeline = p;
  cfg.s_values = parse_s_values(s);
  return cfg;
}

int count_fields(const std::string& line) {
  int n = 1;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("decimal parsing is exact") {
  CHECK(parse_decimal("0.249") == Rational(249, 1000));
  CHECK(parse_decimal("-1e-3") == Rational(-1, 1000));
  CHECK(parse_decimal("0249") == Rational(249));
  CHECK(parse_decimal("+2.5E1") == Rational(25));
  CHECK_THROWS_AS(parse_decimal("abc"), ConfigError);
  CHECK_THROWS_AS(parse_decimal("1e999"), ConfigError);
  CHECK_THROWS_AS(parse_decimal(""), ConfigError);
}

TEST_CASE("s lists and ranges") {
  auto v = parse_s_values(".239,.24, .241");
  REQUIRE(v.size() == 3);
  CHECK(v[1].exact == Rational(6, 25));
  CHECK(v[1].value == 0.24);

  v = parse_s_values("-0.1:0.1:0.05");
  REQUIRE(v.size() == 5);
  CHECK(v[0].text == "-0.1");
  CHECK(v[2].exact == 0);
  CHECK(v[4].exact == Rational(1, 10));
  CHECK(v[1].value == -0.05);

  CHECK(parse_s_values("0.3:0.1:-0.1").size() == 3);
  CHECK(parse_s_values("").empty());
  CHECK_THROWS_AS(parse_s_values("0.5"), ConfigError);
  CHECK_THROWS_AS(parse_s_values("0.4:0.6:0.05"), ConfigError);
  CHECK_THROWS_AS(parse_s_values("0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_s_values("0:1:-0.1"), ConfigError);
  CHECK_THROWS_AS(parse_s_values("0:1:1e-9"), ConfigError);
  CHECK_THROWS_AS(parse_pipeline("su4"), ConfigError);
  CHECK(parse_pipeline("su2-brown") == Pipeline::su2_brown);
  CHECK(to_string(Pipeline::su3_main) == "su3-main");
}

TEST_CASE("Brown pipeline rows") {
  const RunConfig cfg = config(Pipeline::su2_brown, "0,0.05,-0.1");
  const std::vector<PipelineRow> rows = run_scan(cfg, 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ok);
  CHECK(rows[0].degenerate);
  CHECK_FALSE(rows[0].verdict);
  CHECK(rows[0].level == doctest::Approx(-2.0));
  for (double c : rows[0].fixed_point) CHECK(c == 0);
  for (int i : {1, 2}) {
    CHECK(rows[i].ok);
    CHECK(rows[i].spectrum->all_elliptic());
    CHECK(rows[i].alpha2_closed_form.has_value());
    CHECK(std::abs(*rows[i].alpha2_closed_form - rows[i].kam->alpha(0, 0)) < 1e-10);
    CHECK(std::abs(*rows[i].alpha2_closed_form) > 1e-6);
    CHECK(rows[i].verdict);
  }
}

TEST_CASE("main pipeline rows") {
  const std::vector<PipelineRow> rows = run_scan(config(Pipeline::su3_main, "0.24,0.4"), 2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ok);
  CHECK(rows[0].verdict);
  CHECK(rows[0].spectrum_class() == "elliptic");
  CHECK(rows[0].level_residual < 1e-7);
  CHECK(rows[0].h_residual < 1e-7);
  CHECK(rows[1].spectrum.has_value());
  CHECK_FALSE(rows[1].verdict);
  CHECK_FALSE(rows[1].notes.empty());
}

TEST_CASE("golden comparison in the scan") {
  RunConfig cfg = config(Pipeline::su3_main, "0.249,0.24");
  cfg.golden = reference_goldens();
  const std::vector<PipelineRow> rows = run_scan(cfg, 1);
  REQUIRE(rows[0].golden.has_value());
  CHECK(rows[0].golden->ok());
  CHECK_FALSE(rows[1].golden.has_value());
}

TEST_CASE("reports are deterministic and ordered") {
  RunConfig cfg = config(Pipeline::su3_main, "0.249,0.239,0.245,0.242");
  cfg.dump_jets = true;
  const auto one = make_report(cfg, run_scan(cfg, 1)).dump(2);
  const auto four = make_report(cfg, run_scan(cfg, 4)).dump(2);
  CHECK(one == four);
  const auto j = nlohmann::json::parse(one);
  CHECK(j["schema"] == "kam-report/1");
  CHECK(j["rows"].size() == 4);
  CHECK(j["rows"][1]["s"] == "0.239");
  CHECK(j["rows"][0].contains("jets"));
  CHECK(j["summary"]["rows"] == 4);
  CHECK(j["summary"]["verdicts"] == 4);
}

TEST_CASE("empty scan") {
  const RunConfig cfg = config(Pipeline::su2_brown, "");
  const auto rows = run_scan(cfg, 4);
  CHECK(rows.empty());
  CHECK(make_report(cfg, rows)["rows"].empty());
  CHECK(make_csv(rows) == csv_header() + "\n");
}

TEST_CASE("csv layout") {
  CHECK(csv_header() == "s,ell,spec_class,alpha_det_re,alpha_det_im,twist_ok,nonplanar_ok,notes");
  const auto rows = run_scan(config(Pipeline::su3_main, "0.249,0.4"), 1);
  std::istringstream in(make_csv(rows));
  std::string line;
  std::getline(in, line);
  int n = 0;
  while (std::getline(in, line)) {
    CHECK(count_fields(line) == 8);
    ++n;
  }
  CHECK(n == 2);
}

TEST_CASE("goldens round-trip and carry the printed constants") {
  const Goldens& g = reference_goldens();
  CHECK(goldens_from_json(nlohmann::json::parse(to_json(g).dump())) == g);
  const std::filesystem::path p = std::filesystem::temp_directory_path() / "charvar_goldens_test.json";
  write_goldens(p, g);
  CHECK(read_goldens(p) == g);
  std::filesystem::remove(p);

  CHECK(g.alpha_det == Complex(-20.077, -0.73655));
  CHECK(g.s() == Rational(249, 1000));
  CHECK(g.level.numerator_factors == std::vector<std::vector<long>>{{-3, 12, 0, -24, 16}, {-1, 4, 8, -24, 16}});
  CHECK(g.level.denominator == std::vector<long>{1, -8, 24, -32, 16});
  CHECK(same_rational_function(to_rational_function(g.level), level_rational_function()));
  CHECK(same_rational_function(to_rational_function(g.su3_commutator), su3_commutator_rational_function()));
  CHECK(same_rational_function(to_rational_function(g.su2_commutator), su2_commutator_rational_function()));
  for (const Rational& s : {Rational(1, 7), Rational(249, 1000), Rational(-3, 10)}) {
    const FixedPointSample f = fixed_family_su3(s);
    for (int i = 0; i < 9; ++i) CHECK(evaluate(g.fixed_line[i], s) == f.su3[i]);
    CHECK(evaluate(g.level, s) == f.level);
  }
}

TEST_CASE("golden file schema is checked") {
  nlohmann::json j = to_json(reference_goldens());
  j["schema"] = "other/1";
  CHECK_THROWS(goldens_from_json(j));
}
