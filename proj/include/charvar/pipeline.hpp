#pragma once

#include <optional>
#include <string>
#include <vector>

#include "charvar/birkhoff_kam.hpp"
#include "charvar/goldens.hpp"
#include "charvar/spectral.hpp"
#include "json.hpp"

namespace charvar {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Pipeline { su2_brown, su3_main };
Pipeline parse_pipeline(const std::string& name);
std::string to_string(Pipeline p);

struct SValue {
  std::string text;
  Rational exact;
  double value = 0;
};

// Exact decimal ("0.249", "-1e-3") to a rational.
Rational parse_decimal(const std::string& text);

// Comma-separated decimals and inclusive ranges "a:b:step"; s = 1/2 is rejected.
std::vector<SValue> parse_s_values(const std::string& spec);

struct RunConfig {
  Pipeline pipeline = Pipeline::su3_main;
  std::vector<SValue> s_values;
  int trunc_degree = 3;
  bool dump_jets = false;
  std::optional<Goldens> golden;
};

struct PipelineRow {
  SValue s;
  Pipeline pipeline = Pipeline::su3_main;
  bool ok = false;
  std::string error;
  std::vector<double> fixed_point;
  double level = 0;
  bool degenerate = false;
  std::optional<SpectrumReport> spectrum;
  std::optional<KamReport> kam;
  std::optional<Complex> alpha2_closed_form;
  double level_residual = 0;
  double h_residual = 0;
  std::optional<nlohmann::json> jets;
  std::optional<GoldenComparison> golden;
  bool verdict = false;
  std::string notes;

  std::string spectrum_class() const;
  Complex twist_value() const;
};

PipelineRow run_su2_brown_point(const SValue& s, const RunConfig& cfg);
PipelineRow run_su3_main_point(const SValue& s, const RunConfig& cfg);
PipelineRow run_point(const SValue& s, const RunConfig& cfg);

// Processes the grid on up to `workers` threads; rows come back in input order.
std::vector<PipelineRow> run_scan(const RunConfig& cfg, unsigned workers);

double max_abs_coefficient(const ComplexJet& j);

nlohmann::json to_json(const ComplexJet& j);
nlohmann::json to_json(const SpectrumReport& r);
nlohmann::json to_json(const KamReport& r);
nlohmann::json to_json(const PipelineRow& row);
nlohmann::json make_report(const RunConfig& cfg, const std::vector<PipelineRow>& rows);

std::string csv_header();
std::string csv_line(const PipelineRow& row);
std::string make_csv(const std::vector<PipelineRow>& rows);

}  // namespace charvar
