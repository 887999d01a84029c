#include "charvar/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <regex>
#include <sstream>
#include <thread>

#include "charvar/local_chart.hpp"
#include "charvar/mcg_action.hpp"

namespace charvar {

namespace {

constexpr std::size_t kMaxGridPoints = 1000000;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// mpq_get_d truncates; go through a long decimal expansion for round-to-nearest.
double nearest_double(const Rational& r) {
  const mpf_class f(r, 256);
  char buf[128];
  gmp_snprintf(buf, sizeof buf, "%.40Fe", f.get_mpf_t());
  return std::strtod(buf, nullptr);
}

std::string shortest_text(const Rational& r) {
  char buf[64];
  const double v = nearest_double(r);
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

SValue make_svalue(const std::string& text, const Rational& exact) {
  if (exact == Rational(1, 2)) throw ConfigError("s = " + text + " is the pole of the fixed-point family");
  return {text, exact, nearest_double(exact)};
}

std::string format17(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json complex_json(Complex c) { return {{"re", number_or_null(c.real())}, {"im", number_or_null(c.imag())}}; }

nlohmann::json matrix_json(const Eigen::MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(complex_json(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

std::vector<double> omega_of_elliptic_pairs(const SpectrumReport& rep) {
  std::vector<double> om;
  for (int p : rep.elliptic_pairs_by_frequency()) om.push_back(rep.omega[p]);
  return om;
}

std::string with_context(const SValue& s, const std::exception& e) { return "s=" + s.text + ": " + e.what(); }

}  // namespace

Pipeline parse_pipeline(const std::string& name) {
  if (name == "su2-brown") return Pipeline::su2_brown;
  if (name == "su3-main") return Pipeline::su3_main;
  throw ConfigError("unknown pipeline '" + name + "' (expected su2-brown or su3-main)");
}

std::string to_string(Pipeline p) { return p == Pipeline::su2_brown ? "su2-brown" : "su3-main"; }

Rational parse_decimal(const std::string& text) {
  static const std::regex re(R"(^([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?$)");
  std::smatch m;
  const std::string t = trim(text);
  if (!std::regex_match(t, m, re) || (m[2].length() == 0 && m[3].length() == 0))
    throw ConfigError("not a decimal number: '" + text + "'");
  const std::string digits = m[2].str() + m[3].str();
  long exponent = -static_cast<long>(m[3].length());
  if (m[4].matched) {
    const long e = std::stol(m[4].str());
    if (std::abs(e) > 400) throw ConfigError("exponent out of range: '" + text + "'");
    exponent += e;
  }
  mpz_class num(digits.empty() ? std::string("0") : digits, 10), den = 1;
  mpz_class ten = 10, scale;
  mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::abs(exponent)));
  if (exponent >= 0)
    num *= scale;
  else
    den = scale;
  Rational r(num, den);
  r.canonicalize();
  return m[1] == "-" ? Rational(-r) : r;
}

std::vector<SValue> parse_s_values(const std::string& spec) {
  std::vector<SValue> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    if (item.find(':') == std::string::npos) {
      out.push_back(make_svalue(item, parse_decimal(item)));
      continue;
    }
    std::vector<std::string> parts;
    std::stringstream rs(item);
    std::string p;
    while (std::getline(rs, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("range must be a:b:step, got '" + item + "'");
    const Rational a = parse_decimal(parts[0]), b = parse_decimal(parts[1]), step = parse_decimal(parts[2]);
    if (step == 0 || (b - a) * step < 0) throw ConfigError("range step has the wrong sign or is zero: '" + item + "'");
    for (Rational v = a; step > 0 ? v <= b : v >= b; v += step) {
      if (out.size() >= kMaxGridPoints) throw ConfigError("s grid too large");
      out.push_back(make_svalue(shortest_text(v), v));
    }
  }
  return out;
}

std::string PipelineRow::spectrum_class() const {
  if (!ok) return "error";
  if (degenerate) return "degenerate";
  if (!spectrum) return "none";
  if (spectrum->all_elliptic()) return "elliptic";
  std::string tags;
  for (PairClass c : spectrum->classification) tags += (tags.empty() ? "" : "+") + to_string(c);
  return tags;
}

Complex PipelineRow::twist_value() const {
  if (!kam) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  return kam->alpha_det;
}

double max_abs_coefficient(const ComplexJet& j) {
  double m = 0;
  for (const auto& t : j.terms()) m = std::max(m, std::abs(t.coeff));
  return m;
}

PipelineRow run_su2_brown_point(const SValue& s, const RunConfig& cfg) {
  PipelineRow row;
  row.s = s;
  row.pipeline = Pipeline::su2_brown;
  try {
    const Su2Tuple<Rational> center = fixed_family_su2(s.exact);
    const Rational level = kappa(center[0], center[1], center[2]);
    for (const auto& c : center) row.fixed_point.push_back(c.get_d());
    row.level = level.get_d();
    if (level == -2) {
      row.degenerate = true;
      row.ok = true;
      row.notes = "kappa = -2: the level is the single point (0,0,0); blow up to the sphere of directions";
      return row;
    }
    const Su2Chart chart = su2_chart_map_jet(s.exact, cfg.trunc_degree);
    row.level_residual = max_abs_coefficient(chart.level_residual);
    if (cfg.dump_jets) {
      nlohmann::json map = nlohmann::json::array();
      for (const auto& c : chart.map_jet.components()) map.push_back(to_json(c));
      row.jets = nlohmann::json{{"x", to_json(chart.x_jet)}, {"map", map}};
    }
    row.spectrum = classify_spectrum(linear_part(chart.map_jet));
    if (!row.spectrum->all_elliptic()) {
      row.ok = true;
      row.notes = "spectrum not elliptic; no twist verdict";
      return row;
    }
    const DiagonalizingBasis basis = build_C0(linear_part(chart.map_jet), *row.spectrum);
    const NormalFormInput in = diagonalize(chart.map_jet, basis);
    row.kam = kam_report(in, omega_of_elliptic_pairs(*row.spectrum));
    const ComplexJet& p = in.p_jets[0];
    const ComplexJet& q = in.q_jets[0];
    auto c = [](const ComplexJet& f, int a, int b) { return f.coeff(MultiIndex({a, b})); };
    row.alpha2_closed_form =
        alpha2_closed_form({c(p, 2, 0), c(p, 1, 1), c(p, 0, 2)}, {c(q, 2, 0), c(q, 1, 1), c(q, 0, 2)}, c(p, 2, 1), in.lambda[0]);
    const bool nonresonant = row.kam->resonance_flags.empty();
    row.verdict = nonresonant && row.kam->twist_ok;
    if (!nonresonant) row.notes = "multiplier resonant through order 4";
    else if (!row.kam->twist_ok) row.notes = "alpha_2 vanishes within threshold";
    row.ok = true;
  } catch (const std::exception& e) {
    row.error = with_context(s, e);
  }
  return row;
}

PipelineRow run_su3_main_point(const SValue& s, const RunConfig& cfg) {
  PipelineRow row;
  row.s = s;
  row.pipeline = Pipeline::su3_main;
  try {
    const ChartSpec spec = ChartSpec::at(s.exact, cfg.trunc_degree);
    for (const auto& c : spec.center) row.fixed_point.push_back(c.get_d());
    row.level = spec.level.get_d();
    const ChartJet chart = chart_map_jet(spec);
    row.level_residual = max_abs_coefficient(chart.level_residual);
    row.h_residual = max_abs_coefficient(chart.h_residual);
    if (cfg.dump_jets) {
      nlohmann::json map = nlohmann::json::array();
      for (const auto& c : chart.map_jet.components()) map.push_back(to_json(c));
      row.jets = nlohmann::json{{"t7", to_json(chart.t_jet7)}, {"z", to_json(chart.z_jet)}, {"t", to_json(chart.t_jet)}, {"map", map}};
    }
    if (cfg.golden && cfg.golden->s() == s.exact) row.golden = compare_chart_goldens(spec, chart, *cfg.golden);
    const Eigen::MatrixXd L = linear_part(chart.map_jet);
    row.spectrum = classify_spectrum(L);
    if (!row.spectrum->all_elliptic()) {
      row.ok = true;
      row.notes = "spectrum not fully elliptic; no KAM verdict";
      return row;
    }
    const DiagonalizingBasis basis = build_C0(L, *row.spectrum);
    const NormalFormInput in = diagonalize(chart.map_jet, basis);
    row.kam = kam_report(in, omega_of_elliptic_pairs(*row.spectrum));
    const bool nonresonant = row.kam->resonance_flags.empty();
    row.verdict = nonresonant && row.kam->twist_ok && row.kam->nonplanarity_ok;
    std::vector<std::string> why;
    if (!nonresonant) why.push_back("resonant multipliers");
    if (!row.kam->twist_ok) why.push_back("twist determinant vanishes");
    if (!row.kam->nonplanarity_ok) why.push_back("frequency map planar");
    for (const auto& w : why) row.notes += (row.notes.empty() ? "" : "; ") + w;
    if (row.golden && !row.golden->ok()) row.notes += (row.notes.empty() ? "" : "; ") + std::string("golden mismatch");
    row.ok = true;
  } catch (const std::exception& e) {
    row.error = with_context(s, e);
  }
  return row;
}

PipelineRow run_point(const SValue& s, const RunConfig& cfg) {
  return cfg.pipeline == Pipeline::su2_brown ? run_su2_brown_point(s, cfg) : run_su3_main_point(s, cfg);
}

std::vector<PipelineRow> run_scan(const RunConfig& cfg, unsigned workers) {
  const std::size_t n = cfg.s_values.size();
  std::vector<PipelineRow> rows(n);
  if (n == 0) return rows;
  const unsigned count = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::min<std::size_t>(n, 256)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) rows[i] = run_point(cfg.s_values[i], cfg);
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < count; ++k) pool.emplace_back(work);
    work();
  }
  return rows;
}

nlohmann::json to_json(const ComplexJet& j) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : j.terms())
    terms.push_back({{"exps", j.index_of(t).exponents()}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}});
  return {{"num_vars", j.num_vars()}, {"trunc_degree", j.trunc_degree()}, {"terms", terms}};
}

nlohmann::json to_json(const SpectrumReport& r) {
  nlohmann::json eigs = nlohmann::json::array(), pairs = nlohmann::json::array(), tags = nlohmann::json::array(),
                 omega = nlohmann::json::array();
  for (Complex e : r.eigenvalues) eigs.push_back(complex_json(e));
  for (const auto& [a, b] : r.pairing) pairs.push_back({a, b});
  for (PairClass c : r.classification) tags.push_back(to_string(c));
  for (double w : r.omega) omega.push_back(number_or_null(w));
  return {{"eigs", eigs}, {"pairs", pairs}, {"tags", tags}, {"omega", omega}};
}

nlohmann::json to_json(const KamReport& r) {
  nlohmann::json flags = nlohmann::json::array();
  for (const auto& v : r.resonance_flags)
    flags.push_back({{"kind", v.kind}, {"j", v.j}, {"m", v.m}, {"n", v.n}, {"order", v.order}, {"gap", v.gap}});
  return {{"alpha", matrix_json(r.alpha)},
          {"b", matrix_json(r.b)},
          {"alpha_det", complex_json(r.alpha_det)},
          {"twist_ok", r.twist_ok},
          {"nonplanarity_ok", r.nonplanarity_ok},
          {"max_imag_b", r.max_imag_b},
          {"resonance_flags", flags},
          {"brjuno_partial", r.brjuno_partial}};
}

nlohmann::json to_json(const PipelineRow& row) {
  nlohmann::json j = {{"s", row.s.text}, {"s_value", row.s.value}, {"pipeline", to_string(row.pipeline)}, {"ok", row.ok}};
  if (!row.ok) {
    j["error"] = row.error;
    return j;
  }
  j["fixed_point"] = row.fixed_point;
  j["level"] = row.level;
  j["degenerate"] = row.degenerate;
  j["spectrum_class"] = row.spectrum_class();
  if (row.spectrum) j["spectrum"] = to_json(*row.spectrum);
  if (row.kam) j["kam"] = to_json(*row.kam);
  if (row.alpha2_closed_form) j["alpha2_closed_form"] = complex_json(*row.alpha2_closed_form);
  j["level_residual"] = row.level_residual;
  if (row.pipeline == Pipeline::su3_main) j["h_residual"] = row.h_residual;
  if (row.jets) j["jets"] = *row.jets;
  if (row.golden) {
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : row.golden->failures)
      failures.push_back({{"jet", f.jet}, {"exps", f.exponents}, {"expected", f.expected}, {"actual", f.actual},
                          {"rel_error", f.rel_error}});
    j["golden"] = {{"checked", row.golden->checked},
                   {"worst_rel_error", row.golden->worst_rel_error},
                   {"ok", row.golden->ok()},
                   {"failures", failures}};
  }
  j["verdict"] = row.verdict;
  j["notes"] = row.notes;
  return j;
}

nlohmann::json make_report(const RunConfig& cfg, const std::vector<PipelineRow>& rows) {
  nlohmann::json list = nlohmann::json::array();
  int ok = 0, verdicts = 0;
  for (const auto& r : rows) {
    list.push_back(to_json(r));
    ok += r.ok;
    verdicts += r.verdict;
  }
  return {{"schema", "kam-report/1"},
          {"pipeline", to_string(cfg.pipeline)},
          {"trunc_degree", cfg.trunc_degree},
          {"rows", list},
          {"summary", {{"rows", rows.size()}, {"ok", ok}, {"errors", static_cast<int>(rows.size()) - ok}, {"verdicts", verdicts}}}};
}

std::string csv_header() { return "s,ell,spec_class,alpha_det_re,alpha_det_im,twist_ok,nonplanar_ok,notes"; }

std::string csv_line(const PipelineRow& row) {
  const Complex det = row.twist_value();
  std::string notes = row.ok ? row.notes : row.error;
  std::string quoted = "\"";
  for (char c : notes) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
  quoted += '"';
  auto flag = [&](bool v) { return row.kam ? std::string(v ? "1" : "0") : std::string(); };
  return row.s.text + "," + (row.ok ? format17(row.level) : "") + "," + row.spectrum_class() + "," +
         format17(det.real()) + "," + format17(det.imag()) + "," + flag(row.kam && row.kam->twist_ok) + "," +
         flag(row.kam && row.kam->nonplanarity_ok) + "," + quoted;
}

std::string make_csv(const std::vector<PipelineRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) out += csv_line(r) + "\n";
  return out;
}

}  // namespace charvar
