#include "charvar/goldens.hpp"

#include <cmath>
#include <fstream>

namespace charvar {

namespace {

// Factorial-scaled coefficients at s = 0.249 over displacements from the fixed point.
const std::vector<GoldenTerm> kTJetTable = {
    {{0, 0, 0, 0, 0, 0, 0}, -0.0158728},
    {{0, 0, 0, 0, 0, 0, 2}, 35.9596},
    {{1, 0, 0, 0, 0, 0, 0}, -27.4865},
    {{1, 0, 0, 0, 0, 0, 2}, -106566.0},
    {{2, 0, 0, 0, 0, 0, 0}, 27172.4},
    {{3, 0, 0, 0, 0, 0, 0}, -80525300.0},
    {{0, 1, 0, 0, 0, 0, 1}, 1.14156},
    {{1, 1, 0, 0, 0, 0, 1}, -3383.0},
    {{0, 2, 0, 0, 0, 0, 0}, 35.9686},
    {{1, 2, 0, 0, 0, 0, 0}, -106593.0},
    {{0, 0, 1, 0, 0, 0, 0}, -21.6578},
    {{0, 0, 1, 0, 0, 0, 2}, -81099.4},
    {{1, 0, 1, 0, 0, 0, 0}, 41359.0},
    {{2, 0, 1, 0, 0, 0, 0}, -183843000.0},
    {{0, 1, 1, 0, 0, 0, 1}, -2790.3},
    {{0, 2, 1, 0, 0, 0, 0}, -81123.2},
    {{0, 0, 2, 0, 0, 0, 0}, 15752.2},
    {{1, 0, 2, 0, 0, 0, 0}, -139954000.0},
    {{0, 0, 3, 0, 0, 0, 0}, -35525900.0},
    {{0, 0, 0, 1, 0, 0, 1}, -54.0829},
    {{1, 0, 0, 1, 0, 0, 1}, 160490.0},
    {{0, 1, 0, 1, 0, 0, 0}, -52.9413},
    {{1, 1, 0, 1, 0, 0, 0}, 162822.0},
    {{0, 0, 1, 1, 0, 0, 1}, 121973.0},
    {{0, 1, 1, 1, 0, 0, 0}, 124071.0},
    {{0, 0, 0, 2, 0, 0, 0}, 56.2946},
    {{1, 0, 0, 2, 0, 0, 0}, -166991.0},
    {{0, 0, 1, 2, 0, 0, 0}, -126961.0},
    {{0, 0, 0, 0, 1, 0, 0}, -27.4707},
    {{0, 0, 0, 0, 1, 0, 2}, -106566.0},
    {{1, 0, 0, 0, 1, 0, 0}, 54274.0},
    {{2, 0, 0, 0, 1, 0, 0}, -241366000.0},
    {{0, 1, 0, 0, 1, 0, 1}, -3383.0},
    {{0, 2, 0, 0, 1, 0, 0}, -106593.0},
    {{0, 0, 1, 0, 1, 0, 0}, 41357.0},
    {{1, 0, 1, 0, 1, 0, 0}, -367527000.0},
    {{0, 0, 2, 0, 1, 0, 0}, -139954000.0},
    {{0, 0, 0, 1, 1, 0, 1}, 160275.0},
    {{0, 1, 0, 1, 1, 0, 0}, 163034.0},
    {{0, 0, 0, 2, 1, 0, 0}, -166829.0},
    {{0, 0, 0, 0, 2, 0, 0}, 27172.4},
    {{1, 0, 0, 0, 2, 0, 0}, -241366000.0},
    {{0, 0, 1, 0, 2, 0, 0}, -183843000.0},
    {{0, 0, 0, 0, 3, 0, 0}, -80525300.0},
    {{0, 1, 0, 0, 0, 1, 0}, 1.14156},
    {{1, 1, 0, 0, 0, 1, 0}, -3383.0},
    {{0, 1, 1, 0, 0, 1, 0}, -2790.3},
    {{0, 0, 0, 1, 0, 1, 0}, 54.0829},
    {{1, 0, 0, 1, 0, 1, 0}, -160490.0},
    {{0, 0, 1, 1, 0, 1, 0}, -121973.0},
    {{0, 1, 0, 0, 1, 1, 0}, -3383.0},
    {{0, 0, 0, 1, 1, 1, 0}, -160275.0},
    {{0, 0, 0, 0, 0, 2, 0}, 35.9596},
    {{1, 0, 0, 0, 0, 2, 0}, -106566.0},
    {{0, 0, 1, 0, 0, 2, 0}, -81099.4},
    {{0, 0, 0, 0, 1, 2, 0}, -106566.0},
};

const std::vector<GoldenTerm> kZJetTable = {
    {{0, 0, 0, 0, 0, 0}, -1.50399},
    {{0, 0, 0, 0, 0, 2}, 1.28663},
    {{1, 0, 0, 0, 0, 0}, -1.0},
    {{1, 0, 0, 0, 0, 2}, -5.16029},
    {{2, 0, 0, 0, 0, 0}, 2.67381},
    {{3, 0, 0, 0, 0, 0}, -10.7239},
    {{0, 1, 0, 0, 0, 1}, 0.0844526},
    {{1, 1, 0, 0, 0, 1}, 0.0167138},
    {{0, 2, 0, 0, 0, 0}, 1.22118},
    {{1, 2, 0, 0, 0, 0}, -4.71443},
    {{0, 0, 1, 0, 0, 0}, -0.751996},
    {{0, 0, 1, 0, 0, 2}, -0.799416},
    {{1, 0, 1, 0, 0, 0}, 2.0107},
    {{2, 0, 1, 0, 0, 0}, 2.78895},
    {{0, 1, 1, 0, 0, 1}, -6.31043},
    {{0, 2, 1, 0, 0, 0}, -2.56426},
    {{0, 0, 2, 0, 0, 0}, 0.673811},
    {{1, 0, 2, 0, 0, 0}, 5.45915},
    {{0, 0, 3, 0, 0, 0}, 0.681032},
    {{0, 0, 0, 1, 0, 1}, -1.93507},
    {{1, 0, 0, 1, 0, 1}, 14.6832},
    {{0, 1, 0, 1, 0, 0}, -1.8878},
    {{1, 1, 0, 1, 0, 0}, -0.0867515},
    {{0, 0, 1, 1, 0, 1}, 0.902415},
    {{0, 1, 1, 1, 0, 0}, 3.0885},
    {{0, 0, 0, 2, 0, 0}, 1.94383},
    {{1, 0, 0, 2, 0, 0}, -13.0016},
    {{0, 0, 1, 2, 0, 0}, -2.78224},
    {{0, 0, 0, 0, 1, 1}, 0.043608},
    {{1, 0, 0, 0, 1, 1}, -0.530329},
    {{0, 1, 0, 0, 1, 0}, 0.0387346},
    {{1, 1, 0, 0, 1, 0}, -0.160995},
    {{0, 0, 1, 0, 1, 1}, 1.16741},
    {{0, 1, 1, 0, 1, 0}, -7.39926},
    {{0, 0, 0, 1, 1, 0}, 1.7915},
    {{1, 0, 0, 1, 1, 0}, -14.4187},
    {{0, 0, 1, 1, 1, 0}, -4.96467},
    {{0, 0, 0, 0, 2, 0}, 1.22016},
    {{1, 0, 0, 0, 2, 0}, -5.07144},
    {{0, 0, 1, 0, 2, 0}, -2.46712},
};

Goldens build_reference() {
  Goldens g;
  g.s_text = "0.249";
  g.t_jet = {{"x", "X", "y", "Y", "z", "Z", "T"}, kTJetTable,
             "coefficient times total degree factorial; displacements from the fixed point"};
  g.z_jet = {{"x", "X", "y", "Y", "Z", "T"}, kZJetTable,
             "coefficient times total degree factorial; constant is z0 + x0 and the linear x term is the bare -x"};
  using C = Complex;
  g.alpha = {{{C(0.00552244, -0.0340402), C(0.0107941, -0.000895037), C(1.27133, 2.0689)},
              {C(-0.200044, -0.525768), C(-0.327311, -0.329913), C(-0.800469, -0.841658)},
              {C(-4.01094, -2.67688), C(-8.79221, -8.77867), C(250.545, 281.496)}}};
  g.alpha_det = C(-20.077, -0.73655);
  g.level = {{{-3, 12, 0, -24, 16}, {-1, 4, 8, -24, 16}}, {1, -8, 24, -32, 16}, "printed level of the SU(3) fixed line"};
  g.su2_commutator = {{{2}, {-1, 4, 2, -12, 8}}, {1, -4, 4}, "printed trace of [A(s), B(s)]"};
  g.su3_commutator = {{{3, -24, 24, 192, -448, 64, 704, -768, 256}}, {1, -8, 24, -32, 16},
                      "printed trace of the commutator of the symmetric squares"};
  const RationalFormula zero{{{0}}, {1}, "printed fixed line"};
  const RationalFormula x{{{-1, 0, 4}}, {1}, "printed fixed line"};
  const RationalFormula y{{{-1, 4}}, {1, -4, 4}, "printed fixed line"};
  g.fixed_line = {x, zero, y, zero, x, zero, y, zero, zero};
  g.torus_cover_eigenvalues = {(3 + std::sqrt(5.0)) / 2, (3 - std::sqrt(5.0)) / 2};
  g.origin_jets = "printed third-order jets of t and z at s = 0.249";
  g.origin_alpha = "printed alpha matrix and determinant at s = 0.249 (eigenvector normalization unknown)";
  return g;
}

ExactJet univariate(const std::vector<long>& coeffs) {
  ExactJet out(1, kPolyTrunc);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != 0)
      out += ExactJet::from_terms(1, kPolyTrunc, {{MultiIndex({static_cast<int>(k)}), Rational(coeffs[k])}});
  return out;
}

nlohmann::json formula_json(const RationalFormula& f) {
  return {{"numerator_factors", f.numerator_factors}, {"denominator", f.denominator}, {"origin", f.origin}};
}

RationalFormula formula_from(const nlohmann::json& j) {
  return {j.at("numerator_factors").get<std::vector<std::vector<long>>>(), j.at("denominator").get<std::vector<long>>(),
          j.at("origin").get<std::string>()};
}

nlohmann::json jet_json(const JetGolden& g) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : g.terms) terms.push_back({{"exps", t.exponents}, {"value", t.value}});
  return {{"variables", g.variables}, {"convention", g.convention}, {"terms", terms}};
}

JetGolden jet_from(const nlohmann::json& j) {
  JetGolden g;
  g.variables = j.at("variables").get<std::vector<std::string>>();
  g.convention = j.at("convention").get<std::string>();
  for (const auto& t : j.at("terms")) g.terms.push_back({t.at("exps").get<std::vector<int>>(), t.at("value").get<double>()});
  return g;
}

nlohmann::json complex_json(Complex c) { return {{"re", c.real()}, {"im", c.imag()}}; }
Complex complex_from(const nlohmann::json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

double rel_error(double expected, double actual) {
  return std::abs(actual - expected) / std::max(std::abs(expected), 1e-300);
}

}  // namespace

Rational Goldens::s() const {
  // Decimal text to an exact rational.
  const auto dot = s_text.find('.');
  if (dot == std::string::npos) return Rational(s_text);
  std::string digits = s_text.substr(0, dot) + s_text.substr(dot + 1);
  Rational r(mpz_class(digits, 10), mpz_class("1" + std::string(s_text.size() - dot - 1, '0'), 10));
  r.canonicalize();
  return r;
}

const Goldens& reference_goldens() {
  static const Goldens g = build_reference();
  return g;
}

nlohmann::json to_json(const Goldens& g) {
  nlohmann::json alpha = nlohmann::json::array();
  for (const auto& row : g.alpha) {
    nlohmann::json r = nlohmann::json::array();
    for (Complex c : row) r.push_back(complex_json(c));
    alpha.push_back(r);
  }
  nlohmann::json fixed = nlohmann::json::array();
  for (const auto& f : g.fixed_line) fixed.push_back(formula_json(f));
  return {{"schema", "charvar-goldens/1"},
          {"s", g.s_text},
          {"t_jet", jet_json(g.t_jet)},
          {"z_jet", jet_json(g.z_jet)},
          {"jets_origin", g.origin_jets},
          {"alpha", alpha},
          {"alpha_det", complex_json(g.alpha_det)},
          {"alpha_origin", g.origin_alpha},
          {"level", formula_json(g.level)},
          {"su2_commutator_trace", formula_json(g.su2_commutator)},
          {"su3_commutator_trace", formula_json(g.su3_commutator)},
          {"fixed_line", fixed},
          {"torus_cover_eigenvalues", g.torus_cover_eigenvalues}};
}

Goldens goldens_from_json(const nlohmann::json& j) {
  if (j.at("schema") != "charvar-goldens/1") throw std::runtime_error("goldens: unknown schema");
  Goldens g;
  g.s_text = j.at("s").get<std::string>();
  g.t_jet = jet_from(j.at("t_jet"));
  g.z_jet = jet_from(j.at("z_jet"));
  g.origin_jets = j.at("jets_origin").get<std::string>();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) g.alpha[r][c] = complex_from(j.at("alpha").at(r).at(c));
  g.alpha_det = complex_from(j.at("alpha_det"));
  g.origin_alpha = j.at("alpha_origin").get<std::string>();
  g.level = formula_from(j.at("level"));
  g.su2_commutator = formula_from(j.at("su2_commutator_trace"));
  g.su3_commutator = formula_from(j.at("su3_commutator_trace"));
  for (int k = 0; k < 9; ++k) g.fixed_line[k] = formula_from(j.at("fixed_line").at(k));
  g.torus_cover_eigenvalues = j.at("torus_cover_eigenvalues").get<std::array<double, 2>>();
  return g;
}

void write_goldens(const std::filesystem::path& path, const Goldens& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("goldens: cannot write " + path.string());
  out << to_json(g).dump(2) << '\n';
  if (!out) throw std::runtime_error("goldens: write failed for " + path.string());
}

Goldens read_goldens(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("goldens: cannot read " + path.string());
  return goldens_from_json(nlohmann::json::parse(in));
}

Rational evaluate(const RationalFormula& f, const Rational& s) {
  auto horner = [&](const std::vector<long>& c) {
    Rational v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + Rational(*it);
    return v;
  };
  Rational num = 1;
  for (const auto& factor : f.numerator_factors) num *= horner(factor);
  const Rational den = horner(f.denominator);
  if (den == 0) throw std::domain_error("evaluate: pole");
  return num / den;
}

RationalFunction to_rational_function(const RationalFormula& f) {
  ExactJet num = ExactJet::constant(1, kPolyTrunc, Rational(1));
  for (const auto& factor : f.numerator_factors) num = num * univariate(factor);
  return {num, univariate(f.denominator)};
}

GoldenComparison compare_chart_goldens(const ChartSpec& spec, const ChartJet& chart, const Goldens& g,
                                       double rel_tol) {
  GoldenComparison cmp;
  const double x0 = spec.center[kx].get_d();
  auto check = [&](const std::string& name, const ComplexJet& jet, const GoldenTerm& t, double shift) {
    const MultiIndex m(t.exponents);
    const double actual = factorial_scaled_coefficient(jet, m) + (m.degree() == 0 ? shift : 0.0);
    const double err = rel_error(t.value, actual);
    ++cmp.checked;
    cmp.worst_rel_error = std::max(cmp.worst_rel_error, err);
    if (!(err <= rel_tol)) cmp.failures.push_back({name, t.exponents, t.value, actual, err});
  };
  for (const auto& t : g.t_jet.terms) check("t", chart.t_jet7, t, 0.0);
  for (const auto& t : g.z_jet.terms) check("z", chart.z_jet, t, x0);
  return cmp;
}

}  // namespace charvar
