#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "charvar/jet.hpp"
#include "charvar/local_chart.hpp"
#include "json.hpp"

namespace charvar {

struct GoldenTerm {
  std::vector<int> exponents;
  double value = 0;
  friend bool operator==(const GoldenTerm&, const GoldenTerm&) = default;
};

struct JetGolden {
  std::vector<std::string> variables;
  std::vector<GoldenTerm> terms;
  std::string convention;
  friend bool operator==(const JetGolden&, const JetGolden&) = default;
};

// Univariate rational function in s; each list is low-to-high coefficients and
// the numerator is the product of its factors.
struct RationalFormula {
  std::vector<std::vector<long>> numerator_factors;
  std::vector<long> denominator;
  std::string origin;
  friend bool operator==(const RationalFormula&, const RationalFormula&) = default;
};

struct Goldens {
  std::string s_text;
  JetGolden t_jet;
  JetGolden z_jet;
  std::array<std::array<Complex, 3>, 3> alpha{};
  Complex alpha_det;
  RationalFormula level;
  RationalFormula su2_commutator;
  RationalFormula su3_commutator;
  std::array<RationalFormula, 9> fixed_line;  // (x, X, y, Y, z, Z, t, T, U)
  std::array<double, 2> torus_cover_eigenvalues{};
  std::string origin_jets;
  std::string origin_alpha;

  Rational s() const;
  friend bool operator==(const Goldens&, const Goldens&) = default;
};

const Goldens& reference_goldens();

nlohmann::json to_json(const Goldens& g);
Goldens goldens_from_json(const nlohmann::json& j);
void write_goldens(const std::filesystem::path& path, const Goldens& g = reference_goldens());
Goldens read_goldens(const std::filesystem::path& path);

// Exact evaluation of a stored formula.
Rational evaluate(const RationalFormula& f, const Rational& s);
RationalFunction to_rational_function(const RationalFormula& f);

struct GoldenMismatch {
  std::string jet;
  std::vector<int> exponents;
  double expected = 0;
  double actual = 0;
  double rel_error = 0;
};

struct GoldenComparison {
  int checked = 0;
  double worst_rel_error = 0;
  std::vector<GoldenMismatch> failures;
  bool ok() const { return checked > 0 && failures.empty(); }
};

// Compares factorial-scaled chart jet coefficients with the stored tables. The
// z table prints its constant as z0 + x0 together with a bare -x term.
GoldenComparison compare_chart_goldens(const ChartSpec& spec, const ChartJet& chart, const Goldens& g,
                                       double rel_tol = 1e-3);

}  // namespace charvar
