#pragma once

#include <Eigen/Dense>

#include <array>

#include "charvar/mcg_action.hpp"

namespace charvar {

class ChartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Chart at a point of the SU(3) fixed line: t is eliminated through P/2 = ℓ,
// then z through H = 0. Chart variables are displacements of (x,X,y,Y,Z,T).
struct ChartSpec {
  Rational s;
  Su3Tuple<Rational> center;
  Rational level;
  int trunc_degree = 3;
  // Sign in front of the square root; fixed by requiring t(center) = t0.
  int sqrt_branch = 0;

  static ChartSpec at(const Rational& s, int trunc_degree = 3);
};

// Positions of the chart variables and of the 7 variables seen by the t-jet
// inside the 8 unitary coordinates.
inline constexpr std::array<int, 6> kChartVars = {kx, kX, ky, kY, kZ, kT};
inline constexpr std::array<int, 7> kTJetVars = {kx, kX, ky, kY, kz, kZ, kT};

struct ChartJet {
  ComplexJet t_jet7;  // t over (x,X,y,Y,z,Z,T); constant term t0
  ComplexJet z_jet;   // z over the chart; constant term z0
  ComplexJet t_jet;   // t over the chart after substituting z_jet
  ComplexJetVector map_jet;
  ComplexJet level_residual;  // P/2 - ℓ after both substitutions
  ComplexJet h_residual;      // H after both substitutions
  int sqrt_branch = 0;
};

ComplexJet solve_t(const ChartSpec& spec);
ComplexJet solve_z_implicit(const ChartSpec& spec, const ComplexJet& t_jet7);
ChartJet chart_map_jet(const ChartSpec& spec);

// Full-precision evaluation of the chart: solve P/2 = ℓ, H = 0 for (t, z) by
// Newton from the jet prediction, apply the 9-variable map, project.
Su3Tuple<double> lift_chart_point(const ChartSpec& spec, const ChartJet& chart, const std::array<double, 6>& v);
std::array<double, 6> exact_chart_map(const ChartSpec& spec, const ChartJet& chart, const std::array<double, 6>& v);

// Real linear part of a map jet, rows = components.
Eigen::MatrixXd linear_part(const ComplexJetVector& map);

// Coefficient times (total degree)!: the convention of the reference tables.
double factorial_scaled_coefficient(const ComplexJet& j, const MultiIndex& m);

// Series helpers: √a and 1/a for jets with nonzero constant term.
ComplexJet jet_sqrt(const ComplexJet& a);
ComplexJet jet_reciprocal(const ComplexJet& a);

// Root with zero constant term of a·r^2 + b·r + c = 0 where c(0) = 0; also
// reports the sign used in front of the square root.
struct QuadraticRoot {
  ComplexJet root;
  int branch = 0;
  double radicand_at_center = 0;
};
QuadraticRoot vanishing_quadratic_root(const ComplexJet& a, const ComplexJet& b, const ComplexJet& c);

// Exact recentering p(center + w).
ExactJet recenter(const ExactJet& p, const std::vector<Rational>& center);

// SU(2) chart at a point of the fixed family: x is eliminated through κ = ℓ;
// chart variables are displacements of (y, z).
struct Su2Chart {
  Rational s;
  Su2Tuple<Rational> center;
  Rational level;
  ComplexJet x_jet;
  ComplexJetVector map_jet;
  ComplexJet level_residual;
};
Su2Chart su2_chart_map_jet(const Rational& s, int trunc_degree = 3);

}  // namespace charvar
