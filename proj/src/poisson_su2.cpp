#include "charvar/poisson_su2.hpp"

#include <cmath>

namespace charvar {

ExactJet poisson_variable(int var) { return ExactJet::variable(kPoissonVars, kPolyTrunc, var); }

ExactJet poisson_constant(const Rational& c) { return ExactJet::constant(kPoissonVars, kPolyTrunc, c); }

ExactJet kappa_polynomial() {
  const ExactJet x = poisson_variable(0), y = poisson_variable(1), z = poisson_variable(2);
  return x * x + y * y + z * z - x * y * z - poisson_constant(2);
}

PoissonBivector PoissonBivector::su2() {
  const ExactJet x = poisson_variable(0), y = poisson_variable(1), z = poisson_variable(2);
  const Rational half(1, 2);
  PoissonBivector b;
  for (auto& row : b.entries) row.fill(ExactJet(kPoissonVars, kPolyTrunc));
  b.entries[0][1] = x * y * half - z;
  b.entries[0][2] = y - x * z * half;
  b.entries[1][2] = y * z * half - x;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) b.entries[i][j] = -b.entries[j][i];
  return b;
}

bool PoissonBivector::antisymmetric() const {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!(entries[i][j] == -entries[j][i])) return false;
  return true;
}

std::array<std::array<double, 3>, 3> PoissonBivector::at(const Su2Point& p) const {
  const std::vector<double> pt = {p.x, p.y, p.z};
  std::array<std::array<double, 3>, 3> m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = eval(to_complex(entries[i][j]), std::vector<Complex>(pt.begin(), pt.end())).real();
  return m;
}

ExactJet bracket(const ExactJet& f, const ExactJet& g) {
  if (f.num_vars() != kPoissonVars || g.num_vars() != kPoissonVars)
    throw PoissonError("bracket: polynomials must be in (x, y, z)");
  static const PoissonBivector a = PoissonBivector::su2();
  const int d = std::max(f.trunc_degree(), g.trunc_degree());
  ExactJet out(kPoissonVars, d);
  for (int i = 0; i < 3; ++i) {
    const ExactJet fi = derivative(f, i).with_trunc_degree(d);
    if (fi.is_zero()) continue;
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const ExactJet gj = derivative(g, j).with_trunc_degree(d);
      if (gj.is_zero()) continue;
      out += a(i, j).with_trunc_degree(d) * fi * gj;
    }
  }
  return out;
}

double leaf_symplectic_form(const Su2Point& p) {
  const double den = 2 * p.x - p.y * p.z;
  if (std::abs(den) < 1e-14) throw PoissonError("leaf_symplectic_form: 2x - yz = 0 (coordinate singularity)");
  return 2 / den;
}

}  // namespace charvar
