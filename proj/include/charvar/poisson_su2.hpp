#pragma once

#include <array>
#include <stdexcept>

#include "charvar/char_variety.hpp"
#include "charvar/jet.hpp"

namespace charvar {

class PoissonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Polynomials in (x, y, z) = (tr a, tr b, tr ab).
inline constexpr int kPoissonVars = 3;

ExactJet poisson_variable(int var);
ExactJet poisson_constant(const Rational& c);
ExactJet kappa_polynomial();

struct PoissonBivector {
  std::array<std::array<ExactJet, 3>, 3> entries;

  static PoissonBivector su2();
  const ExactJet& operator()(int i, int j) const { return entries.at(i).at(j); }
  bool antisymmetric() const;
  std::array<std::array<double, 3>, 3> at(const Su2Point& p) const;
};

// {f, g} = Σ_ij a_ij ∂_i f ∂_j g.
ExactJet bracket(const ExactJet& f, const ExactJet& g);

// Coefficient 2/(2x − yz) of dy∧dz on the symplectic leaf through p.
double leaf_symplectic_form(const Su2Point& p);

}  // namespace charvar
