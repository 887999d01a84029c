#pragma once

#include <array>
#include <string_view>

#include "charvar/jet.hpp"

namespace charvar {

// Truncation degree used for jets that stand in for honest polynomials.
// Every identity check asserts the result stays strictly below it.
inline constexpr int kPolyTrunc = 24;

class VarietyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class R>
using Su2Tuple = std::array<R, 3>;

// Traces of a, b, ab for an SU(2) representation.
struct Su2Point {
  double x = 0;
  double y = 0;
  double z = 0;
};

template <class R>
R kappa(const R& x, const R& y, const R& z) {
  return x * x + y * y + z * z - x * y * z - R(2);
}

double kappa_su2(const Su2Point& p);
bool su2_member(const Su2Point& p);

// Unitary coordinates: real and imaginary parts of tr a, tr b, tr ab, tr ab^-1,
// then Im of the commutator trace. Index order used by every 9-tuple.
enum Su3Var : int { kx = 0, kX, ky, kY, kz, kZ, kt, kT, kU };

template <class R>
using Su3Tuple = std::array<R, 9>;

struct Su3Point {
  double x = 0, X = 0, y = 0, Y = 0, z = 0, Z = 0, t = 0, T = 0, U = 0;
  // Branch of Im(commutator trace) used when U itself is zero.
  int branch = 1;

  Su3Tuple<double> tuple() const { return {x, X, y, Y, z, Z, t, T, U}; }
  static Su3Point from_tuple(const Su3Tuple<double>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
  }
  double u() const;
};

// A point ζ + iη of the trace region; η = 0 for SU(2) levels.
struct LevelValue {
  double zeta = 0;
  double eta = 0;
};

// P, Q and H = (P/2)^2 - Q in the 8 real variables (x,X,y,Y,z,Z,t,T).
const ExactJet& poly_P();
const ExactJet& poly_Q();
const ExactJet& poly_H();

// Expansion of a polynomial printed in trace / inverse-trace letters after
// substituting tr = re + i im, tr^-1 = re - i im.
struct UnitaryExpansion {
  ExactJet real;
  ExactJet imag;
};
UnitaryExpansion expand_unitary(std::string_view trace_polynomial);
std::string_view printed_P_text();
std::string_view printed_Q_text();

double evaluate(const ExactJet& poly, std::span<const double> point);
Rational evaluate(const ExactJet& poly, std::span<const Rational> point);

double P_value(const Su3Point& p);
double Q_value(const Su3Point& p);
double H_value(const Su3Point& p);

bool on_variety(const Su3Point& p, double tol = 1e-9);
LevelValue boundary_map_su3(const Su3Point& p, double tol = 1e-9);

// Trace region of SU(3): |τ|^4 - 8 Re τ^3 + 18 |τ|^2 - 27 <= 0, the
// discriminant condition for λ^3 - τλ^2 + conj(τ)λ - 1 to have unimodular roots.
double deltoid_discriminant(const LevelValue& v);
bool in_deltoid(const LevelValue& v, double tol = 1e-9);

}  // namespace charvar
