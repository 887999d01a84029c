#pragma once

#include <Eigen/Dense>

#include <array>
#include <utility>

#include "charvar/char_variety.hpp"

namespace charvar {

template <class R>
Su2Tuple<R> tau_alpha(const Su2Tuple<R>& p) {
  const auto& [x, y, z] = p;
  return {x, z, x * z - y};
}

template <class R>
Su2Tuple<R> tau_beta_inv(const Su2Tuple<R>& p) {
  const auto& [x, y, z] = p;
  return {x * y - z, y, x};
}

template <class R>
Su2Tuple<R> tau_beta(const Su2Tuple<R>& p) {
  const auto& [x, y, z] = p;
  return {z, y, z * y - x};
}

template <class R>
Su2Tuple<R> cat_map_su2(const Su2Tuple<R>& p) {
  const auto& [x, y, z] = p;
  const R y1 = z * y - x;
  return {z, y1, z * y1 - y};
}

Su2Point tau_alpha(const Su2Point& p);
Su2Point tau_beta_inv(const Su2Point& p);
Su2Point tau_beta(const Su2Point& p);
Su2Point cat_map_su2(const Su2Point& p);

template <class R>
Su3Tuple<R> cat_map_su3(const Su3Tuple<R>& v) {
  const auto& [x, X, y, Y, z, Z, t, T, U] = v;
  const R xy = x * y, XY = X * Y, yz = y * z, YZ = Y * Z, zz = z * z, ZZ = Z * Z;
  const R two_zZ = z * Z + z * Z;
  return {
      z,
      Z,
      t - xy - XY + yz - YZ,
      T - X * y + x * Y + Y * z + y * Z,
      x + t * z - yz - xy * z - XY * z + y * zz - T * Z + X * y * Z - YZ - x * Y * Z - Y * two_zZ - y * ZZ,
      -X + T * z - X * yz - Y * z + x * Y * z + Y * zz + t * Z + y * Z - xy * Z - XY * Z + y * two_zZ - Y * ZZ,
      y,
      -Y,
      U,
  };
}

Su3Point cat_map_su3(const Su3Point& p);

// A polynomial self-map given by exact component polynomials.
struct PolyAutomorphism {
  int arity = 0;
  ExactJetVector components;
};

PolyAutomorphism tau_alpha_polynomial();
PolyAutomorphism tau_beta_polynomial();
PolyAutomorphism cat_map_su2_polynomial();
PolyAutomorphism cat_map_su3_polynomial();
// second ∘ first: apply first, then second.
PolyAutomorphism then(const PolyAutomorphism& second, const PolyAutomorphism& first);

using Vec3 = std::array<double, 3>;
enum class SphereGenerator { tau_alpha, tau_beta_inv, cat_map };

struct DirectionImage {
  Vec3 direction;
  bool renormalized = false;
};

Eigen::Matrix3d sphere_matrix(SphereGenerator g);
DirectionImage sphere_action(SphereGenerator g, const Vec3& d);

// Family of SU(2) fixed points parameterized by s = Re(eigenvalue of A).
Su2Tuple<Rational> fixed_family_su2(const Rational& s);
Su2Point fixed_family_su2(double s);
// 1 - |u|^2 for the B(s) matrix; must be >= 0 for the family to be realizable.
Rational family_v_squared(const Rational& s);

struct FixedPointSample {
  Rational s;
  Su2Tuple<Rational> su2;
  Su3Tuple<Rational> su3;
  Rational level;

  Su3Point su3_point() const;
};

FixedPointSample fixed_family_su3(const Rational& s);

template <class R>
R level_of_s(const R& s) {
  const R one(1), two(2), three(3), four(4);
  const R a = -three + four * s * (three - R(6) * s * s + four * s * s * s);
  const R b = -one + four * s * (one + two * (s - one) * s * (two * s - one));
  const R w = one - two * s;
  const R w2 = w * w;
  return a * b / (w2 * w2);
}

double level_of_s(double s);
Rational level_of_s(const Rational& s);

// Commutator traces of the SU(2) family and of its symmetric square, written as
// closed rational functions in s.
Rational su2_commutator_trace(const Rational& s);
Rational su3_commutator_trace(const Rational& s);
double su3_commutator_trace(double s);

// Numerator and denominator as univariate polynomials (1-variable exact jets).
struct RationalFunction {
  ExactJet numerator;
  ExactJet denominator;
};
RationalFunction level_rational_function();
RationalFunction su3_commutator_rational_function();
RationalFunction su2_commutator_rational_function();
bool same_rational_function(const RationalFunction& a, const RationalFunction& b);

// Endpoints of the s-interval around 0 on which the SU(3) commutator trace
// stays above -1.
std::pair<double, double> realizable_interval();

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> family_matrices(double s);
Eigen::Matrix3cd symmetric_square(const Eigen::Matrix2cd& m);

// Least-norm Gauss-Newton iteration onto the fixed set of the SU(3) cat map.
Su3Tuple<double> refine_fixed_point_su3(const Su3Tuple<double>& seed, int max_iter = 50);

// Linear map L with M(T(θ)) = T(Lθ) for the torus cover T(θ) = 2(cos θ1, cos θ2, cos(θ1+θ2))
// of the κ = 2 level, recovered from Jacobians at a generic θ.
Eigen::Matrix2d torus_cover_linearization(double theta1, double theta2);

}  // namespace charvar
