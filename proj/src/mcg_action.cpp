#include "charvar/mcg_action.hpp"

#include <optional>

#include <cmath>

namespace charvar {

namespace {

Su2Tuple<double> tup(const Su2Point& p) { return {p.x, p.y, p.z}; }
Su2Point pt(const Su2Tuple<double>& v) { return {v[0], v[1], v[2]}; }

template <int N>
std::array<ExactJet, N> poly_vars() {
  std::array<ExactJet, N> v;
  for (int i = 0; i < N; ++i) v[i] = ExactJet::variable(N, kPolyTrunc, i);
  return v;
}

template <std::size_t N>
PolyAutomorphism as_automorphism(const std::array<ExactJet, N>& comps) {
  return {static_cast<int>(N), ExactJetVector(std::vector<ExactJet>(comps.begin(), comps.end()))};
}

ExactJet univariate(std::initializer_list<long> coeffs_low_to_high) {
  std::vector<std::pair<MultiIndex, Rational>> terms;
  int k = 0;
  for (long c : coeffs_low_to_high) {
    if (c != 0) terms.push_back({MultiIndex({k}), Rational(c)});
    ++k;
  }
  return ExactJet::from_terms(1, kPolyTrunc, terms);
}

ExactJet power(const ExactJet& a, int k) {
  ExactJet r = ExactJet::constant(a.num_vars(), a.trunc_degree(), Rational(1));
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

Rational check_pole(const Rational& s) {
  if (s == Rational(1, 2)) throw VarietyError("fixed-point family has a pole at s = 1/2");
  return s;
}

}  // namespace

Su2Point tau_alpha(const Su2Point& p) { return pt(tau_alpha(tup(p))); }
Su2Point tau_beta_inv(const Su2Point& p) { return pt(tau_beta_inv(tup(p))); }
Su2Point tau_beta(const Su2Point& p) { return pt(tau_beta(tup(p))); }
Su2Point cat_map_su2(const Su2Point& p) { return pt(cat_map_su2(tup(p))); }

Su3Point cat_map_su3(const Su3Point& p) {
  Su3Point r = Su3Point::from_tuple(cat_map_su3(p.tuple()));
  r.branch = p.branch;
  return r;
}

PolyAutomorphism tau_alpha_polynomial() { return as_automorphism(tau_alpha(poly_vars<3>())); }
PolyAutomorphism tau_beta_polynomial() { return as_automorphism(tau_beta(poly_vars<3>())); }
PolyAutomorphism cat_map_su2_polynomial() { return as_automorphism(cat_map_su2(poly_vars<3>())); }
PolyAutomorphism cat_map_su3_polynomial() { return as_automorphism(cat_map_su3(poly_vars<9>())); }

PolyAutomorphism then(const PolyAutomorphism& second, const PolyAutomorphism& first) {
  if (second.arity != first.arity) throw VarietyError("composition of maps with different arity");
  return {first.arity, compose(second.components, first.components)};
}

Eigen::Matrix3d sphere_matrix(SphereGenerator g) {
  Eigen::Matrix3d m;
  switch (g) {
    case SphereGenerator::tau_alpha:
      m << 1, 0, 0, 0, 0, 1, 0, -1, 0;
      break;
    case SphereGenerator::tau_beta_inv:
      m << 0, 0, -1, 0, 1, 0, 1, 0, 0;
      break;
    case SphereGenerator::cat_map:
      m << 0, 0, 1, -1, 0, 0, 0, -1, 0;
      break;
  }
  return m;
}

DirectionImage sphere_action(SphereGenerator g, const Vec3& d) {
  Eigen::Vector3d v(d[0], d[1], d[2]);
  const double n = v.norm();
  if (n == 0.0) throw VarietyError("sphere action: zero direction");
  DirectionImage out;
  if (std::abs(n - 1.0) > 1e-12) {
    v /= n;
    out.renormalized = true;
  }
  const Eigen::Vector3d w = sphere_matrix(g) * v;
  out.direction = {w[0], w[1], w[2]};
  return out;
}

Rational family_v_squared(const Rational& s_in) {
  const Rational s = canonical(s_in);
  const Rational w = 2 * s - 1;
  return 1 - 2 * s * s / ((s + 1) * w * w);
}

Su2Tuple<Rational> fixed_family_su2(const Rational& s_in) {
  const Rational s = canonical(s_in);
  check_pole(s);
  if (abs(s) >= 1) throw VarietyError("fixed-point family needs |s| < 1");
  if (sgn(family_v_squared(s)) < 0) throw VarietyError("fixed-point family is not realizable in SU(2) at this s");
  const Rational x = 2 * s;
  return {x, Rational(x / (2 * s - 1)), x};
}

Su2Point fixed_family_su2(double s) {
  const auto v = fixed_family_su2(Rational(s));
  return {v[0].get_d(), v[1].get_d(), v[2].get_d()};
}

FixedPointSample fixed_family_su3(const Rational& s_in) {
  const Rational s = canonical(s_in);
  check_pole(s);
  const Rational a = -1 + 4 * s * s;
  const Rational w = 1 - 2 * s;
  const Rational b = -1 + 4 * s * s / (w * w);
  FixedPointSample f;
  f.s = s;
  f.su2 = {2 * s, Rational(2 * s / (2 * s - 1)), 2 * s};
  f.su3 = {a, 0, b, 0, a, 0, b, 0, 0};
  f.level = level_of_s(s);
  return f;
}

Su3Point FixedPointSample::su3_point() const {
  Su3Tuple<double> v;
  for (int i = 0; i < 9; ++i) v[i] = su3[i].get_d();
  return Su3Point::from_tuple(v);
}

double level_of_s(double s) {
  if (s == 0.5) throw VarietyError("level function has a pole at s = 1/2");
  return level_of_s<double>(s);
}

Rational level_of_s(const Rational& s) { return level_of_s<Rational>(check_pole(s)); }

Rational su2_commutator_trace(const Rational& s) {
  check_pole(s);
  const Rational w = 1 - 2 * s;
  const Rational s2 = s * s;
  return 2 * (8 * s2 * s2 - 12 * s2 * s + 2 * s2 + 4 * s - 1) / (w * w);
}

namespace {

template <class R>
R octic(const R& s) {
  static constexpr long c[] = {3, -24, 24, 192, -448, 64, 704, -768, 256};
  R acc(0);
  for (int k = 8; k >= 0; --k) acc = acc * s + R(c[k]);
  return acc;
}

}  // namespace

Rational su3_commutator_trace(const Rational& s) {
  check_pole(s);
  const Rational w = 1 - 2 * s;
  const Rational w2 = w * w;
  return octic(s) / (w2 * w2);
}

double su3_commutator_trace(double s) {
  const double w = 1 - 2 * s;
  return octic(s) / (w * w * w * w);
}

RationalFunction level_rational_function() {
  const ExactJet s = ExactJet::variable(1, kPolyTrunc, 0);
  const ExactJet one = ExactJet::constant(1, kPolyTrunc, 1);
  const ExactJet a = Rational(-3) * one + Rational(4) * s * (Rational(3) * one - Rational(6) * s * s + Rational(4) * s * s * s);
  const ExactJet b = -one + Rational(4) * s * (one + Rational(2) * (s - one) * s * (Rational(2) * s - one));
  return {a * b, power(one - Rational(2) * s, 4)};
}

RationalFunction su3_commutator_rational_function() {
  return {univariate({3, -24, 24, 192, -448, 64, 704, -768, 256}), power(univariate({1, -2}), 4)};
}

RationalFunction su2_commutator_rational_function() {
  return {univariate({-2, 8, 4, -24, 16}), power(univariate({1, -2}), 2)};
}

bool same_rational_function(const RationalFunction& a, const RationalFunction& b) {
  return a.numerator * b.denominator == b.numerator * a.denominator;
}

std::pair<double, double> realizable_interval() {
  // trace + 1 = G/den touches zero (double root of G), so bisect on G'.
  const RationalFunction f = su3_commutator_rational_function();
  const ExactJet G = f.numerator + f.denominator;
  const ExactJet dG = derivative(G, 0);
  auto at = [&](double s) { return evaluate(dG, std::span<const double>(&s, 1)); };
  auto bisect = [&](double lo, double hi) {
    const bool neg_lo = at(lo) < 0;
    if (neg_lo == (at(hi) < 0)) throw VarietyError("realizable_interval: bracket lost");
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((at(mid) < 0) == neg_lo ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return {bisect(-0.6, -0.5), bisect(0.25, 0.27)};
}

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> family_matrices(double s) {
  if (s == 0.5 || std::abs(s) >= 1.0) throw VarietyError("family matrices need |s| < 1, s != 1/2");
  const double im_r = std::sqrt(1 - s * s);
  const Complex r(s, im_r);
  const double w = 2 * s - 1;
  const Complex u(s / w, s * (1 - s) / (w * im_r));
  const double v2 = 1 - 2 * s * s / (4 * s * s * s - 3 * s + 1);
  if (v2 < 0) throw VarietyError("family matrices: s is not realizable");
  const double v = std::sqrt(v2);
  Eigen::Matrix2cd A, B;
  A << r, 0, 0, std::conj(r);
  B << u, -v, v, std::conj(u);
  return {A, B};
}

Eigen::Matrix3cd symmetric_square(const Eigen::Matrix2cd& m) {
  const Complex a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  Eigen::Matrix3cd r;
  r << a * a, a * b, b * b, 2.0 * a * c, a * d + b * c, 2.0 * b * d, c * c, c * d, d * d;
  return r;
}

Su3Tuple<double> refine_fixed_point_su3(const Su3Tuple<double>& seed, int max_iter) {
  Su3Tuple<double> p = seed;
  for (int it = 0; it < max_iter; ++it) {
    Su3Tuple<ComplexJet> v;
    for (int i = 0; i < 9; ++i) v[i] = ComplexJet::constant(9, 1, p[i]) + ComplexJet::variable(9, 1, i);
    const auto img = cat_map_su3(v);
    Eigen::MatrixXd J(9, 9);
    Eigen::VectorXd F(9);
    for (int i = 0; i < 9; ++i) {
      F[i] = img[i].constant_term().real() - p[i];
      for (int j = 0; j < 9; ++j) J(i, j) = img[i].coeff(MultiIndex::unit(9, j)).real() - (i == j ? 1.0 : 0.0);
    }
    if (F.norm() < 1e-15) break;
    const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(F);
    for (int i = 0; i < 9; ++i) p[i] -= step[i];
  }
  return p;
}

namespace {

Eigen::Matrix<double, 3, 2> torus_jacobian(double t1, double t2) {
  Eigen::Matrix<double, 3, 2> dT;
  dT << -2 * std::sin(t1), 0, 0, -2 * std::sin(t2), -2 * std::sin(t1 + t2), -2 * std::sin(t1 + t2);
  return dT;
}

}  // namespace

Eigen::Matrix2d torus_cover_linearization(double theta1, double theta2) {
  const double x = 2 * std::cos(theta1), y = 2 * std::cos(theta2), z = 2 * std::cos(theta1 + theta2);
  // Jacobian of M(x,y,z) = (z, zy - x, z(zy - x) - y).
  const double y1 = z * y - x;
  Eigen::Matrix3d dM;
  dM << 0, 0, 1, -1, z, y, -z, z * z - 1, y1 + z * y;
  const Eigen::Vector3d img(z, y1, z * y1 - y);
  if (std::abs(img[0]) >= 2 || std::abs(img[1]) >= 2) throw VarietyError("torus cover: image is not generic");
  const Eigen::Matrix<double, 3, 2> lhs = dM * torus_jacobian(theta1, theta2);

  // The image angle is fixed up to the deck involution θ -> -θ; the lift with
  // positive trace is the linear action of the mapping class itself.
  const double a1 = std::acos(img[0] / 2), a2 = std::acos(img[1] / 2);
  std::optional<Eigen::Matrix2d> best;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1}) {
      const double t1 = s1 * a1, t2 = s2 * a2;
      if (std::abs(2 * std::cos(t1 + t2) - img[2]) > 1e-8) continue;
      const Eigen::Matrix<double, 3, 2> dT = torus_jacobian(t1, t2);
      const Eigen::Matrix2d L = dT.completeOrthogonalDecomposition().solve(lhs);
      if ((dT * L - lhs).norm() > 1e-8 * (1 + lhs.norm())) continue;
      if (!best || L.trace() > best->trace()) best = L;
    }
  if (!best) throw VarietyError("torus cover: no consistent lift");
  return *best;
}

}  // namespace charvar
