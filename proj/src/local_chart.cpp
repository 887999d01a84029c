#include "charvar/local_chart.hpp"

#include <cmath>

namespace charvar {

namespace {

// Coefficients of p as a polynomial in `var`, each a jet over the remaining variables.
std::vector<ExactJet> split_by_power(const ExactJet& p, int var) {
  const int n = p.num_vars();
  std::vector<std::vector<std::pair<MultiIndex, Rational>>> buckets;
  for (const auto& t : p.terms()) {
    const MultiIndex mi = p.index_of(t);
    const int e = mi[var];
    if (static_cast<int>(buckets.size()) <= e) buckets.resize(e + 1);
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
      if (i != var) rest.push_back(mi[i]);
    buckets[e].push_back({MultiIndex(rest), t.coeff});
  }
  std::vector<ExactJet> out;
  for (const auto& b : buckets) out.push_back(ExactJet::from_terms(n - 1, p.trunc_degree(), b));
  return out;
}

ComplexJet lowered(const ExactJet& p, int d) { return to_complex(p.with_trunc_degree(d)); }

ComplexJet without_constant(const ComplexJet& j) {
  return j - ComplexJet::constant(j.num_vars(), j.trunc_degree(), j.constant_term());
}

std::vector<Rational> eight_center(const ChartSpec& spec) {
  return std::vector<Rational>(spec.center.begin(), spec.center.begin() + 8);
}

// Series Σ c_k w^k for w with zero constant term.
ComplexJet series_in(const std::vector<Complex>& c, const ComplexJet& w) {
  ComplexJet acc = ComplexJet::constant(w.num_vars(), w.trunc_degree(), c.back());
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k)
    acc = acc * w + ComplexJet::constant(w.num_vars(), w.trunc_degree(), c[k]);
  return acc;
}

struct Eliminated {
  ComplexJet p_disp;  // P recentered, 8 vars
  ComplexJet h_disp;  // H recentered, 8 vars
  QuadraticRoot t_root;  // t - t0 over kTJetVars
};

Eliminated eliminate_t(const ChartSpec& spec) {
  const int d = spec.trunc_degree;
  const ExactJet P = recenter(poly_P(), eight_center(spec));
  const auto parts = split_by_power(P, kt);
  if (parts.size() != 3) throw ChartError("P is not quadratic in t");
  const ExactJet c0 = parts[0] - ExactJet::constant(7, parts[0].trunc_degree(), 2 * spec.level);
  QuadraticRoot r = vanishing_quadratic_root(lowered(parts[2], d), lowered(parts[1], d), lowered(c0, d));
  if (spec.sqrt_branch != 0 && spec.sqrt_branch != r.branch)
    throw ChartError("requested square-root branch does not pass through the center");
  return {lowered(P, d), lowered(recenter(poly_H(), eight_center(spec)), d), std::move(r)};
}

// 8 unitary coordinates as displacement jets over the chart, given dz and dt.
ComplexJetVector chart_inner(int d, const ComplexJet& dz, const ComplexJet& dt) {
  std::vector<ComplexJet> c(8, ComplexJet(6, d));
  for (int i = 0; i < 6; ++i) c[kChartVars[i]] = ComplexJet::variable(6, d, i);
  c[kz] = dz;
  c[kt] = dt;
  return ComplexJetVector(std::move(c));
}

}  // namespace

ChartSpec ChartSpec::at(const Rational& s_in, int trunc_degree) {
  const Rational s = canonical(s_in);
  const FixedPointSample f = fixed_family_su3(s);
  ChartSpec c;
  c.s = s;
  c.center = f.su3;
  c.level = f.level;
  c.trunc_degree = trunc_degree;
  return c;
}

ExactJet recenter(const ExactJet& p, const std::vector<Rational>& center) {
  if (static_cast<int>(center.size()) != p.num_vars()) throw ChartError("recenter: arity mismatch");
  std::vector<ExactJet> inner;
  for (int i = 0; i < p.num_vars(); ++i)
    inner.push_back(ExactJet::constant(p.num_vars(), p.trunc_degree(), center[i]) +
                    ExactJet::variable(p.num_vars(), p.trunc_degree(), i));
  return compose(p, ExactJetVector(std::move(inner)), Recentering::allowed);
}

ComplexJet jet_sqrt(const ComplexJet& a) {
  const Complex c = a.constant_term();
  if (c == Complex{}) throw ChartError("square root of a jet with zero constant term");
  const ComplexJet w = without_constant(a);
  std::vector<Complex> coeffs(a.trunc_degree() + 1);
  const Complex root = std::sqrt(c);
  Complex binom = 1.0;
  Complex cpow = 1.0;
  for (int k = 0; k <= a.trunc_degree(); ++k) {
    coeffs[k] = root * binom / cpow;
    binom *= (0.5 - k) / (k + 1.0);
    cpow *= c;
  }
  return series_in(coeffs, w);
}

ComplexJet jet_reciprocal(const ComplexJet& a) {
  const Complex c = a.constant_term();
  if (c == Complex{}) throw ChartError("reciprocal of a jet with zero constant term");
  const ComplexJet w = without_constant(a);
  std::vector<Complex> coeffs(a.trunc_degree() + 1);
  Complex term = 1.0 / c;
  for (int k = 0; k <= a.trunc_degree(); ++k) {
    coeffs[k] = term;
    term *= -1.0 / c;
  }
  return series_in(coeffs, w);
}

QuadraticRoot vanishing_quadratic_root(const ComplexJet& a, const ComplexJet& b, const ComplexJet& c) {
  const double b0 = b.constant_term().real();
  if (std::abs(c.constant_term()) > 1e-12 * std::max(1.0, b0 * b0))
    throw ChartError("quadratic has no root through the center");
  const ComplexJet disc = b * b - Complex(4.0) * a * c;
  const double d0 = disc.constant_term().real();
  if (!(d0 > 0.0)) throw ChartError("radicand is not positive at the center; chart is singular");
  QuadraticRoot out;
  out.branch = b0 > 0 ? 1 : -1;
  out.radicand_at_center = d0;
  const ComplexJet r = (-b + Complex(out.branch) * jet_sqrt(disc)) * jet_reciprocal(Complex(2.0) * a);
  if (std::abs(r.constant_term()) > 1e-9 * std::max(1.0, std::abs(b0)))
    throw ChartError("root does not vanish at the center");
  out.root = without_constant(r);
  return out;
}

ComplexJet solve_t(const ChartSpec& spec) {
  const Eliminated e = eliminate_t(spec);
  return e.t_root.root + Complex(spec.center[kt].get_d());
}

ComplexJet solve_z_implicit(const ChartSpec& spec, const ComplexJet& t_jet7) {
  const int d = spec.trunc_degree;
  const ComplexJet H = lowered(recenter(poly_H(), eight_center(spec)), d);
  const ComplexJet dt = without_constant(t_jet7);
  std::vector<ComplexJet> inner(8, ComplexJet(7, d));
  for (int i = 0; i < 7; ++i) inner[kTJetVars[i]] = ComplexJet::variable(7, d, i);
  inner[kt] = dt;
  const ComplexJet G = compose(H, ComplexJetVector(std::move(inner)));

  const Complex gz = G.coeff(MultiIndex::unit(7, 4));
  if (std::abs(gz) < 1e-8) throw ChartError("dH/dz vanishes at the center; implicit chart is degenerate");

  ComplexJet dz(6, d);
  for (int k = 1; k <= d; ++k) {
    std::vector<ComplexJet> sub(7, ComplexJet(6, d));
    for (int i = 0; i < 4; ++i) sub[i] = ComplexJet::variable(6, d, i);
    sub[4] = dz;
    sub[5] = ComplexJet::variable(6, d, 4);
    sub[6] = ComplexJet::variable(6, d, 5);
    const ComplexJet r = compose(G, ComplexJetVector(std::move(sub)));
    dz = dz - r.degree_part(k) * (1.0 / gz);
  }
  return dz + Complex(spec.center[kz].get_d());
}

ChartJet chart_map_jet(const ChartSpec& spec) {
  const int d = spec.trunc_degree;
  const Eliminated e = eliminate_t(spec);
  ChartJet out;
  out.sqrt_branch = e.t_root.branch;
  out.t_jet7 = e.t_root.root + Complex(spec.center[kt].get_d());
  out.z_jet = solve_z_implicit(spec, out.t_jet7);

  const ComplexJet dz = without_constant(out.z_jet);
  std::vector<ComplexJet> sub(7, ComplexJet(6, d));
  for (int i = 0; i < 4; ++i) sub[i] = ComplexJet::variable(6, d, i);
  sub[4] = dz;
  sub[5] = ComplexJet::variable(6, d, 4);
  sub[6] = ComplexJet::variable(6, d, 5);
  const ComplexJet dt = compose(e.t_root.root, ComplexJetVector(std::move(sub)));
  out.t_jet = dt + Complex(spec.center[kt].get_d());

  const ComplexJetVector inner = chart_inner(d, dz, dt);
  out.level_residual =
      compose(e.p_disp * Complex(0.5) - Complex(spec.level.get_d()), inner);
  out.h_residual = compose(e.h_disp, inner);

  Su3Tuple<ComplexJet> full;
  for (int i = 0; i < 8; ++i) full[i] = inner[i] + Complex(spec.center[i].get_d());
  full[kU] = ComplexJet(6, d);
  const auto img = cat_map_su3(full);
  std::vector<ComplexJet> comps;
  for (int i : kChartVars) comps.push_back(img[i] - Complex(spec.center[i].get_d()));
  out.map_jet = ComplexJetVector(std::move(comps));
  return out;
}

Su3Tuple<double> lift_chart_point(const ChartSpec& spec, const ChartJet& chart, const std::array<double, 6>& v) {
  static const ExactJet P = poly_P();
  static const ExactJet H = poly_H();
  static const ExactJet Pt = derivative(P, kt), Pz = derivative(P, kz);
  static const ExactJet Ht = derivative(H, kt), Hz = derivative(H, kz);
  const double ell = spec.level.get_d();

  std::vector<Complex> vc(v.begin(), v.end());
  std::array<double, 8> p{};
  for (int i = 0; i < 6; ++i) p[kChartVars[i]] = spec.center[kChartVars[i]].get_d() + v[i];
  p[kz] = eval(chart.z_jet, vc).real();
  p[kt] = eval(chart.t_jet, vc).real();
  for (int it = 0; it < 60; ++it) {
    const std::span<const double> sp(p);
    const double f1 = evaluate(P, sp) / 2.0 - ell;
    const double f2 = evaluate(H, sp);
    const double a = evaluate(Pt, sp) / 2.0, b = evaluate(Pz, sp) / 2.0;
    const double c = evaluate(Ht, sp), dd = evaluate(Hz, sp);
    const double det = a * dd - b * c;
    if (det == 0.0) throw ChartError("lift: singular Newton step");
    const double dt = (f1 * dd - b * f2) / det;
    const double dz = (a * f2 - c * f1) / det;
    p[kt] -= dt;
    p[kz] -= dz;
    if (std::abs(dt) + std::abs(dz) < 1e-17) break;
  }
  Su3Tuple<double> out{};
  for (int i = 0; i < 8; ++i) out[i] = p[i];
  return out;
}

std::array<double, 6> exact_chart_map(const ChartSpec& spec, const ChartJet& chart, const std::array<double, 6>& v) {
  const auto img = cat_map_su3(lift_chart_point(spec, chart, v));
  std::array<double, 6> out{};
  for (int i = 0; i < 6; ++i) out[i] = img[kChartVars[i]] - spec.center[kChartVars[i]].get_d();
  return out;
}

Eigen::MatrixXd linear_part(const ComplexJetVector& map) {
  const int n = static_cast<int>(map.size());
  const int m = map.num_vars();
  Eigen::MatrixXd L(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) L(i, j) = map[i].coeff(MultiIndex::unit(m, j)).real();
  return L;
}

double factorial_scaled_coefficient(const ComplexJet& j, const MultiIndex& m) {
  double f = 1;
  for (int k = 2; k <= m.degree(); ++k) f *= k;
  return j.coeff(m).real() * f;
}

Su2Chart su2_chart_map_jet(const Rational& s_in, int trunc_degree) {
  const Rational s = canonical(s_in);
  const int d = trunc_degree;
  Su2Chart out;
  out.s = s;
  out.center = fixed_family_su2(s);
  out.level = kappa(out.center[0], out.center[1], out.center[2]);

  std::array<ExactJet, 3> v;
  for (int i = 0; i < 3; ++i) v[i] = ExactJet::variable(3, kPolyTrunc, i);
  const ExactJet K = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - v[0] * v[1] * v[2] -
                     ExactJet::constant(3, kPolyTrunc, 2);
  const ExactJet Kd = recenter(K, {out.center.begin(), out.center.end()});
  const auto parts = split_by_power(Kd, 0);
  if (parts.size() != 3) throw ChartError("kappa is not quadratic in x");
  const ExactJet c0 = parts[0] - ExactJet::constant(2, parts[0].trunc_degree(), out.level);
  const QuadraticRoot r = vanishing_quadratic_root(lowered(parts[2], d), lowered(parts[1], d), lowered(c0, d));
  out.x_jet = r.root + Complex(out.center[0].get_d());

  std::vector<ComplexJet> inner = {r.root, ComplexJet::variable(2, d, 0), ComplexJet::variable(2, d, 1)};
  out.level_residual = compose(lowered(Kd, d) - Complex(out.level.get_d()), ComplexJetVector(inner));

  Su2Tuple<ComplexJet> full;
  for (int i = 0; i < 3; ++i) full[i] = inner[i] + Complex(out.center[i].get_d());
  const auto img = cat_map_su2(full);
  out.map_jet = ComplexJetVector({img[1] - Complex(out.center[1].get_d()), img[2] - Complex(out.center[2].get_d())});
  return out;
}

}  // namespace charvar
