#include <cmath>
#include <numbers>
#include <random>

#include "charvar/birkhoff_kam.hpp"
#include "charvar/local_chart.hpp"
#include "doctest.h"

using namespace charvar;

namespace {

Complex unit(double omega) { return std::polar(1.0, 2 * std::numbers::pi * omega); }

bool has_kind(const std::vector<Violation>& v, const std::string& kind) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

ComplexJet random_jet(std::mt19937_64& rng, int n, Complex lin, int lin_var) {
  std::normal_distribution<double> g;
  std::vector<std::pair<MultiIndex, Complex>> terms;
  terms.push_back({MultiIndex::unit(n, lin_var), lin});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; a + b <= 3; ++b)
      if (a + b >= 2) terms.push_back({MultiIndex({a, b}), Complex(g(rng), g(rng))});
  return ComplexJet::from_terms(n, 3, terms);
}

NormalFormInput one_dof(std::mt19937_64& rng, Complex lambda) {
  NormalFormInput in;
  in.d = 1;
  in.lambda = {lambda};
  in.mu = {1.0 / lambda};
  in.p_jets = {random_jet(rng, 2, lambda, 0)};
  in.q_jets = {random_jet(rng, 2, 1.0 / lambda, 1)};
  return in;
}

Complex alpha_closed(const NormalFormInput& in) {
  const ComplexJet& p = in.p_jets[0];
  const ComplexJet& q = in.q_jets[0];
  auto c = [](const ComplexJet& f, int a, int b) { return f.coeff(MultiIndex({a, b})); };
  return alpha2_closed_form({c(p, 2, 0), c(p, 1, 1), c(p, 0, 2)}, {c(q, 2, 0), c(q, 1, 1), c(q, 0, 2)}, c(p, 2, 1),
                            in.lambda[0]);
}

struct Eigencoords {
  NormalFormInput in;
  DiagonalizingBasis basis;
  ComplexJetVector map;
};

Eigencoords fixed_line_input(const Rational& s) {
  const ChartJet c = chart_map_jet(ChartSpec::at(s));
  const Eigen::MatrixXd L = linear_part(c.map_jet);
  DiagonalizingBasis b = build_C0(L, classify_spectrum(L));
  NormalFormInput in = diagonalize(c.map_jet, b);
  return {std::move(in), std::move(b), c.map_jet};
}

// Φ^{-1} ∘ F ∘ Φ with Φ = id + (φ_2, ψ_2), by plain composition.
ComplexJetVector conjugated_map(const NormalFormInput& in, const QuadraticCorrections& c) {
  const int n = 2 * in.d;
  std::vector<ComplexJet> F, H;
  for (int j = 0; j < in.d; ++j) {
    F.push_back(in.p_jets[j] - in.p_jets[j].constant_term());
    F.push_back(in.q_jets[j] - in.q_jets[j].constant_term());
    H.push_back(c.phi2[j]);
    H.push_back(c.psi2[j]);
  }
  const ComplexJetVector id = ComplexJetVector::identity(n, 3);
  const ComplexJetVector h(H);
  std::vector<ComplexJet> phi;
  for (int i = 0; i < n; ++i) phi.push_back(id[i] + h[i]);
  ComplexJetVector inv = id;
  for (int it = 0; it < 4; ++it) {
    const ComplexJetVector hc = compose(h, inv);
    std::vector<ComplexJet> v;
    for (int i = 0; i < n; ++i) v.push_back(id[i] - hc[i]);
    inv = ComplexJetVector(v);
  }
  return compose(inv, compose(ComplexJetVector(F), ComplexJetVector(phi)));
}

MultiIndex resonant_monomial(int n, int j, int k) {
  std::vector<int> e(n, 0);
  ++e[xi_var(j)];
  ++e[xi_var(k)];
  ++e[eta_var(k)];
  return MultiIndex(e);
}

}  // namespace

TEST_CASE("nonresonance flags") {
  CHECK(has_kind(nonresonance_check({Complex(0, 1)}, 4), "root_of_unity"));
  CHECK(nonresonance_check({Complex(0, 1)}, 3).empty());
  const auto v = nonresonance_check({Complex(0, 1)}, 4);
  const auto it = std::find_if(v.begin(), v.end(), [](const Violation& x) { return x.kind == "root_of_unity"; });
  CHECK(it->order == 4);

  const auto w = nonresonance_check({unit(0.1), unit(0.2)}, 4);
  CHECK(std::any_of(w.begin(), w.end(), [](const Violation& x) {
    return x.kind == "lambda_j=lambda_m*lambda_n" && x.j == 1 && x.m == 0 && x.n == 0;
  }));

  CHECK(nonresonance_check({unit(std::sqrt(2.0) - 1), unit(std::sqrt(3.0) - 1.5)}, 4).empty());
  CHECK(fixed_line_input(Rational(249, 1000)).in.lambda.size() == 3);
  CHECK(nonresonance_check(fixed_line_input(Rational(249, 1000)).in.lambda, 4).empty());
}

TEST_CASE("quadratic corrections") {
  NormalFormInput in;
  in.d = 1;
  const Complex lam = unit(0.17);
  in.lambda = {lam};
  in.mu = {1.0 / lam};
  const ComplexJet xi = ComplexJet::variable(2, 3, 0), eta = ComplexJet::variable(2, 3, 1);
  in.p_jets = {xi * lam + xi * xi};
  in.q_jets = {eta * (1.0 / lam)};
  QuadraticCorrections c = phi2_psi2(in);
  CHECK(std::abs(c.phi2[0].coeff(MultiIndex({2, 0})) - 1.0 / (lam * lam - lam)) < 1e-14);
  CHECK(c.psi2[0].is_zero());

  in.p_jets = {xi * lam};
  c = phi2_psi2(in);
  CHECK(c.phi2[0].is_zero());
  CHECK(c.psi2[0].is_zero());
  CHECK(std::abs(birkhoff_coefficients(in).alpha(0, 0)) == 0);

  const Complex cube = unit(1.0 / 3.0);
  in.lambda = {cube};
  in.mu = {1.0 / cube};
  in.p_jets = {xi * cube + eta * eta};
  in.q_jets = {eta * (1.0 / cube)};
  CHECK_THROWS_AS(phi2_psi2(in), ResonanceError);
}

TEST_CASE("quadratic corrections solve the homological equation") {
  const Eigencoords e = fixed_line_input(Rational(249, 1000));
  const NormalFormInput& in = e.in;
  const QuadraticCorrections c = phi2_psi2(in);
  const int n = 2 * in.d;
  std::vector<ComplexJet> lin;
  for (int j = 0; j < in.d; ++j) {
    lin.push_back(ComplexJet::variable(n, 3, xi_var(j)) * in.lambda[j]);
    lin.push_back(ComplexJet::variable(n, 3, eta_var(j)) * in.mu[j]);
  }
  const ComplexJetVector Lambda(lin);
  for (int j = 0; j < in.d; ++j) {
    const ComplexJet r = compose(c.phi2[j], Lambda) - c.phi2[j] * in.lambda[j] - in.p_jets[j].degree_part(2);
    const ComplexJet rq = compose(c.psi2[j], Lambda) - c.psi2[j] * in.mu[j] - in.q_jets[j].degree_part(2);
    for (const auto& t : r.terms()) CHECK(std::abs(t.coeff) < 1e-12);
    for (const auto& t : rq.terms()) CHECK(std::abs(t.coeff) < 1e-12);
  }
}

TEST_CASE("twist coefficients match direct conjugation on the fixed line") {
  for (const Rational& s : {Rational(239, 1000), Rational(245, 1000), Rational(249, 1000)}) {
    const NormalFormInput in = fixed_line_input(s).in;
    const BirkhoffCoefficients bc = birkhoff_coefficients(in);
    const ComplexJetVector G = conjugated_map(in, bc.corrections);
    for (int j = 0; j < in.d; ++j) {
      for (const auto& t : G[xi_var(j)].terms())
        if (t.degree == 2) CHECK(std::abs(t.coeff) < 1e-12);
      for (int k = 0; k < in.d; ++k) {
        const Complex direct = G[xi_var(j)].coeff(resonant_monomial(2 * in.d, j, k));
        CHECK(std::abs(bc.alpha(j, k) - direct) < 1e-10 * std::max(1.0, std::abs(direct)));
      }
    }
  }
}

TEST_CASE("twist matrix at s = 0.249") {
  const NormalFormInput in = fixed_line_input(Rational(249, 1000)).in;
  const BirkhoffCoefficients bc = birkhoff_coefficients(in);
  const Complex expect[3][3] = {{{1.84215, 0.0447276}, {0.731012, 0.017749}, {-2.12701, -0.051644}},
                                {{-1.6754, -1.83028}, {-0.322691, -0.352522}, {3.07995, 3.36467}},
                                {{-0.467651, -4.26125}, {-0.295462, -2.69226}, {0.751494, 6.84763}}};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) CHECK(std::abs(bc.alpha(j, k) - expect[j][k]) < 1e-4 * std::abs(expect[j][k]));
  const Complex det = twist_determinant(bc.alpha);
  CHECK(std::abs(det - Complex(-3.36061, 3.64725)) < 1e-4);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      CHECK(std::abs(bc.b(j, k) - bc.alpha(j, k) / (Complex(0, 1) * in.lambda[j])) < 1e-15 * std::abs(bc.b(j, k)) + 1e-300);
}

TEST_CASE("closed form agrees with the general formula in one degree of freedom") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.02, 0.48);
  for (int k = 0; k < 50; ++k) {
    const NormalFormInput in = one_dof(rng, unit(u(rng)));
    const Complex general = birkhoff_coefficients(in).alpha(0, 0);
    CHECK(std::abs(alpha_closed(in) - general) < 1e-10 * std::max(1.0, std::abs(general)));
  }
  const NormalFormInput quarter = one_dof(rng, Complex(0, 1));
  CHECK(std::abs(alpha_closed(quarter) - birkhoff_coefficients(quarter).alpha(0, 0)) < 1e-10);
}

TEST_CASE("linear map has no twist") {
  NormalFormInput in;
  in.d = 2;
  in.lambda = {unit(0.11), unit(0.23)};
  in.mu = {std::conj(in.lambda[0]), std::conj(in.lambda[1])};
  for (int j = 0; j < 2; ++j) {
    in.p_jets.push_back(ComplexJet::variable(4, 3, xi_var(j)) * in.lambda[j]);
    in.q_jets.push_back(ComplexJet::variable(4, 3, eta_var(j)) * in.mu[j]);
  }
  const BirkhoffCoefficients bc = birkhoff_coefficients(in);
  CHECK(bc.alpha.norm() == 0);
  CHECK(twist_determinant(bc.alpha) == Complex(0));
}

TEST_CASE("rescaling the eigenbasis scales twist columns") {
  const Eigencoords e = fixed_line_input(Rational(249, 1000));
  const std::vector<double> f = {2.0, 0.5, 3.0};
  const NormalFormInput scaled = diagonalize(e.map, rescale_pairs(e.basis, f));
  const Eigen::MatrixXcd a0 = birkhoff_coefficients(e.in).alpha;
  const Eigen::MatrixXcd a1 = birkhoff_coefficients(scaled).alpha;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) CHECK(std::abs(a1(j, k) - a0(j, k) * f[k] * f[k]) < 1e-9 * std::abs(a1(j, k)));
}

TEST_CASE("determinant and nonplanarity") {
  CHECK(twist_determinant(Eigen::MatrixXcd::Identity(3, 3)) == Complex(1));
  Eigen::MatrixXcd r(2, 2);
  r << 1, 2, 2, 4;
  CHECK(std::abs(twist_determinant(r)) < 1e-15);
  CHECK(twist_determinant(Eigen::MatrixXcd(0, 0)) == Complex(1));

  const Eigen::VectorXd om = Eigen::Vector2d(0.1, 0.3);
  Eigen::MatrixXd b(2, 2);
  b << 1, 2, 3, 4;
  CHECK(nonplanarity_check(om, b, 1e-3));
  CHECK_FALSE(nonplanarity_check(om, Eigen::MatrixXd::Zero(2, 2), 1e-3));
  b << 1, 2, 2, 4;
  CHECK_FALSE(nonplanarity_check(om, b, 1e-3));
  CHECK_THROWS_AS(nonplanarity_check(om, Eigen::MatrixXd::Zero(3, 3), 1e-3), ResonanceError);
}

TEST_CASE("Brjuno partial sums") {
  // Golden mean: all partial quotients 1, q_k = F_{k+1}.
  const double golden = (std::sqrt(5.0) - 1) / 2;
  const BrjunoResult r = brjuno_partial_sum(golden, 20);
  double fib_prev = 1, fib = 1, expect = 0;  // F_1, F_2
  for (int k = 1; k <= 20; ++k) {
    const double next = fib + fib_prev;  // F_{k+2}
    expect += std::log(next) / fib;
    fib_prev = fib;
    fib = next;
  }
  CHECK(r.terms == 20);
  CHECK(r.partial_sum == doctest::Approx(expect).epsilon(1e-12));
  CHECK_FALSE(r.rational);

  const BrjunoResult third = brjuno_partial_sum(1.0 / 3.0, 20);
  CHECK(third.rational);
  CHECK(third.terms < 20);

  const double s = std::sqrt(2.0) - 1;
  double prev = 0;
  for (int K = 1; K <= 15; ++K) {
    const double v = brjuno_partial_sum(s, K).partial_sum;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("KAM report on the fixed line") {
  const Eigencoords e = fixed_line_input(Rational(249, 1000));
  const SpectrumReport spec = classify_spectrum(linear_part(e.map));
  const KamReport r = kam_report(e.in, spec.omega);
  CHECK(r.resonance_flags.empty());
  CHECK(r.twist_ok);
  CHECK(r.nonplanarity_ok);
  CHECK(r.brjuno_partial.size() == 3);
  for (double v : r.brjuno_partial) CHECK(std::isfinite(v));
}
