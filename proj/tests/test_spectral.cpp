#include <cmath>
#include <numbers>
#include <random>

#include "charvar/birkhoff_kam.hpp"
#include "charvar/local_chart.hpp"
#include "charvar/spectral.hpp"
#include "doctest.h"

using namespace charvar;

namespace {

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

Eigen::MatrixXd chart_linear_part(const Rational& s) { return linear_part(chart_map_jet(ChartSpec::at(s)).map_jet); }

}  // namespace

TEST_CASE("eigenvalues of small matrices") {
  Eigen::MatrixXcd d(2, 2);
  d << 2, 0, 0, 3;
  EigenDecomposition e = eigen_small(d);
  std::vector<double> re = {e.values[0].real(), e.values[1].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(2));
  CHECK(re[1] == doctest::Approx(3));

  Eigen::MatrixXcd m(2, 2);
  m << 2, 1, 1, 1;
  e = eigen_small(m);
  re = {e.values[0].real(), e.values[1].real()};
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx((3 - std::sqrt(5.0)) / 2).epsilon(1e-12));
  CHECK(re[1] == doctest::Approx((3 + std::sqrt(5.0)) / 2).epsilon(1e-12));
  for (int k = 0; k < 2; ++k) CHECK((m * e.vectors.col(k) - e.values[k] * e.vectors.col(k)).norm() < 1e-12);
}

TEST_CASE("eigenvalue product equals the determinant") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int k = 0; k < 20; ++k) {
    Eigen::MatrixXd m(6, 6);
    for (int i = 0; i < 36; ++i) m.data()[i] = g(rng);
    const EigenDecomposition e = eigen_small(m.cast<Complex>());
    Complex prod = 1;
    for (int i = 0; i < 6; ++i) prod *= e.values[i];
    CHECK(std::abs(prod - m.determinant()) < 1e-8 * std::max(1.0, std::abs(m.determinant())));
  }
}

TEST_CASE("rotation is elliptic with the expected frequency") {
  const SpectrumReport r = classify_spectrum(rotation(std::numbers::pi / 4));
  REQUIRE(r.classification.size() == 1);
  CHECK(r.classification[0] == PairClass::elliptic);
  CHECK(r.omega[0] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(r.all_elliptic());
}

TEST_CASE("hyperbolic and parabolic pairs") {
  Eigen::Matrix2d h;
  h << 2, 1, 1, 1;
  SpectrumReport r = classify_spectrum(h);
  CHECK(r.classification[0] == PairClass::hyperbolic);
  CHECK(std::isnan(r.omega[0]));
  CHECK(!r.all_elliptic());
  r = classify_spectrum(Eigen::Matrix2d::Identity());
  CHECK(r.classification[0] == PairClass::parabolic);
}

TEST_CASE("repeated elliptic eigenvalues are resonant") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m.block(0, 0, 2, 2) = rotation(0.7);
  m.block(2, 2, 2, 2) = rotation(0.7);
  const SpectrumReport r = classify_spectrum(m);
  CHECK(r.classification[0] == PairClass::resonant);
  CHECK(r.classification[1] == PairClass::resonant);
  CHECK_THROWS_AS(build_C0(m, r), SpectralError);
}

TEST_CASE("non-diagonalizable matrix") {
  Eigen::MatrixXcd j(2, 2);
  j << 1, 1, 0, 1;
  CHECK_THROWS_AS(eigen_small(j), SpectralError);
}

TEST_CASE("fixed-line linearization at s = 0.249") {
  const Eigen::MatrixXd L = chart_linear_part(Rational(249, 1000));
  const SpectrumReport r = classify_spectrum(L);
  REQUIRE(r.classification.size() == 3);
  CHECK(r.all_elliptic());
  for (std::size_t p = 0; p + 1 < r.omega.size(); ++p) CHECK(r.omega[p] < r.omega[p + 1]);
  for (const auto& [j, jb] : r.pairing) {
    CHECK(std::abs(std::abs(r.eigenvalues[j]) - 1) < 1e-8);
    CHECK(std::abs(r.eigenvalues[jb] - std::conj(r.eigenvalues[j])) < 1e-9);
  }
  CHECK(L.determinant() == doctest::Approx(1.0).epsilon(1e-8));

  const DiagonalizingBasis b = build_C0(L, r);
  CHECK(offdiagonal_residual(L, b) < 1e-9);
  for (int j = 0; j < 3; ++j) {
    CHECK((b.C0.col(2 * j + 1) - b.C0.col(2 * j).conjugate()).norm() < 1e-14);
    CHECK(b.C0.col(2 * j).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(b.diagonal[2 * j] - std::conj(b.diagonal[2 * j + 1])) < 1e-12);
  }
  CHECK((b.C0 * b.inverse - Eigen::MatrixXcd::Identity(6, 6)).norm() < 1e-10);
}

TEST_CASE("eigen-coordinate map satisfies the reality constraint") {
  const ChartJet c = chart_map_jet(ChartSpec::at(Rational(249, 1000)));
  const Eigen::MatrixXd L = linear_part(c.map_jet);
  const NormalFormInput in = diagonalize(c.map_jet, build_C0(L, classify_spectrum(L)));
  CHECK(in.linear_residual() < 1e-9);
  // q_j(ξ, η) = conj(p_j(conj η, conj ξ)): coefficient of ζ^e in q_j is the conjugate
  // of the p_j coefficient with every ξ/η exponent swapped.
  double worst = 0;
  for (int j = 0; j < in.d; ++j)
    for (const auto& t : in.p_jets[j].terms()) {
      std::vector<int> e = in.p_jets[j].index_of(t).exponents();
      for (int k = 0; k < in.d; ++k) std::swap(e[xi_var(k)], e[eta_var(k)]);
      worst = std::max(worst, std::abs(in.q_jets[j].coeff(MultiIndex(e)) - std::conj(t.coeff)));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("eigenvalues move continuously along the fixed line") {
  const SpectrumReport a = classify_spectrum(chart_linear_part(Rational(31, 125)));
  const SpectrumReport b = classify_spectrum(chart_linear_part(Rational(249, 1000)));
  REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
  for (std::size_t k = 0; k < a.eigenvalues.size(); ++k) CHECK(std::abs(a.eigenvalues[k] - b.eigenvalues[k]) < 0.1);
}

TEST_CASE("rescaling conjugate pairs") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m.block(0, 0, 2, 2) = rotation(0.3);
  m.block(2, 2, 2, 2) = rotation(1.1);
  const DiagonalizingBasis b = build_C0(m, classify_spectrum(m));
  const DiagonalizingBasis r = rescale_pairs(b, {2.0, 0.5});
  CHECK((r.C0.col(0) - 2.0 * b.C0.col(0)).norm() < 1e-14);
  CHECK((r.C0.col(3) - 0.5 * b.C0.col(3)).norm() < 1e-14);
  CHECK(offdiagonal_residual(m, r) < 1e-12);
  CHECK_THROWS_AS(rescale_pairs(b, {1.0}), SpectralError);
  CHECK_THROWS_AS(rescale_pairs(b, {1.0, -1.0}), SpectralError);
}
