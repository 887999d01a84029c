#include "charvar/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace charvar {

using Complex = std::complex<double>;

EigenDecomposition eigen_small(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw SpectralError("eigen_small: matrix is not square");
  if (n == 0 || n > 8) throw SpectralError("eigen_small: size must be between 1 and 8");
  const double scale = std::max(m.norm(), 1e-300);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(m, false);
  if (ces.info() != Eigen::Success) throw SpectralError("eigen_small: Schur iteration failed");
  EigenDecomposition out;
  out.values = ces.eigenvalues();
  out.vectors.resize(n, n);

  // Inverse iteration with a small shift off each eigenvalue.
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex shift = out.values[k] + Complex(1e-10 * scale, 1e-10 * scale);
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m - shift * I);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(0.1 + 0.03 * static_cast<double>(i), 0.02 * static_cast<double>(i * i));
    v[k] += 1.0;
    for (int it = 0; it < 3; ++it) {
      v = lu.solve(v);
      v /= v.norm();
    }
    const double res = (m * v - out.values[k] * v).norm();
    if (!(res <= 1e-9 * scale)) throw SpectralError("eigen_small: eigenvector residual too large");
    out.vectors.col(k) = v;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.vectors);
  const auto& sv = svd.singularValues();
  if (sv[n - 1] < 1e-6 * sv[0]) throw SpectralError("eigen_small: matrix is not diagonalizable within tolerance");
  return out;
}

std::string to_string(PairClass c) {
  switch (c) {
    case PairClass::elliptic: return "elliptic";
    case PairClass::hyperbolic: return "hyperbolic";
    case PairClass::parabolic: return "parabolic";
    case PairClass::resonant: return "resonant";
  }
  return "unknown";
}

bool SpectrumReport::all_elliptic() const {
  return !classification.empty() &&
         std::all_of(classification.begin(), classification.end(), [](PairClass c) { return c == PairClass::elliptic; });
}

std::vector<int> SpectrumReport::elliptic_pairs_by_frequency() const {
  std::vector<int> idx;
  for (int p = 0; p < static_cast<int>(pairing.size()); ++p)
    if (classification[p] == PairClass::elliptic) idx.push_back(p);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return omega[a] < omega[b]; });
  return idx;
}

SpectrumReport classify_spectrum(const Eigen::MatrixXd& m) {
  const EigenDecomposition ed = eigen_small(m.cast<Complex>());
  const int n = static_cast<int>(ed.values.size());
  const double scale = std::max(1.0, m.norm());
  const double real_tol = 1e-9 * scale;

  std::vector<Complex> ev(ed.values.data(), ed.values.data() + n);
  std::vector<bool> used(n, false);
  struct Pair {
    Complex lambda, mu;
    bool complex_pair;
    bool self = false;
  };
  std::vector<Pair> pairs;

  for (int j = 0; j < n; ++j) {
    if (used[j] || ev[j].imag() <= real_tol) continue;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      if (used[k] || k == j || ev[k].imag() >= -real_tol) continue;
      const double d = std::abs(ev[k] - std::conj(ev[j]));
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    if (best < 0 || best_d > 1e-9 * scale) throw SpectralError("classify_spectrum: eigenvalue without conjugate partner");
    used[j] = used[best] = true;
    pairs.push_back({ev[j], ev[best], true, false});
  }
  for (int j = 0; j < n; ++j)
    if (!used[j] && std::abs(ev[j].imag()) > real_tol)
      throw SpectralError("classify_spectrum: eigenvalue without conjugate partner");

  for (int j = 0; j < n; ++j) {
    if (used[j]) continue;
    used[j] = true;
    const double lam = ev[j].real();
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    if (lam != 0.0)
      for (int k = 0; k < n; ++k) {
        if (used[k]) continue;
        const double d = std::abs(ev[k].real() - 1.0 / lam);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
    if (best >= 0 && best_d < 1e-8 * scale) {
      used[best] = true;
      pairs.push_back({Complex(lam, 0), Complex(ev[best].real(), 0), false, false});
    } else {
      pairs.push_back({Complex(lam, 0), Complex(lam, 0), false, true});
    }
  }

  std::vector<PairClass> cls;
  std::vector<double> om;
  for (const auto& p : pairs) {
    if (p.complex_pair) {
      if (std::abs(std::abs(p.lambda) - 1.0) < kUnitCircleTol) {
        cls.push_back(PairClass::elliptic);
        om.push_back(std::arg(p.lambda) / (2 * std::numbers::pi));
      } else {
        cls.push_back(PairClass::hyperbolic);
        om.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    } else {
      const bool unit = std::abs(std::abs(p.lambda.real()) - 1.0) < kUnitCircleTol;
      cls.push_back(unit ? PairClass::parabolic : PairClass::hyperbolic);
      om.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a + 1; b < pairs.size(); ++b)
      if (cls[a] != PairClass::hyperbolic && cls[b] != PairClass::hyperbolic && pairs[a].complex_pair &&
          pairs[b].complex_pair && std::abs(pairs[a].lambda - pairs[b].lambda) < kResonanceTol) {
        cls[a] = PairClass::resonant;
        cls[b] = PairClass::resonant;
      }

  // Deterministic order: elliptic/resonant pairs by ω, then the rest by |λ| descending.
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool ea = !std::isnan(om[a]), eb = !std::isnan(om[b]);
    if (ea != eb) return ea;
    if (ea) return om[a] < om[b];
    return std::abs(pairs[a].lambda) > std::abs(pairs[b].lambda);
  });

  SpectrumReport r;
  for (std::size_t i : order) {
    const int j = static_cast<int>(r.eigenvalues.size());
    r.eigenvalues.push_back(pairs[i].lambda);
    if (pairs[i].self) {
      r.pairing.push_back({j, j});
    } else {
      r.eigenvalues.push_back(pairs[i].mu);
      r.pairing.push_back({j, j + 1});
    }
    r.classification.push_back(cls[i]);
    r.omega.push_back(om[i]);
  }
  return r;
}

DiagonalizingBasis build_C0(const Eigen::MatrixXd& m, const SpectrumReport& report) {
  const Eigen::Index n = m.rows();
  if (n % 2 != 0 || n != m.cols()) throw SpectralError("build_C0: matrix must be square of even size");
  for (PairClass c : report.classification)
    if (c == PairClass::resonant) throw SpectralError("build_C0: repeated eigenvalues (resonance)");
  if (!report.all_elliptic() || static_cast<Eigen::Index>(2 * report.pairing.size()) != n)
    throw SpectralError("build_C0: spectrum is not fully elliptic");

  const EigenDecomposition ed = eigen_small(m.cast<Complex>());
  DiagonalizingBasis b;
  b.C0.resize(n, n);
  b.diagonal.resize(n);
  int col = 0;
  for (int p : report.elliptic_pairs_by_frequency()) {
    const Complex lam = report.eigenvalues[report.pairing[p].first];
    Eigen::Index best = 0;
    ed.values.unaryExpr([&](const Complex& e) { return std::abs(e - lam); }).minCoeff(&best);
    Eigen::VectorXcd v = ed.vectors.col(best);
    v /= v.norm();
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(v[i]) > 1e-8) {
        v *= std::conj(v[i]) / std::abs(v[i]);
        v[i] = std::abs(v[i]);
        break;
      }
    b.C0.col(col) = v;
    b.C0.col(col + 1) = v.conjugate();
    b.diagonal[col] = lam;
    b.diagonal[col + 1] = std::conj(lam);
    col += 2;
  }
  b.inverse = b.C0.inverse();
  b.normalization = "unit-norm columns; first entry above 1e-8 in modulus made real positive; pairs by increasing omega";
  return b;
}

DiagonalizingBasis rescale_pairs(const DiagonalizingBasis& b, const std::vector<double>& factors) {
  if (static_cast<Eigen::Index>(2 * factors.size()) != b.C0.cols())
    throw SpectralError("rescale_pairs: one factor per pair required");
  DiagonalizingBasis r = b;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    if (!(factors[j] > 0)) throw SpectralError("rescale_pairs: factors must be positive");
    r.C0.col(2 * j) *= factors[j];
    r.C0.col(2 * j + 1) *= factors[j];
  }
  r.inverse = r.C0.inverse();
  r.normalization = b.normalization + "; pairs rescaled";
  return r;
}

double offdiagonal_residual(const Eigen::MatrixXd& m, const DiagonalizingBasis& b) {
  Eigen::MatrixXcd D = b.inverse * m.cast<Complex>() * b.C0;
  D.diagonal().setZero();
  return D.cwiseAbs().maxCoeff();
}

}  // namespace charvar
