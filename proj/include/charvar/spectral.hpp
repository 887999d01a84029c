#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace charvar {

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kUnitCircleTol = 1e-8;
inline constexpr double kResonanceTol = 1e-8;

struct EigenDecomposition {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // columns, unit norm
};

EigenDecomposition eigen_small(const Eigen::MatrixXcd& m);

enum class PairClass { elliptic, hyperbolic, parabolic, resonant };
std::string to_string(PairClass c);

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  // (j, jbar): for complex pairs eigenvalues[jbar] = conj(eigenvalues[j]) with
  // Im eigenvalues[j] > 0; real eigenvalues are paired with their reciprocal
  // when one exists, otherwise with themselves.
  std::vector<std::pair<int, int>> pairing;
  std::vector<PairClass> classification;
  // One frequency per pair: arg(λ_j)/2π for elliptic pairs, NaN otherwise.
  std::vector<double> omega;

  bool all_elliptic() const;
  // Elliptic pairs in increasing ω.
  std::vector<int> elliptic_pairs_by_frequency() const;
};

SpectrumReport classify_spectrum(const Eigen::MatrixXd& m);

struct DiagonalizingBasis {
  Eigen::MatrixXcd C0;
  Eigen::MatrixXcd inverse;
  Eigen::VectorXcd diagonal;  // (λ_1, μ_1, λ_2, μ_2, ...)
  std::string normalization;
};

// Columns (v_1, conj v_1, v_2, conj v_2, ...) ordered by increasing ω; each v_j
// has unit norm and its first entry of modulus > 1e-8 made real and positive.
DiagonalizingBasis build_C0(const Eigen::MatrixXd& m, const SpectrumReport& report);

// Rescales the conjugate column pairs of a basis by positive factors.
DiagonalizingBasis rescale_pairs(const DiagonalizingBasis& b, const std::vector<double>& factors);

double offdiagonal_residual(const Eigen::MatrixXd& m, const DiagonalizingBasis& b);

}  // namespace charvar
