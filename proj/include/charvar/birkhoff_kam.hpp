#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "charvar/jet.hpp"
#include "charvar/spectral.hpp"

namespace charvar {

class ResonanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Map in eigen-coordinates ζ = (ξ_1, η_1, ..., ξ_d, η_d): ξ_j ↦ p_j, η_j ↦ q_j.
struct NormalFormInput {
  int d = 0;
  std::vector<ComplexJet> p_jets;
  std::vector<ComplexJet> q_jets;
  std::vector<Complex> lambda;
  std::vector<Complex> mu;

  // Largest deviation of the linear parts from diag(λ_j, μ_j).
  double linear_residual() const;
};

inline int xi_var(int j) { return 2 * j; }
inline int eta_var(int j) { return 2 * j + 1; }

// Conjugates a real map jet by C0: ζ ↦ C0^{-1} F(C0 ζ).
NormalFormInput diagonalize(const ComplexJetVector& map, const DiagonalizingBasis& basis, double tol = 1e-9);

struct Violation {
  std::string kind;  // "lambda_j=lambda_m*lambda_n", ..., "root_of_unity"
  int j = -1, m = -1, n = -1;
  int order = 0;
  double gap = 0;
};

std::vector<Violation> nonresonance_check(const std::vector<Complex>& lambda, int order);

struct QuadraticCorrections {
  std::vector<ComplexJet> phi2;
  std::vector<ComplexJet> psi2;
};

// Degree-2 corrections removing all quadratic terms: the coefficient of ζ^e in
// φ_j is [p_j]_e / (Λ^e - λ_j) and in ψ_j is [q_j]_e / (Λ^e - μ_j), where
// Λ = (λ_1, μ_1, ..., λ_d, μ_d).
QuadraticCorrections phi2_psi2(const NormalFormInput& in);

// α_{jk} = coefficient of ξ_k ξ_j η_k in u_j ξ_j, assembled from normalized
// ordered-monomial coefficients of p, φ_2, ψ_2.
Eigen::MatrixXcd alpha_matrix(const NormalFormInput& in, const QuadraticCorrections& c);

// 2-dimensional closed form; p2 = (p_20, p_21, p_22), q2 likewise, p31 the ξ^2 η
// coefficient of p, μ = 1/λ.
Complex alpha2_closed_form(const std::array<Complex, 3>& p2, const std::array<Complex, 3>& q2, Complex p31,
                           Complex lambda);

Complex twist_determinant(const Eigen::MatrixXcd& alpha);

// True when {∇B(r) = 2πω + b r : |r| <= domain_radius} spans an open set, i.e.
// the d+1 images of 0 and domain_radius·e_i are affinely independent.
bool nonplanarity_check(const Eigen::VectorXd& omega, const Eigen::MatrixXd& b, double domain_radius);

struct BrjunoResult {
  double partial_sum = 0;
  int terms = 0;
  bool rational = false;
  std::vector<double> denominators;  // q_0, q_1, ...
};

// Σ_{k=1..K} log(q_{k+1}) / q_k with q_k the convergent denominators of θ
// (q_0 = 1, q_1 = a_1, q_{k+1} = a_{k+1} q_k + q_{k-1}).
BrjunoResult brjuno_partial_sum(double theta, int K);

struct BirkhoffCoefficients {
  QuadraticCorrections corrections;
  Eigen::MatrixXcd alpha;
  Eigen::MatrixXcd b;  // α_{jk} / (i λ_j)
  Complex gamma1;      // b_11 when d = 1
  double max_imag_b = 0;
};

BirkhoffCoefficients birkhoff_coefficients(const NormalFormInput& in);

inline constexpr double kTwistThreshold = 1e-6;

struct KamReport {
  Eigen::MatrixXcd alpha;
  Eigen::MatrixXcd b;
  Complex alpha_det;
  bool twist_ok = false;
  bool nonplanarity_ok = false;
  double max_imag_b = 0;
  std::vector<Violation> resonance_flags;
  std::vector<double> brjuno_partial;  // one per frequency
};

KamReport kam_report(const NormalFormInput& in, const std::vector<double>& omega, int resonance_order = 4,
                     int brjuno_terms = 20);

}  // namespace charvar
