#include "charvar/birkhoff_kam.hpp"

#include <cmath>
#include <numbers>

namespace charvar {

namespace {

constexpr double kSmallDenominator = 1e-10;

Complex checked_inverse(Complex den, const char* what) {
  if (std::abs(den) < kSmallDenominator) throw ResonanceError(std::string("small denominator in ") + what);
  return 1.0 / den;
}

// Λ^e for the exponent vector of a monomial in ζ.
Complex eigen_power(const MultiIndex& e, const NormalFormInput& in) {
  Complex r = 1.0;
  for (int j = 0; j < in.d; ++j) {
    for (int k = 0; k < e[xi_var(j)]; ++k) r *= in.lambda[j];
    for (int k = 0; k < e[eta_var(j)]; ++k) r *= in.mu[j];
  }
  return r;
}

ComplexJet divided_quadratic(const ComplexJet& src, const NormalFormInput& in, Complex target, const char* what) {
  std::vector<std::pair<MultiIndex, Complex>> terms;
  for (const auto& t : src.terms()) {
    if (t.degree != 2) continue;
    const MultiIndex e = src.index_of(t);
    terms.push_back({e, t.coeff * checked_inverse(eigen_power(e, in) - target, what)});
  }
  return ComplexJet::from_terms(src.num_vars(), src.trunc_degree(), terms);
}

}  // namespace

double NormalFormInput::linear_residual() const {
  double worst = 0;
  const int n = 2 * d;
  for (int j = 0; j < d; ++j)
    for (int v = 0; v < n; ++v) {
      const MultiIndex e = MultiIndex::unit(n, v);
      const Complex want_p = v == xi_var(j) ? lambda[j] : Complex{};
      const Complex want_q = v == eta_var(j) ? mu[j] : Complex{};
      worst = std::max(worst, std::abs(p_jets[j].coeff(e) - want_p));
      worst = std::max(worst, std::abs(q_jets[j].coeff(e) - want_q));
    }
  return worst;
}

NormalFormInput diagonalize(const ComplexJetVector& map, const DiagonalizingBasis& basis, double tol) {
  const int n = static_cast<int>(map.size());
  if (n % 2 != 0 || basis.C0.rows() != n || map.num_vars() != n)
    throw ResonanceError("diagonalize: map and basis sizes disagree");
  const int deg = map.trunc_degree();
  std::vector<ComplexJet> inner;
  for (int k = 0; k < n; ++k) {
    std::vector<std::pair<MultiIndex, Complex>> terms;
    for (int l = 0; l < n; ++l) terms.push_back({MultiIndex::unit(n, l), basis.C0(k, l)});
    inner.push_back(ComplexJet::from_terms(n, deg, terms));
  }
  const ComplexJetVector F = compose(map, ComplexJetVector(std::move(inner)));
  NormalFormInput out;
  out.d = n / 2;
  for (int j = 0; j < out.d; ++j) {
    ComplexJet p(n, deg), q(n, deg);
    for (int k = 0; k < n; ++k) {
      p += F[k] * basis.inverse(xi_var(j), k);
      q += F[k] * basis.inverse(eta_var(j), k);
    }
    out.p_jets.push_back(p);
    out.q_jets.push_back(q);
    out.lambda.push_back(basis.diagonal[xi_var(j)]);
    out.mu.push_back(basis.diagonal[eta_var(j)]);
  }
  if (out.linear_residual() > tol) throw ResonanceError("diagonalize: linear part is not diagonal");
  return out;
}

std::vector<Violation> nonresonance_check(const std::vector<Complex>& lambda, int order) {
  std::vector<Violation> out;
  const int d = static_cast<int>(lambda.size());
  std::vector<Complex> mu(d);
  for (int j = 0; j < d; ++j) mu[j] = std::conj(lambda[j]);
  auto flag = [&](const char* kind, int j, int m, int n, Complex a, Complex b) {
    const double gap = std::abs(a - b);
    if (gap < kResonanceTol) out.push_back({kind, j, m, n, 2, gap});
  };
  for (int j = 0; j < d; ++j)
    for (int m = 0; m < d; ++m)
      for (int n = m; n < d; ++n) {
        flag("lambda_j=lambda_m*lambda_n", j, m, n, lambda[j], lambda[m] * lambda[n]);
        flag("lambda_j=mu_m*mu_n", j, m, n, lambda[j], mu[m] * mu[n]);
      }
  for (int j = 0; j < d; ++j)
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) flag("lambda_j=lambda_m*mu_n", j, m, n, lambda[j], lambda[m] * mu[n]);
  for (int j = 0; j < d; ++j) {
    Complex p = 1.0;
    for (int k = 1; k <= order; ++k) {
      p *= lambda[j];
      const double gap = std::abs(p - 1.0);
      if (gap < kResonanceTol) {
        out.push_back({"root_of_unity", j, -1, -1, k, gap});
        break;
      }
    }
  }
  return out;
}

QuadraticCorrections phi2_psi2(const NormalFormInput& in) {
  QuadraticCorrections c;
  for (int j = 0; j < in.d; ++j) {
    c.phi2.push_back(divided_quadratic(in.p_jets[j], in, in.lambda[j], "phi_2"));
    c.psi2.push_back(divided_quadratic(in.q_jets[j], in, in.mu[j], "psi_2"));
  }
  return c;
}

Eigen::MatrixXcd alpha_matrix(const NormalFormInput& in, const QuadraticCorrections& c) {
  const int d = in.d;
  Eigen::MatrixXcd alpha(d, d);
  // Indices are 1-based here; 0 stands for "no variable".
  auto N = [](const ComplexJet& f, std::vector<int> up, std::vector<int> lo) {
    return normalized_coefficient(f, up, lo);
  };
  for (int j0 = 0; j0 < d; ++j0) {
    const int j = j0 + 1;
    const ComplexJet& p = in.p_jets[j0];
    for (int k0 = 0; k0 < d; ++k0) {
      const int k = k0 + 1;
      const double mult = j == k ? 1.0 : 2.0;
      Complex sum = 0;
      for (int n0 = 0; n0 < d; ++n0) {
        const int n = n0 + 1;
        const ComplexJet& phi = c.phi2[n0];
        const ComplexJet& psi = c.psi2[n0];
        sum += N(p, {k, n}, {}) * N(phi, {j}, {k});
        sum += N(p, {j, n}, {}) * N(phi, {k}, {k});
        sum += 0.5 * (N(p, {k}, {n}) * N(psi, {j}, {k}) + N(p, {j}, {n}) * N(psi, {k}, {k}));
        sum += N(p, {n}, {k}) * N(phi, {k, j}, {});
        sum += (N(p, {}, {n, k}) + N(p, {}, {k, n})) * N(psi, {k, j}, {});
      }
      sum += N(p, {k, j}, {k});
      alpha(j0, k0) = mult * sum;
    }
  }
  return alpha;
}

Complex alpha2_closed_form(const std::array<Complex, 3>& p2, const std::array<Complex, 3>& q2, Complex p31,
                           Complex lambda) {
  const Complex mu = 1.0 / lambda;
  const auto& [p20, p21, p22] = p2;
  const Complex q20 = q2[0], q21 = q2[1];
  return 2.0 * p20 * p21 * checked_inverse(lambda * (mu - 1.0), "alpha_2") +
         p21 * checked_inverse(lambda * mu * (lambda - 1.0), "alpha_2") * (lambda * q21 + mu * p20) +
         2.0 * p22 * q20 * checked_inverse(lambda * lambda - mu, "alpha_2") + p31;
}

Complex twist_determinant(const Eigen::MatrixXcd& alpha) {
  if (alpha.rows() == 0) return 1.0;
  return alpha.determinant();
}

bool nonplanarity_check(const Eigen::VectorXd& omega, const Eigen::MatrixXd& b, double domain_radius) {
  const Eigen::Index d = omega.size();
  if (d < 1 || b.rows() != d || b.cols() != d) throw ResonanceError("nonplanarity_check: shape mismatch");
  if (!(domain_radius > 0)) return false;
  // Rows (1, image point) for the d+1 sample points; independence <=> full rank.
  Eigen::MatrixXd A(d + 1, d + 1);
  const Eigen::VectorXd base = 2 * std::numbers::pi * omega;
  A(0, 0) = 1;
  A.block(0, 1, 1, d) = base.transpose();
  for (Eigen::Index i = 0; i < d; ++i) {
    A(i + 1, 0) = 1;
    A.block(i + 1, 1, 1, d) = (base + domain_radius * b.col(i)).transpose();
  }
  // Subtracting the base row leaves domain_radius·b^T; test its rank.
  Eigen::MatrixXd diff = A.bottomRows(d).rightCols(d).rowwise() - A.row(0).rightCols(d);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(diff);
  const auto& sv = svd.singularValues();
  if (sv[0] == 0.0) return false;
  return sv[d - 1] > 1e-10 * sv[0];
}

BrjunoResult brjuno_partial_sum(double theta, int K) {
  BrjunoResult r;
  double x = theta - std::floor(theta);
  double q_prev = 0, q = 1;  // q_{-1}, q_0
  r.denominators.push_back(q);
  constexpr double kLimit = 9007199254740992.0;  // 2^53
  std::vector<double> qs = {q};
  while (static_cast<int>(qs.size()) < K + 2) {
    if (x < 1e-12) {
      r.rational = true;
      break;
    }
    const double inv = 1.0 / x;
    const double a = std::floor(inv);
    x = inv - a;
    const double q_next = a * q + q_prev;
    if (q_next > kLimit) break;
    q_prev = q;
    q = q_next;
    qs.push_back(q);
  }
  for (std::size_t k = 1; k + 1 < qs.size() && static_cast<int>(k) <= K; ++k) {
    r.partial_sum += std::log(qs[k + 1]) / qs[k];
    r.terms = static_cast<int>(k);
  }
  r.denominators = qs;
  return r;
}

BirkhoffCoefficients birkhoff_coefficients(const NormalFormInput& in) {
  BirkhoffCoefficients bc;
  bc.corrections = phi2_psi2(in);
  bc.alpha = alpha_matrix(in, bc.corrections);
  bc.b.resize(in.d, in.d);
  for (int j = 0; j < in.d; ++j)
    for (int k = 0; k < in.d; ++k) {
      bc.b(j, k) = bc.alpha(j, k) / (Complex(0, 1) * in.lambda[j]);
      bc.max_imag_b = std::max(bc.max_imag_b, std::abs(bc.b(j, k).imag()));
    }
  if (in.d == 1) bc.gamma1 = bc.b(0, 0);
  return bc;
}

KamReport kam_report(const NormalFormInput& in, const std::vector<double>& omega, int resonance_order,
                     int brjuno_terms) {
  KamReport r;
  r.resonance_flags = nonresonance_check(in.lambda, resonance_order);
  const BirkhoffCoefficients bc = birkhoff_coefficients(in);
  r.alpha = bc.alpha;
  r.b = bc.b;
  r.max_imag_b = bc.max_imag_b;
  r.alpha_det = twist_determinant(bc.alpha);
  r.twist_ok = std::abs(r.alpha_det) > kTwistThreshold;
  Eigen::VectorXd om(in.d);
  for (int j = 0; j < in.d; ++j) om[j] = omega.at(j);
  r.nonplanarity_ok = nonplanarity_check(om, bc.b.real(), 1e-3);
  for (double w : omega) r.brjuno_partial.push_back(brjuno_partial_sum(w, brjuno_terms).partial_sum);
  return r;
}

}  // namespace charvar
