#pragma once

#include <map>
#include <random>
#include <vector>

#include "charvar/jet.hpp"

namespace testsupport {

using charvar::Complex;
using charvar::ComplexJet;
using charvar::ExactJet;
using charvar::MultiIndex;
using charvar::Rational;

// Untruncated polynomial as an exponent-vector map; the reference against which
// jet arithmetic is checked.
using NaivePoly = std::map<std::vector<int>, Rational>;

inline NaivePoly naive_of(const ExactJet& j) {
  NaivePoly p;
  for (const auto& t : j.terms()) p[j.index_of(t).exponents()] = t.coeff;
  return p;
}

inline NaivePoly naive_mul(const NaivePoly& a, const NaivePoly& b) {
  NaivePoly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r[e] += ca * cb;
    }
  return r;
}

inline ExactJet jet_of(const NaivePoly& p, int n, int d) {
  std::vector<std::pair<MultiIndex, Rational>> terms;
  for (const auto& [e, c] : p) {
    int deg = 0;
    for (int x : e) deg += x;
    if (deg <= d && c != 0) terms.push_back({MultiIndex(e), c});
  }
  return ExactJet::from_terms(n, d, terms);
}

inline std::vector<int> random_exponents(std::mt19937_64& rng, int n, int max_degree, int min_degree = 0) {
  std::uniform_int_distribution<int> var(0, n - 1), deg(min_degree, max_degree);
  std::vector<int> e(n, 0);
  const int k = deg(rng);
  for (int i = 0; i < k; ++i) ++e[var(rng)];
  return e;
}

inline ExactJet random_exact(std::mt19937_64& rng, int n, int d, int terms = 6, int min_degree = 0) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  std::vector<std::pair<MultiIndex, Rational>> t;
  for (int i = 0; i < terms; ++i) {
    Rational c(num(rng), den(rng));
    c.canonicalize();
    t.push_back({MultiIndex(random_exponents(rng, n, d, min_degree)), c});
  }
  return ExactJet::from_terms(n, d, t);
}

inline ComplexJet random_complex(std::mt19937_64& rng, int n, int d, int terms = 8, int min_degree = 0) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<std::pair<MultiIndex, Complex>> t;
  for (int i = 0; i < terms; ++i) t.push_back({MultiIndex(random_exponents(rng, n, d, min_degree)), Complex(u(rng), u(rng))});
  return ComplexJet::from_terms(n, d, t);
}

inline std::vector<Complex> random_point(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<Complex> v(n);
  for (auto& x : v) x = Complex(u(rng), u(rng));
  return v;
}

}  // namespace testsupport
