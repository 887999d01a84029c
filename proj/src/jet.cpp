#include "charvar/jet.hpp"

#include <map>

namespace charvar {

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  if (exps_.empty() || static_cast<int>(exps_.size()) > kMaxVars) throw JetError("multi-index: bad arity");
  for (int e : exps_)
    if (e < 0 || e > kMaxExponent) throw JetError("multi-index: exponent out of range");
}

MultiIndex MultiIndex::from_key(std::uint64_t key, int num_vars) {
  std::vector<int> e(num_vars);
  for (int i = 0; i < num_vars; ++i) e[i] = key_exponent(key, i);
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::unit(int num_vars, int var) {
  std::vector<int> e(num_vars, 0);
  e.at(var) = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::degree() const {
  int d = 0;
  for (int e : exps_) d += e;
  return d;
}

std::uint64_t MultiIndex::key() const {
  std::uint64_t k = 0;
  for (int i = 0; i < num_vars(); ++i) k |= static_cast<std::uint64_t>(exps_[i]) << key_shift(i);
  return k;
}

namespace {

double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// n! / prod(mu!) over the multiplicities of the nonzero entries.
double ordering_factor(const std::vector<int>& idx, int& count) {
  std::map<int, int> mult;
  count = 0;
  for (int a : idx)
    if (a != 0) {
      ++mult[a];
      ++count;
    }
  double f = factorial(count);
  for (const auto& [a, mu] : mult) f /= factorial(mu);
  return f;
}

}  // namespace

template <class S>
S normalized_coefficient(const Jet<S>& a, const std::vector<int>& upper, const std::vector<int>& lower) {
  std::vector<int> e(a.num_vars(), 0);
  auto bump = [&](int var) {
    if (var < 0 || var >= a.num_vars()) throw JetError("normalized_coefficient: index out of range");
    ++e[var];
  };
  for (int i : upper)
    if (i != 0) bump(2 * (i - 1));
  for (int i : lower)
    if (i != 0) bump(2 * (i - 1) + 1);
  MultiIndex mi(e);
  if (mi.degree() > a.trunc_degree()) throw JetError("normalized_coefficient: degree exceeds truncation");
  int n = 0, m = 0;
  const double factor = ordering_factor(upper, n) * ordering_factor(lower, m);
  const S c = a.coeff(mi);
  return c / S(ScalarTraits<S>::from_int(static_cast<long>(factor + 0.5)));
}

template Complex normalized_coefficient(const ComplexJet&, const std::vector<int>&, const std::vector<int>&);
template Rational normalized_coefficient(const ExactJet&, const std::vector<int>&, const std::vector<int>&);

ComplexJet to_complex(const ExactJet& a) {
  return a.map_coefficients([](const Rational& c) { return Complex(c.get_d(), 0.0); });
}

ComplexJet to_complex(const Jet<GaussianRational>& a) {
  return a.map_coefficients([](const GaussianRational& c) { return Complex(c.re.get_d(), c.im.get_d()); });
}

ExactJet real_part_exact(const Jet<GaussianRational>& a) {
  return a.map_coefficients([](const GaussianRational& c) { return c.re; });
}

ExactJet imag_part_exact(const Jet<GaussianRational>& a) {
  return a.map_coefficients([](const GaussianRational& c) { return c.im; });
}

}  // namespace charvar
