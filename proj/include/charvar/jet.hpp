#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace charvar {

using Rational = mpq_class;

// GMP assumes canonical operands; values built as Rational(n, d) may not be.
inline Rational canonical(Rational q) {
  q.canonicalize();
  return q;
}
using Complex = std::complex<double>;

class JetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact a + b i over the rationals; only used to expand polynomials written in
// trace / inverse-trace variables into real unitary coordinates.
struct GaussianRational {
  Rational re{0};
  Rational im{0};

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(int r) : re(r), im(0) {}

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static Rational from_int(long v) { return Rational(v); }
  static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
};

template <>
struct ScalarTraits<Complex> {
  static bool is_zero(const Complex& x) { return x == Complex{}; }
  static Complex from_int(long v) { return Complex(static_cast<double>(v), 0.0); }
  static Complex to_complex(const Complex& x) { return x; }
};

template <>
struct ScalarTraits<GaussianRational> {
  static bool is_zero(const GaussianRational& x) { return sgn(x.re) == 0 && sgn(x.im) == 0; }
  static GaussianRational from_int(long v) { return GaussianRational(Rational(v)); }
  static Complex to_complex(const GaussianRational& x) { return {x.re.get_d(), x.im.get_d()}; }
};

inline constexpr int kMaxVars = 9;
inline constexpr int kBitsPerVar = 7;
inline constexpr int kMaxExponent = (1 << kBitsPerVar) - 1;

// Exponent vector. Packs into a 63-bit key with variable 0 in the most
// significant field, so comparing keys compares exponent vectors lexicographically.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex from_key(std::uint64_t key, int num_vars);
  static MultiIndex unit(int num_vars, int var);

  int num_vars() const { return static_cast<int>(exps_.size()); }
  int operator[](int i) const { return exps_.at(i); }
  const std::vector<int>& exponents() const { return exps_; }
  int degree() const;
  std::uint64_t key() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> exps_;
};

inline int key_shift(int var) { return kBitsPerVar * (kMaxVars - 1 - var); }
inline int key_exponent(std::uint64_t key, int var) {
  return static_cast<int>((key >> key_shift(var)) & kMaxExponent);
}

enum class Recentering { forbidden, allowed };

template <class S>
class Jet {
 public:
  using Scalar = S;
  struct Term {
    std::uint64_t key;
    int degree;
    S coeff;
  };

  explicit Jet(int num_vars = 1, int trunc_degree = 3) : n_(num_vars), d_(trunc_degree) {
    if (n_ < 1 || n_ > kMaxVars) throw JetError("jet: num_vars out of range");
    if (d_ < 0 || d_ > kMaxExponent) throw JetError("jet: trunc_degree out of range");
  }

  static Jet constant(int num_vars, int trunc_degree, const S& c) {
    Jet j(num_vars, trunc_degree);
    if (!ScalarTraits<S>::is_zero(c)) j.terms_.push_back({0, 0, c});
    return j;
  }
  static Jet variable(int num_vars, int trunc_degree, int var) {
    Jet j(num_vars, trunc_degree);
    if (var < 0 || var >= num_vars) throw JetError("jet: variable index out of range");
    if (trunc_degree >= 1) j.terms_.push_back({std::uint64_t{1} << key_shift(var), 1, ScalarTraits<S>::from_int(1)});
    return j;
  }
  static Jet from_terms(int num_vars, int trunc_degree, const std::vector<std::pair<MultiIndex, S>>& terms) {
    Jet j(num_vars, trunc_degree);
    j.terms_.reserve(terms.size());
    for (const auto& [mi, c] : terms) {
      if (mi.num_vars() != num_vars) throw JetError("jet: multi-index arity mismatch");
      const int deg = mi.degree();
      if (deg <= trunc_degree) j.terms_.push_back({mi.key(), deg, c});
    }
    j.canonicalize();
    return j;
  }

  int num_vars() const { return n_; }
  int trunc_degree() const { return d_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  MultiIndex index_of(const Term& t) const { return MultiIndex::from_key(t.key, n_); }

  S coeff(const MultiIndex& mi) const {
    if (mi.num_vars() != n_) throw JetError("jet: multi-index arity mismatch");
    return coeff_by_key(mi.key(), mi.degree());
  }
  S coeff_by_key(std::uint64_t key, int degree) const {
    const Term probe{key, degree, S{}};
    auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, graded_less);
    if (it != terms_.end() && it->key == key) return it->coeff;
    return S{};
  }
  S constant_term() const { return coeff_by_key(0, 0); }

  int max_degree() const { return terms_.empty() ? 0 : terms_.back().degree; }

  Jet degree_part(int k) const {
    Jet r(n_, d_);
    for (const auto& t : terms_)
      if (t.degree == k) r.terms_.push_back(t);
    return r;
  }
  // Drops terms above degree k; the truncation degree is kept.
  Jet truncated(int k) const {
    Jet r(n_, d_);
    for (const auto& t : terms_)
      if (t.degree <= k) r.terms_.push_back(t);
    return r;
  }
  // Reinterprets the same coefficients under a different truncation degree.
  Jet with_trunc_degree(int d) const {
    Jet r(n_, d);
    for (const auto& t : terms_)
      if (t.degree <= d) r.terms_.push_back(t);
    return r;
  }

  template <class F>
  auto map_coefficients(F&& f) const -> Jet<decltype(f(std::declval<const S&>()))> {
    using R = decltype(f(std::declval<const S&>()));
    Jet<R> r(n_, d_);
    std::vector<typename Jet<R>::Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({t.key, t.degree, f(t.coeff)});
    r.adopt(std::move(out));
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }
  Jet& operator+=(const Jet& o) {
    check_shape(o);
    auto merged = terms_;
    merged.insert(merged.end(), o.terms_.begin(), o.terms_.end());
    adopt(std::move(merged));
    return *this;
  }
  Jet& operator-=(const Jet& o) { return *this += -o; }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, const S& c) { return a += constant(a.n_, a.d_, c); }
  friend Jet operator+(const S& c, Jet a) { return a += constant(a.n_, a.d_, c); }
  friend Jet operator-(Jet a, const S& c) { return a += constant(a.n_, a.d_, S(-c)); }
  friend Jet operator-(const S& c, const Jet& a) { return constant(a.n_, a.d_, c) - a; }

  friend Jet operator*(const Jet& a, const S& c) {
    Jet r(a.n_, a.d_);
    if (ScalarTraits<S>::is_zero(c)) return r;
    std::vector<Term> out;
    out.reserve(a.terms_.size());
    for (const auto& t : a.terms_) out.push_back({t.key, t.degree, S(t.coeff * c)});
    r.adopt(std::move(out));
    return r;
  }
  friend Jet operator*(const S& c, const Jet& a) { return a * c; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_shape(b);
    Jet r(a.n_, a.d_);
    std::vector<Term> out;
    multiply_into(a, b, S(ScalarTraits<S>::from_int(1)), out);
    r.adopt(std::move(out));
    return r;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }

  friend bool operator==(const Jet& a, const Jet& b) {
    if (a.n_ != b.n_ || a.d_ != b.d_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].key != b.terms_[i].key || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
    return true;
  }

  // Appends scale * a * b (truncated) to out without canonicalizing.
  static void multiply_into(const Jet& a, const Jet& b, const S& scale, std::vector<Term>& out) {
    const int d = a.d_;
    for (const auto& ta : a.terms_) {
      const int room = d - ta.degree;
      if (room < 0) break;
      const S ca = ta.coeff * scale;
      for (const auto& tb : b.terms_) {
        if (tb.degree > room) break;
        out.push_back({ta.key + tb.key, ta.degree + tb.degree, S(ca * tb.coeff)});
      }
    }
  }

  void adopt(std::vector<Term> raw) {
    terms_ = std::move(raw);
    canonicalize();
  }

 private:
  static bool graded_less(const Term& a, const Term& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.key > b.key;
  }

  void check_shape(const Jet& o) const {
    if (n_ != o.n_ || d_ != o.d_) throw JetError("jet: shape mismatch");
  }

  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(), graded_less);
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!merged.empty() && merged.back().key == t.key) {
        merged.back().coeff += t.coeff;
      } else {
        if (!merged.empty() && ScalarTraits<S>::is_zero(merged.back().coeff)) merged.pop_back();
        merged.push_back(std::move(t));
      }
    }
    if (!merged.empty() && ScalarTraits<S>::is_zero(merged.back().coeff)) merged.pop_back();
    terms_ = std::move(merged);
  }

  int n_;
  int d_;
  std::vector<Term> terms_;
};

using ExactJet = Jet<Rational>;
using ComplexJet = Jet<Complex>;

// Components sharing one shape.
template <class S>
class JetVector {
 public:
  JetVector() = default;
  explicit JetVector(std::vector<Jet<S>> components) : comps_(std::move(components)) {
    for (const auto& c : comps_)
      if (c.num_vars() != comps_.front().num_vars() || c.trunc_degree() != comps_.front().trunc_degree())
        throw JetError("jet vector: components disagree on shape");
  }

  static JetVector identity(int num_vars, int trunc_degree) {
    std::vector<Jet<S>> c;
    for (int i = 0; i < num_vars; ++i) c.push_back(Jet<S>::variable(num_vars, trunc_degree, i));
    return JetVector(std::move(c));
  }

  std::size_t size() const { return comps_.size(); }
  const Jet<S>& operator[](std::size_t i) const { return comps_.at(i); }
  const std::vector<Jet<S>>& components() const { return comps_; }
  int num_vars() const { return comps_.empty() ? 0 : comps_.front().num_vars(); }
  int trunc_degree() const { return comps_.empty() ? 0 : comps_.front().trunc_degree(); }

  friend bool operator==(const JetVector&, const JetVector&) = default;

 private:
  std::vector<Jet<S>> comps_;
};

using ComplexJetVector = JetVector<Complex>;
using ExactJetVector = JetVector<Rational>;

template <class S>
Jet<S> derivative(const Jet<S>& a, int var) {
  if (var < 0 || var >= a.num_vars()) throw JetError("derivative: variable index out of range");
  std::vector<typename Jet<S>::Term> out;
  const std::uint64_t unit = std::uint64_t{1} << key_shift(var);
  for (const auto& t : a.terms()) {
    const int e = key_exponent(t.key, var);
    if (e == 0) continue;
    out.push_back({t.key - unit, t.degree - 1, S(t.coeff * ScalarTraits<S>::from_int(e))});
  }
  Jet<S> r(a.num_vars(), a.trunc_degree());
  r.adopt(std::move(out));
  return r;
}

template <class S>
S eval(const Jet<S>& a, std::span<const S> point) {
  if (static_cast<int>(point.size()) != a.num_vars()) throw JetError("eval: point length mismatch");
  const int n = a.num_vars();
  const int d = std::max(a.max_degree(), 0);
  std::vector<std::vector<S>> powers(n, std::vector<S>(d + 1));
  for (int i = 0; i < n; ++i) {
    powers[i][0] = ScalarTraits<S>::from_int(1);
    for (int k = 1; k <= d; ++k) powers[i][k] = powers[i][k - 1] * point[i];
  }
  S acc{};
  for (const auto& t : a.terms()) {
    S m = t.coeff;
    for (int i = 0; i < n; ++i) {
      const int e = key_exponent(t.key, i);
      if (e) m = m * powers[i][e];
    }
    acc += m;
  }
  return acc;
}

template <class S>
S eval(const Jet<S>& a, const std::vector<S>& point) {
  return eval(a, std::span<const S>(point));
}

// outer(inner_0, ..., inner_{n-1}) truncated at the inner truncation degree.
template <class S>
Jet<S> compose(const Jet<S>& outer, const JetVector<S>& inner, Recentering mode = Recentering::forbidden) {
  if (static_cast<int>(inner.size()) != outer.num_vars()) throw JetError("compose: component count mismatch");
  const int m = inner.num_vars();
  const int d = inner.trunc_degree();
  bool zero_constants = true;
  for (const auto& c : inner.components())
    if (!ScalarTraits<S>::is_zero(c.constant_term())) zero_constants = false;
  if (!zero_constants && mode == Recentering::forbidden)
    throw JetError("compose: inner jet has a nonzero constant term");

  const int n = outer.num_vars();
  std::vector<int> max_exp(n, 0);
  for (const auto& t : outer.terms())
    for (int i = 0; i < n; ++i) max_exp[i] = std::max(max_exp[i], key_exponent(t.key, i));
  std::vector<std::vector<Jet<S>>> powers(n);
  for (int i = 0; i < n; ++i) {
    powers[i].push_back(Jet<S>::constant(m, d, ScalarTraits<S>::from_int(1)));
    for (int k = 1; k <= max_exp[i]; ++k) powers[i].push_back(powers[i].back() * inner[i]);
  }

  std::vector<typename Jet<S>::Term> acc;
  std::unordered_map<std::uint64_t, Jet<S>> prefix_cache;
  for (const auto& t : outer.terms()) {
    if (zero_constants && t.degree > d) break;
    // Build the monomial as a product of cached powers, reusing the product of
    // all but the last variable when several outer terms share it.
    int last = -1;
    for (int i = 0; i < n; ++i)
      if (key_exponent(t.key, i)) last = i;
    if (last < 0) {
      acc.push_back({0, 0, t.coeff});
      continue;
    }
    const std::uint64_t prefix_key = t.key & ~((std::uint64_t{kMaxExponent}) << key_shift(last));
    auto it = prefix_cache.find(prefix_key);
    if (it == prefix_cache.end()) {
      Jet<S> p = Jet<S>::constant(m, d, ScalarTraits<S>::from_int(1));
      for (int i = 0; i < last; ++i) {
        const int e = key_exponent(t.key, i);
        if (e) p = p * powers[i][e];
      }
      it = prefix_cache.emplace(prefix_key, std::move(p)).first;
    }
    Jet<S>::multiply_into(it->second, powers[last][key_exponent(t.key, last)], t.coeff, acc);
  }
  Jet<S> r(m, d);
  r.adopt(std::move(acc));
  return r;
}

template <class S>
JetVector<S> compose(const JetVector<S>& outer, const JetVector<S>& inner, Recentering mode = Recentering::forbidden) {
  std::vector<Jet<S>> out;
  out.reserve(outer.size());
  for (const auto& c : outer.components()) out.push_back(compose(c, inner, mode));
  return JetVector<S>(std::move(out));
}

// Coefficient of the unordered monomial xi_{a_1}..xi_{a_n} eta_{b_1}..eta_{b_m}
// divided by n! m! / prod(mu!), with xi_a the variable 2(a-1), eta_b the
// variable 2(b-1)+1 and index 0 standing for the constant 1.
template <class S>
S normalized_coefficient(const Jet<S>& a, const std::vector<int>& upper, const std::vector<int>& lower);

ComplexJet to_complex(const ExactJet& a);
ComplexJet to_complex(const Jet<GaussianRational>& a);
ExactJet real_part_exact(const Jet<GaussianRational>& a);
ExactJet imag_part_exact(const Jet<GaussianRational>& a);

}  // namespace charvar
