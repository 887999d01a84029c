#include "charvar/char_variety.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace charvar {

namespace {

constexpr std::string_view kPText =
    "+ t T - t X y - T x Y + x X y Y + x X - x y Z - X Y z + y Y + z Z - 3";

constexpr std::string_view kQText =
    "- 2 t^2 x Y + t^2 X Z + t^2 y z + t^3 + t T x X + t T y Y + t T z Z - 6 t T + t x^2 y "
    "+ t x^2 Y^2 - t x X^2 y - t x X Y Z - t x y Y z - 3 t x z + t x Z^2 + t X^2 z - t X y^2 Y "
    "+ 3 t X y + t X Y^2 + t y^2 Z + t Y z^2 - 3 t Y Z + T^2 x z - 2 T^2 X y + T^2 Y Z + T^3 "
    "- T x^2 X Y + T x^2 Z - T x X y z + T x y^2 - T x y Y^2 + 3 T x Y + T X^2 y^2 + T X^2 Y "
    "- T X y Y Z + T X z^2 - 3 T X Z - 3 T y z + T y Z^2 + T Y^2 z + x^2 X^2 y Y - x^2 X y Z "
    "+ x^2 y^2 z - x^3 y Y + x^2 Y z + x^3 - x X^2 Y z + x X y^2 Y^2 - x X y^3 + x X y Y "
    "- x X Y^3 + x X z Z - 6 x X - x y^2 Y Z - 2 x y z^2 + 3 x y Z + x Y^2 Z - X^3 y Y + X^2 y Z "
    "+ X^2 Y^2 Z + X^3 + X y^2 z - X y Y^2 z + 3 X Y z - 2 X Y Z^2 + y^3 + y Y z Z - 6 y Y + Y^3 "
    "+ z^3 - 6 z Z + Z^3 + 9";

using GaussJet = Jet<GaussianRational>;

// Letter -> (real variable index, sign of the imaginary part).
bool letter_slot(char c, int& var, int& sign) {
  switch (c) {
    case 'x': var = 0; sign = 1; return true;
    case 'X': var = 0; sign = -1; return true;
    case 'y': var = 1; sign = 1; return true;
    case 'Y': var = 1; sign = -1; return true;
    case 'z': var = 2; sign = 1; return true;
    case 'Z': var = 2; sign = -1; return true;
    case 't': var = 3; sign = 1; return true;
    case 'T': var = 3; sign = -1; return true;
    default: return false;
  }
}

GaussJet trace_letter(char c) {
  int var = 0, sign = 0;
  if (!letter_slot(c, var, sign)) throw VarietyError(std::string("unknown trace letter ") + c);
  // Real parts occupy even slots, imaginary parts odd slots.
  const GaussJet re = GaussJet::variable(8, kPolyTrunc, 2 * var);
  const GaussJet im = GaussJet::variable(8, kPolyTrunc, 2 * var + 1);
  return re + im * GaussianRational(Rational(0), Rational(sign));
}

GaussJet parse_trace_polynomial(std::string_view text) {
  GaussJet acc(8, kPolyTrunc);
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto read_int = [&] {
    long v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) v = 10 * v + (text[i++] - '0');
    return v;
  };
  skip_space();
  while (i < text.size()) {
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip_space();
    }
    long coeff = 1;
    if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) coeff = read_int();
    GaussJet term = GaussJet::constant(8, kPolyTrunc, GaussianRational(Rational(sign * coeff)));
    skip_space();
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
      const GaussJet letter = trace_letter(text[i++]);
      long power = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        power = read_int();
      }
      for (long k = 0; k < power; ++k) term = term * letter;
      skip_space();
    }
    acc += term;
    skip_space();
  }
  return acc;
}

template <class S>
S evaluate_impl(const ExactJet& poly, std::span<const S> point, auto convert) {
  if (static_cast<int>(point.size()) != poly.num_vars()) throw VarietyError("evaluate: arity mismatch");
  S acc{};
  for (const auto& t : poly.terms()) {
    S m = convert(t.coeff);
    for (int i = 0; i < poly.num_vars(); ++i) {
      const int e = key_exponent(t.key, i);
      for (int k = 0; k < e; ++k) m = m * point[i];
    }
    acc += m;
  }
  return acc;
}

std::array<double, 8> eight(const Su3Point& p) { return {p.x, p.X, p.y, p.Y, p.z, p.Z, p.t, p.T}; }

}  // namespace

double kappa_su2(const Su2Point& p) { return kappa(p.x, p.y, p.z); }

bool su2_member(const Su2Point& p) {
  auto in = [](double v) { return v >= -2.0 && v <= 2.0; };
  return in(p.x) && in(p.y) && in(p.z) && in(kappa_su2(p));
}

std::string_view printed_P_text() { return kPText; }
std::string_view printed_Q_text() { return kQText; }

UnitaryExpansion expand_unitary(std::string_view trace_polynomial) {
  const GaussJet g = parse_trace_polynomial(trace_polynomial);
  return {real_part_exact(g), imag_part_exact(g)};
}

namespace {

ExactJet real_or_throw(std::string_view text) {
  UnitaryExpansion e = expand_unitary(text);
  if (!e.imag.is_zero()) throw VarietyError("unitary expansion left an imaginary part");
  return e.real;
}

}  // namespace

const ExactJet& poly_P() {
  static const ExactJet p = real_or_throw(kPText);
  return p;
}

const ExactJet& poly_Q() {
  static const ExactJet q = real_or_throw(kQText);
  return q;
}

const ExactJet& poly_H() {
  static const ExactJet h = [] {
    const ExactJet half_p = poly_P() * Rational(1, 2);
    return half_p * half_p - poly_Q();
  }();
  return h;
}

double evaluate(const ExactJet& poly, std::span<const double> point) {
  return evaluate_impl<double>(poly, point, [](const Rational& c) { return c.get_d(); });
}

Rational evaluate(const ExactJet& poly, std::span<const Rational> point) {
  return evaluate_impl<Rational>(poly, point, [](const Rational& c) { return c; });
}

double Su3Point::u() const { return P_value(*this) / 2.0; }

double P_value(const Su3Point& p) {
  const auto v = eight(p);
  return evaluate(poly_P(), std::span<const double>(v));
}

double Q_value(const Su3Point& p) {
  const auto v = eight(p);
  return evaluate(poly_Q(), std::span<const double>(v));
}

double H_value(const Su3Point& p) {
  const auto v = eight(p);
  return evaluate(poly_H(), std::span<const double>(v));
}

bool on_variety(const Su3Point& p, double tol) {
  const double P = P_value(p);
  return std::abs(p.U * p.U - (Q_value(p) - P * P / 4.0)) <= tol;
}

LevelValue boundary_map_su3(const Su3Point& p, double tol) {
  const double P = P_value(p);
  const double gap = Q_value(p) - P * P / 4.0;
  if (gap < -tol) throw VarietyError("boundary map: point is off the variety (Q - P^2/4 < 0)");
  const int sign = p.U != 0.0 ? (p.U > 0 ? 1 : -1) : p.branch;
  return {P / 2.0, sign * std::sqrt(std::max(0.0, gap))};
}

double deltoid_discriminant(const LevelValue& v) {
  const Complex tau(v.zeta, v.eta);
  const double r2 = std::norm(tau);
  return r2 * r2 - 8.0 * std::real(tau * tau * tau) + 18.0 * r2 - 27.0;
}

bool in_deltoid(const LevelValue& v, double tol) { return deltoid_discriminant(v) <= tol; }

}  // namespace charvar
