#pragma once

#include <array>
#include <cmath>

#include "remx/integrator.hpp"
#include "remx/state.hpp"

namespace remx::mms {

/// Value with first partial derivatives in (t, x, y, z): forward-mode
/// differentiation for the manufactured residual.
struct Jet {
  double v = 0.0;
  std::array<double, 4> d{};

  static Jet constant(double value) { return {value, {}}; }
  double dt() const { return d[0]; }
  double dx(int axis) const { return d[1 + axis]; }
};

inline Jet operator+(Jet a, const Jet& b) {
  a.v += b.v;
  for (int i = 0; i < 4; ++i) a.d[i] += b.d[i];
  return a;
}
inline Jet operator-(Jet a, const Jet& b) {
  a.v -= b.v;
  for (int i = 0; i < 4; ++i) a.d[i] -= b.d[i];
  return a;
}
inline Jet operator-(Jet a) {
  a.v = -a.v;
  for (double& x : a.d) x = -x;
  return a;
}
inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r{a.v * b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
inline Jet operator*(double s, Jet a) {
  a.v *= s;
  for (double& x : a.d) x *= s;
  return a;
}
inline Jet operator/(const Jet& a, const Jet& b) {
  Jet r{a.v / b.v, {}};
  for (int i = 0; i < 4; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) / (b.v * b.v);
  return r;
}
inline Jet sin(const Jet& a) {
  Jet r{std::sin(a.v), {}};
  const double c = std::cos(a.v);
  for (int i = 0; i < 4; ++i) r.d[i] = c * a.d[i];
  return r;
}

/// Smooth periodic exact solution on the unit-periodic box with the ideal
/// gas closure. Every field is a constant plus a travelling sinusoid in the
/// active coordinates.
struct Problem {
  double gas_constant = 1.0;
  double specific_heat = 1.5;
  double a = 1.0;
  double sigma_a = 1.0;
  double nu = 1.0;
  GridShape shape;

  /// Exact primitive state at (x, t).
  PrimitiveState exact(const Vec3& x, double t) const;

  /// Residual of the balance laws evaluated on the exact solution, in
  /// conserved variables. Adding it to the transport right-hand side makes
  /// `exact` a solution of the forced system.
  ConservedState forcing(const Vec3& x, double t) const;

  Forcing forcing_function() const;
  FieldGrid exact_grid(double t) const;
  Model model() const;
};

/// RMS over cells of the primitive-vector difference between two grids.
double primitive_distance(const FieldGrid& a, const FieldGrid& b,
                          const EquationOfState& eos);

}  // namespace remx::mms
