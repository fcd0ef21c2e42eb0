#include "remx/state.hpp"

#include <cmath>
#include <sstream>

#include "remx/errors.hpp"

namespace remx {

ConservedState& ConservedState::operator+=(const ConservedState& o) {
  rho += o.rho;
  m += o.m;
  energy += o.energy;
  er += o.er;
  b += o.b;
  e += o.e;
  return *this;
}

ConservedState& ConservedState::operator*=(double s) {
  rho *= s;
  m *= s;
  energy *= s;
  er *= s;
  b *= s;
  e *= s;
  return *this;
}

ConservedState operator+(ConservedState a, const ConservedState& b) {
  return a += b;
}

ConservedState operator-(ConservedState a, const ConservedState& b) {
  a.rho -= b.rho;
  a.m -= b.m;
  a.energy -= b.energy;
  a.er -= b.er;
  a.b -= b.b;
  a.e -= b.e;
  return a;
}

ConservedState operator*(double s, ConservedState a) { return a *= s; }

PrimitiveState Equilibrium::primitive() const {
  PrimitiveState p;
  p.rho = rho;
  p.theta = theta;
  p.er = er;
  p.b = b;
  return p;
}

Equilibrium make_equilibrium(double rho, double theta, const Vec3& b,
                             const RadiationClosure& rad) {
  if (!(rho > 0.0) || !(theta > 0.0)) {
    throw DomainError("equilibrium density and temperature must be positive");
  }
  return Equilibrium{rho, theta, rad.energy(theta), b};
}

void check_compatible(const Equilibrium& eq, const RadiationClosure& rad,
                      double tol) {
  if (!(eq.rho > 0.0) || !(eq.theta > 0.0) || !(eq.er > 0.0)) {
    throw DomainError("equilibrium rho, theta, E_r must be positive");
  }
  const double target = rad.energy(eq.theta);
  if (std::abs(eq.er - target) > tol * target) {
    std::ostringstream os;
    os << "incompatible equilibrium: E_r=" << eq.er << " but a*theta^4="
       << target;
    throw DomainError(os.str());
  }
}

ConservedState to_conserved(const PrimitiveState& prim,
                            const EquationOfState& eos) {
  ConservedState c;
  c.rho = prim.rho;
  c.m = prim.rho * prim.u;
  c.energy = prim.rho * (0.5 * norm2(prim.u) +
                         eos.internal_energy(prim.rho, prim.theta));
  c.er = prim.er;
  c.b = prim.b;
  c.e = prim.e;
  return c;
}

PrimitiveState to_primitive(const ConservedState& cons,
                            const EquationOfState& eos, double theta_guess,
                            std::size_t cell) {
  if (!(cons.rho > 0.0) || !std::isfinite(cons.rho)) {
    throw PositivityError("non-positive density " + std::to_string(cons.rho),
                          cell);
  }
  if (!(cons.er > 0.0) || !std::isfinite(cons.er)) {
    throw PositivityError(
        "non-positive radiative energy " + std::to_string(cons.er), cell);
  }
  PrimitiveState p;
  p.rho = cons.rho;
  p.u = (1.0 / cons.rho) * cons.m;
  const double e_int = cons.energy / cons.rho - 0.5 * norm2(p.u);
  if (!(e_int > 0.0) || !std::isfinite(e_int)) {
    throw PositivityError(
        "non-positive internal energy " + std::to_string(e_int), cell);
  }
  try {
    p.theta = eos.temperature(cons.rho, e_int, theta_guess);
  } catch (const PositivityError& err) {
    throw PositivityError(err.what(), cell);
  }
  p.er = cons.er;
  p.b = cons.b;
  p.e = cons.e;
  return p;
}

double GridShape::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= dx(a);
  return v;
}

double GridShape::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= length[a];
  return v;
}

void GridShape::validate() const {
  if (dim < 1 || dim > 3) throw DomainError("grid dimension must be 1, 2 or 3");
  for (int a = 0; a < 3; ++a) {
    if (a < dim) {
      if (n[a] < 3) throw DomainError("active axes need at least 3 cells");
      if (!(length[a] > 0.0)) throw DomainError("grid length must be positive");
    } else if (n[a] != 1) {
      throw DomainError("inactive axes must have exactly one cell");
    }
  }
}

FieldGrid::FieldGrid(const GridShape& shape) : shape_(shape) {
  shape_.validate();
  stride_ = {1, static_cast<std::size_t>(shape.n[0]),
             static_cast<std::size_t>(shape.n[0]) * shape.n[1]};
  cells_.resize(shape.cells());
}

std::array<int, 3> FieldGrid::coords(std::size_t idx) const {
  return {static_cast<int>(idx % shape_.n[0]),
          static_cast<int>((idx / stride_[1]) % shape_.n[1]),
          static_cast<int>(idx / stride_[2])};
}

Vec3 FieldGrid::center(std::size_t idx) const {
  const auto c = coords(idx);
  Vec3 x;
  for (int a = 0; a < 3; ++a) {
    x[a] = shape_.active(a) ? (c[a] + 0.5) * shape_.dx(a) : 0.0;
  }
  return x;
}

FieldGrid uniform_grid(const GridShape& shape, const PrimitiveState& prim,
                       const EquationOfState& eos) {
  FieldGrid grid(shape);
  const ConservedState c = to_conserved(prim, eos);
  for (auto& cell : grid.cells()) cell = c;
  return grid;
}

}  // namespace remx
