#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "remx/thermo.hpp"
#include "remx/vec3.hpp"

namespace remx {

/// Cell unknowns in primitive form.
struct PrimitiveState {
  double rho = 1.0;
  Vec3 u;
  double theta = 1.0;
  double er = 1.0;  ///< radiative energy E_r
  Vec3 b;           ///< magnetic induction
  Vec3 e;           ///< electric field

  friend bool operator==(const PrimitiveState&,
                         const PrimitiveState&) = default;
};

/// Cell unknowns in balance-law form: rho, m = rho u, matter total energy
/// rho (|u|^2 / 2 + e), E_r, B, E.
struct ConservedState {
  double rho = 0.0;
  Vec3 m;
  double energy = 0.0;
  double er = 0.0;
  Vec3 b;
  Vec3 e;

  ConservedState& operator+=(const ConservedState& o);
  ConservedState& operator*=(double s);

  friend bool operator==(const ConservedState&,
                         const ConservedState&) = default;
};

ConservedState operator+(ConservedState a, const ConservedState& b);
ConservedState operator-(ConservedState a, const ConservedState& b);
ConservedState operator*(double s, ConservedState a);

/// Constant reference state (rho, 0, theta, a theta^4, B, 0).
struct Equilibrium {
  double rho = 1.0;
  double theta = 1.0;
  double er = 1.0;
  Vec3 b;

  PrimitiveState primitive() const;
};

/// Builds an equilibrium with E_r set by the compatibility condition.
Equilibrium make_equilibrium(double rho, double theta, const Vec3& b,
                             const RadiationClosure& rad);

/// Throws DomainError unless rho, theta > 0 and E_r == a theta^4 to
/// relative tolerance tol.
void check_compatible(const Equilibrium& eq, const RadiationClosure& rad,
                      double tol = 1e-12);

ConservedState to_conserved(const PrimitiveState& prim,
                            const EquationOfState& eos);

/// Inverse of to_conserved. The temperature comes from the closed form for
/// the ideal gas and from EquationOfState::temperature otherwise, using
/// theta_guess as the starting point. Positivity failures name `cell`.
PrimitiveState to_primitive(const ConservedState& cons,
                            const EquationOfState& eos,
                            double theta_guess = 1.0, std::size_t cell = 0);

/// Uniform periodic Cartesian grid. Axes beyond `dim` have one cell and take
/// no part in differencing.
struct GridShape {
  int dim = 1;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> length{1.0, 1.0, 1.0};

  double dx(int axis) const { return length[axis] / n[axis]; }
  std::size_t cells() const {
    return static_cast<std::size_t>(n[0]) * n[1] * n[2];
  }
  /// Cell volume; inactive axes count with unit extent.
  double cell_volume() const;
  double volume() const;
  bool active(int axis) const { return axis < dim; }

  /// Throws DomainError on inconsistent metadata.
  void validate() const;

  friend bool operator==(const GridShape&, const GridShape&) = default;
};

class FieldGrid {
 public:
  FieldGrid() = default;
  explicit FieldGrid(const GridShape& shape);

  const GridShape& shape() const { return shape_; }
  std::size_t size() const { return cells_.size(); }

  ConservedState& operator[](std::size_t idx) { return cells_[idx]; }
  const ConservedState& operator[](std::size_t idx) const {
    return cells_[idx];
  }
  std::vector<ConservedState>& cells() { return cells_; }
  const std::vector<ConservedState>& cells() const { return cells_; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           stride_[1] * static_cast<std::size_t>(j) +
           stride_[2] * static_cast<std::size_t>(k);
  }
  std::array<int, 3> coords(std::size_t idx) const;

  /// Index of the cell `offset` cells away along `axis`, wrapping
  /// periodically.
  std::size_t neighbor(std::size_t idx, int axis, int offset) const {
    const long n = shape_.n[axis];
    const long c = static_cast<long>((idx / stride_[axis]) % n);
    long cn = (c + offset) % n;
    if (cn < 0) cn += n;
    return idx + static_cast<std::size_t>(cn - c) * stride_[axis];
  }

  /// Cell-center coordinates in [0, L).
  Vec3 center(std::size_t idx) const;

 private:
  GridShape shape_;
  std::array<std::size_t, 3> stride_{1, 1, 1};
  std::vector<ConservedState> cells_;
};

/// Grid filled with the conserved image of a constant primitive state.
FieldGrid uniform_grid(const GridShape& shape, const PrimitiveState& prim,
                       const EquationOfState& eos);

}  // namespace remx
