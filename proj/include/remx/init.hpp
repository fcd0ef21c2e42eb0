#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "remx/physics.hpp"
#include "remx/state.hpp"

namespace remx {

/// One sinusoid amplitude * sin(2 pi sum_a mode_a x_a / L_a + phase).
struct ModeSpec {
  double amplitude = 0.0;
  std::array<int, 3> mode{1, 0, 0};
  double phase = 0.0;

  friend bool operator==(const ModeSpec&, const ModeSpec&) = default;
};

/// Perturbed quantities. a1..a3 is the vector potential of the magnetic
/// perturbation (B = B_bar + curl a), c1..c3 the potential of the
/// solenoidal part of the electric field (E = grad phi + curl c, phi from
/// the Gauss law).
enum PerturbedField : int {
  kPertRho, kPertU1, kPertU2, kPertU3, kPertTheta, kPertEr,
  kPertA1, kPertA2, kPertA3, kPertC1, kPertC2, kPertC3,
  kPertCount
};

std::string_view perturbed_field_name(int field);

struct PerturbationSpec {
  std::array<ModeSpec, kPertCount> fields{};

  friend bool operator==(const PerturbationSpec&,
                         const PerturbationSpec&) = default;
};

double mode_value(const ModeSpec& mode, const Vec3& x, const GridShape& shape);

/// Constraint-compatible initial fields around `eq`:
///  - rho, u, theta, E_r: sinusoids added to the equilibrium, the density
///    perturbation shifted to exactly zero discrete mean;
///  - B: B_bar plus the centered curl of the sampled vector potential, so
///    the centered divergence vanishes to round-off;
///  - E: centered gradient of the solution of the discrete Gauss law plus
///    the centered curl of the second potential.
/// Throws ConfigError for a mode that is not resolvable on the grid or a
/// state outside O1 x O2, ConvergenceError if the Poisson solve fails.
FieldGrid init_fields(const GridShape& shape, const Model& model,
                      const Equilibrium& eq, const PerturbationSpec& spec);

/// Solves div_c grad_c phi = rhs on the periodic grid by conjugate
/// gradients (centered operators on both sides). The components of rhs in
/// the operator's null space (constants and grid-scale checkerboards) are
/// removed first. Converges when the RMS residual is below
/// tol * max(1, RMS(rhs)).
std::vector<double> solve_gauss_potential(const FieldGrid& geometry,
                                          std::vector<double> rhs,
                                          double tol = 1e-12);

/// Throws DomainError unless every cell satisfies rho in (rho/2, 2 rho),
/// theta and T_r in (theta/2, 2 theta) of the equilibrium.
void check_admissible(const FieldGrid& grid, const Model& model,
                      const Equilibrium& eq);

}  // namespace remx
