#pragma once

#include <array>
#include <memory>
#include <utility>

#include "remx/state.hpp"
#include "remx/thermo.hpp"

namespace remx {

/// Material and coupling parameters shared by every pointwise kernel.
struct Model {
  std::shared_ptr<const EquationOfState> eos;
  RadiationClosure rad;
  double nu = 1.0;  ///< momentum relaxation rate 1 / tau

  const EquationOfState& matter() const { return *eos; }
};

/// Default closure used throughout the tests and the CLI.
Model make_ideal_model(double gas_constant, double specific_heat, double a,
                       double sigma_a, double nu);

/// Transported unknowns (rho, m1, m2, m3, matter energy, E_r).
using TransportVector = std::array<double, 6>;

enum TransportIndex : int { kRho = 0, kMx = 1, kMy = 2, kMz = 3, kEnergy = 4, kEr = 5 };

TransportVector transport_state(const PrimitiveState& prim,
                                const EquationOfState& eos);

/// Physical flux along `axis`: rho u_a, rho u u_a + (p + p_r) e_a,
/// (rho E + p) u_a, E_r u_a. The radiative work u.grad p_r and p_r div u
/// are handled by nonconservative_terms.
TransportVector transport_flux(const PrimitiveState& prim, int axis,
                               const Model& model);

struct NonconservativeTerms {
  double energy = 0.0;  ///< -u . grad p_r, added to the matter energy rate
  double er = 0.0;      ///< -p_r div u, added to the E_r rate
};

NonconservativeTerms nonconservative_terms(const PrimitiveState& prim,
                                           const Vec3& grad_pr, double div_u);

/// Zeroth-order right-hand side of the balance laws.
struct SourceVector {
  Vec3 momentum;      ///< -rho (E + u x B) - nu rho u
  double energy = 0;  ///< -exchange - rho E . u
  double er = 0;      ///< +exchange
  Vec3 electric;      ///< +rho u (the current term of the Ampere law)
  double exchange = 0;  ///< sigma_a (a theta^4 - E_r)
};

SourceVector local_sources(const PrimitiveState& prim, const Model& model);

/// c_tot^2 = p_rho + theta p_theta^2 / (rho^2 C_v) + 4 E_r / (3 rho).
double sound_speed_bound(const PrimitiveState& prim, const Model& model);

/// max(1, |u_a| + 1.2 c_tot). The 1 is the light speed of the Maxwell block.
double max_wave_speed(const PrimitiveState& prim, int axis,
                      const Model& model);

TransportVector rusanov_flux(const PrimitiveState& left,
                             const PrimitiveState& right, int axis,
                             const Model& model);

/// Variant of rusanov_flux taking precomputed wave speeds.
TransportVector rusanov_flux(const PrimitiveState& left,
                             const PrimitiveState& right, int axis,
                             const Model& model, double lambda);

/// Interface reconstruction applied to (rho, u, theta, E_r).
enum class Reconstruction { first_order, linear, minmod };

/// Left and right states at the face between `c0` and `c1`, given the
/// stencil (cm, c0, c1, cp). Falls back to first order if a reconstructed
/// state is not positive.
std::pair<PrimitiveState, PrimitiveState> interface_states(
    const PrimitiveState& cm, const PrimitiveState& c0,
    const PrimitiveState& c1, const PrimitiveState& cp, Reconstruction recon);

}  // namespace remx
