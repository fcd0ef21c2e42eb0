#pragma once

#include "remx/init.hpp"
#include "remx/physics.hpp"
#include "remx/state.hpp"

namespace remx::testing {

inline Model canonical_model() { return make_ideal_model(1.0, 1.5, 1.0, 1.0, 1.0); }

inline Equilibrium canonical_equilibrium(const Model& m) {
  return make_equilibrium(1.0, 1.0, {0.5, 0.5, 0.0}, m.rad);
}

// Every field gets a mode; amplitude eps.
inline PerturbationSpec full_perturbation(int dim, double eps) {
  PerturbationSpec spec;
  for (int f = 0; f < kPertCount; ++f) {
    ModeSpec& mode = spec.fields[f];
    mode.amplitude = f >= kPertA1 ? 0.2 * eps : eps;
    mode.phase = 0.37 * f;
    mode.mode = {1, dim > 1 ? (f % 2) : 0, dim > 2 ? ((f / 2) % 2) : 0};
    if (mode.mode == std::array<int, 3>{0, 0, 0}) mode.mode = {1, 0, 0};
  }
  return spec;
}

}  // namespace remx::testing
