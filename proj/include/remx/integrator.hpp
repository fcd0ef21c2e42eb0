#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "remx/diagnostics.hpp"
#include "remx/kernels.hpp"
#include "remx/physics.hpp"
#include "remx/state.hpp"

namespace remx {

/// External forcing added to the transport right-hand side (used by the
/// manufactured-solution tests). Receives the cell center and stage time.
using Forcing = std::function<ConservedState(const Vec3& x, double t)>;

/// Explicit scheme of the transport + curl stage. Two-stage midpoint is
/// unstable on the imaginary axis (|R(iy)|^2 = 1 + y^4 / 4), which the
/// centered curl pair excites over long runs; the three-stage SSP scheme
/// is stable there for |y| <= sqrt(3).
enum class TimeScheme { midpoint, ssp_rk3 };

struct StepperOptions {
  Reconstruction recon = Reconstruction::linear;
  TimeScheme scheme = TimeScheme::ssp_rk3;
  Exec exec = Exec::parallel;
  Forcing forcing;
};

/// Implicit-midpoint update of the cell-local system
///   dm/dt = -rho E - m x B - nu m,   dE/dt = m
/// with rho and B frozen. The matter energy absorbs the change of the
/// electric energy, so rho e + |m|^2 / (2 rho) + |E|^2 / 2 only changes by
/// the damping heat, which stays in the internal energy.
void momentum_electric_update(ConservedState& cell, double dt, double nu);

/// Radiative exchange d(rho e)/dt = -sigma_a (a theta^4 - E_r) = -dE_r/dt at
/// fixed rho and m, advanced with a midpoint rule. rho e + E_r is conserved
/// exactly; theta comes from a safeguarded Newton iteration (tolerance
/// 1e-12, bisection fallback on an expanding bracket).
void radiative_exchange_update(ConservedState& cell, const Model& model,
                               double dt, std::size_t cell_index = 0);

/// Symmetric composition of the two cell-local updates over dt.
void source_update_cell(ConservedState& cell, const Model& model, double dt,
                        std::size_t cell_index = 0);

/// Owns scratch buffers for one grid size; not thread-safe itself, the
/// kernels it calls are parallel.
class Stepper {
 public:
  Stepper(Model model, StepperOptions options);

  const Model& model() const { return model_; }
  const StepperOptions& options() const { return options_; }

  /// CFL * min dx / lambda, capped so that t + dt does not pass t_end.
  double cfl_dt(const FieldGrid& grid, double cfl, double t,
                double t_end) const;

  /// Explicit update of the transport and curl terms (options().scheme).
  void hyperbolic_step(FieldGrid& grid, double dt, double t = 0.0);

  /// Local source update of every cell.
  void source_step(FieldGrid& grid, double dt) const;

  /// source(dt/2) o hyperbolic(dt) o source(dt/2).
  void strang_step(FieldGrid& grid, double dt, double t = 0.0);

 private:
  void rhs(const FieldGrid& grid, double t);

  Model model_;
  StepperOptions options_;
  mutable std::vector<PrimitiveState> prim_;
  std::vector<ConservedState> rhs_;
  FieldGrid stage_;
  FieldGrid stage2_;
};

struct RunParams {
  double cfl = 0.5;
  double t_end = 1.0;
  double output_every = 0.1;        ///< diagnostics cadence in time units
  std::optional<double> fixed_dt;   ///< overrides the CFL step when set
  double constraint_tol = 1e-10;    ///< initial RMS residual limit
  bool check_constraints = true;
  StepperOptions stepper;
  /// Last record of a previous segment; continues the running accumulators.
  std::optional<DiagnosticsRecord> resume;
};

/// Called at every output time with the current fields.
using RunObserver =
    std::function<void(const FieldGrid& grid, double t, long step,
                       std::size_t output_index)>;

struct RunResult {
  DiagnosticsSeries series;
  FieldGrid fields;
  double time = 0.0;
  long steps = 0;
};

/// Advances `initial` from t0 to params.t_end, recording diagnostics at t0
/// and every output_every. Refuses to start if the discrete div B or Gauss
/// residual exceeds params.constraint_tol. Stage failures are rethrown as
/// RunAbort carrying time and step.
RunResult run(FieldGrid initial, const Model& model, const Equilibrium& eq,
              const RunParams& params, const RunObserver& observer = {},
              double t0 = 0.0, long step0 = 0);

}  // namespace remx
