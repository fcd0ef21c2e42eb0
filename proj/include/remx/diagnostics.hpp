#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "remx/kernels.hpp"
#include "remx/physics.hpp"
#include "remx/state.hpp"

namespace remx {

/// Sum over cells of [rho |u|^2 / 2 + rho e + E_r + (|B|^2 + |E|^2) / 2] dV.
double total_energy(const FieldGrid& grid, const Model& model,
                    Exec exec = Exec::parallel);

double total_mass(const FieldGrid& grid, Exec exec = Exec::parallel);

/// Sum over cells of (rho s + S_r) dV.
double total_entropy(const FieldGrid& grid, const Model& model,
                     Exec exec = Exec::parallel);

/// Pointwise entropy production
///   a sigma_a / (theta T_r) (theta - T_r)^2 (theta + T_r)(theta^2 + T_r^2)
///   + nu rho |u|^2 / theta,
/// non-negative for every admissible state.
double entropy_production_density(const PrimitiveState& prim,
                                  const Model& model);

/// Sum over cells of entropy_production_density dV.
double production_rate(const FieldGrid& grid, const Model& model,
                       Exec exec = Exec::parallel);

/// Pointwise Lyapunov density: kinetic energy, relative Helmholtz functions
/// of matter and radiation, and the electromagnetic perturbation energy.
double lyapunov_density(const PrimitiveState& prim, const Model& model,
                        const Equilibrium& eq);

double lyapunov(const FieldGrid& grid, const Model& model,
                const Equilibrium& eq, Exec exec = Exec::parallel);

struct ConstraintResiduals {
  double div_b = 0.0;  ///< RMS of centered div B
  double gauss = 0.0;  ///< RMS of centered div E - (rho_bar - rho)
};

ConstraintResiduals constraint_residuals(const FieldGrid& grid,
                                         double rho_bar,
                                         Exec exec = Exec::parallel);

/// Deviation norms. Groups: fluid = (rho - rho_bar, u, theta - theta_bar,
/// E_r - E_r_bar), magnetic = B - B_bar, electric = E. H^k values are
/// finite-difference proxies sum_{|alpha| <= k} ||D^alpha f||_2^2, reported
/// as square roots.
struct NormSuite {
  double l2_fluid = 0, l2_b = 0, l2_e = 0;
  double linf_rho = 0, linf_u = 0, linf_theta = 0, linf_er = 0;
  double linf_b = 0, linf_e = 0;
  std::array<double, 3> h_fluid{};  ///< k = 1, 2, 3
  std::array<double, 3> h_b{};
  std::array<double, 3> h_e{};
  double w1inf = 0;     ///< W^{1,inf} of (rho - rho_bar, u, B - B_bar, E)
  double h3_all = 0;    ///< H^3 proxy of the full deviation
  double d2_density = 0;  ///< integrand of the D^2(t) accumulator

  double linf_fluid() const;
};

NormSuite norm_suite(const FieldGrid& grid, const Model& model,
                     const Equilibrium& eq);

struct DiagnosticsRecord {
  double t = 0;
  long step = 0;
  double total_mass = 0;
  double total_energy = 0;
  double total_entropy = 0;
  double production_rate = 0;
  double lyapunov = 0;
  ConstraintResiduals residuals;
  NormSuite norms;
  double e_sup = 0;  ///< running sup of w1inf
  double f_sup = 0;  ///< running sup of h3_all
  double i2 = 0;     ///< running time integral of ||fluid||_inf^2
  double d2 = 0;     ///< running time integral of d2_density
};

DiagnosticsRecord measure(const FieldGrid& grid, const Model& model,
                          const Equilibrium& eq, double t, long step,
                          Exec exec = Exec::parallel);

/// Time series of records with running sup / integral accumulators
/// (trapezoidal rule between output times).
class DiagnosticsSeries {
 public:
  void add(DiagnosticsRecord record);
  /// Continues the accumulators from `last` (a record of an earlier run
  /// segment) without emitting it; used on restart.
  void seed(DiagnosticsRecord last) { base_ = std::move(last); }
  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  bool empty() const { return records_.empty(); }
  const DiagnosticsRecord& front() const { return records_.front(); }
  const DiagnosticsRecord& back() const { return records_.back(); }

  /// CSV with a '#' comment block documenting the columns, a header row and
  /// one row per record; floats carry 17 significant digits.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<DiagnosticsRecord> records_;
  std::optional<DiagnosticsRecord> base_;
};

/// Column names of the CSV in order.
const std::vector<const char*>& diagnostics_columns();

}  // namespace remx
