#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "remx/config.hpp"
#include "remx/integrator.hpp"
#include "remx/linear.hpp"

namespace remx {

struct SimulateOptions {
  std::optional<std::filesystem::path> out;      ///< artifact directory
  std::optional<std::filesystem::path> restart;  ///< checkpoint to resume
  /// Observer invoked at every output time in addition to file output.
  RunObserver observer;
};

/// Runs the configured simulation. With `out` set, writes diagnostics.csv,
/// snapshots/NNNN.dat (every snapshot_every outputs), checkpoint.dat (final
/// state, config and accumulators) and report.txt.
RunResult simulate(const Config& config, const SimulateOptions& options = {});

/// Summary checks over a diagnostics series.
struct SeriesSummary {
  double energy_drift_abs = 0;   ///< max_t |E(t) - E(0)|
  double energy_drift_rel = 0;   ///< energy_drift_abs / |E(0)|
  double max_div_b = 0;
  double max_gauss = 0;
  double min_production = 0;
  double lyapunov_max_increase = 0;  ///< max over steps of L(t_k+1) - L(t_k)
  double entropy_budget_error = 0;   ///< max over intervals, see below
};

/// The entropy budget error is max over output intervals of
/// |(S(t_k+1) - S(t_k)) / dt - (P(t_k) + P(t_k+1)) / 2|.
SeriesSummary summarize(const DiagnosticsSeries& series);

void write_checkpoint(const std::filesystem::path& path, const FieldGrid& grid,
                      const Config& config, const DiagnosticsRecord& last,
                      double time, long step);

struct Checkpoint {
  FieldGrid grid;
  Config config;
  DiagnosticsRecord last;  ///< accumulators only are meaningful
  double time = 0;
  long step = 0;
};

Checkpoint read_checkpoint(const std::filesystem::path& path);

struct ConvergenceRow {
  double h = 0;       ///< dx or dt
  int cells = 0;
  double error = 0;
  double order = 0;   ///< against the previous row; 0 for the first
};

struct MmsReport {
  std::vector<ConvergenceRow> spatial;   ///< error against the exact solution
  std::vector<ConvergenceRow> temporal;  ///< dt-halving self-convergence
  double min_spatial_order() const;
  double min_temporal_order() const;
};

MmsReport mms_convergence(const Config& config);
void write_mms_report(std::ostream& os, const MmsReport& report);

struct AuditRow {
  int cells = 0;
  double energy_drift_rel = 0;
  double energy_drift_abs = 0;
  double max_gauss = 0;
  double max_div_b = 0;
};

struct EnergyAudit {
  std::vector<AuditRow> rows;
};

EnergyAudit energy_audit(const Config& config);
void write_energy_audit(std::ostream& os, const EnergyAudit& audit);

void write_lemma1_report(std::ostream& os, const Config& config,
                         const Lemma1Report& base, const Lemma1Report& doubled);

/// One eigenmode of -(i k A(e_1) + L) followed through a simulation.
struct ModeTrack {
  std::complex<double> eigenvalue;
  double u_weight = 0;       ///< |c_j(0)| times the u-part of the eigenvector
  double measured_rate = 0;  ///< least-squares slope of log |c_j(t)|
};

struct ModeDecayCheck {
  std::vector<ModeTrack> modes;
  int dominant = -1;  ///< mode carrying most of the initial u perturbation
  /// |measured - Re(lambda)| / |Re(lambda)| for the dominant mode.
  double relative_error() const;
};

/// Runs `base` with only a u1 sinusoid of the given amplitude (mode 1 along
/// x), takes the k = 2 pi / L Fourier coefficients of the 12 primitive
/// deviations at every output, expands them in the eigenvectors of the
/// linearized generator and fits each modal amplitude's decay rate.
ModeDecayCheck mode_decay_check(const Config& base, double amplitude);

/// Dispatches on config.mode and writes the mode's artifacts to `out`.
/// Returns the process exit status (0 on success, 1 when a mode's own
/// verdict fails).
int run_mode(const Config& config, const std::filesystem::path& out,
             const std::optional<std::filesystem::path>& restart,
             std::ostream& log);

}  // namespace remx
