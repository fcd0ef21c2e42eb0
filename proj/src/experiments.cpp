#include "remx/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "remx/errors.hpp"
#include "remx/init.hpp"
#include "remx/mms.hpp"
#include "remx/snapshot.hpp"

namespace fs = std::filesystem;

namespace remx {

namespace {

std::string fmt17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string snapshot_name(std::size_t index) {
  std::ostringstream os;
  os << std::setw(4) << std::setfill('0') << index << ".dat";
  return os.str();
}

void fill_orders(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rows[i].order = std::log(rows[i - 1].error / rows[i].error) /
                    std::log(rows[i - 1].h / rows[i].h);
  }
}

double min_order(const std::vector<ConvergenceRow>& rows) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rows.size(); ++i) m = std::min(m, rows[i].order);
  return m;
}

void write_report(std::ostream& os, const Config& config,
                  const RunResult& result) {
  const SeriesSummary s = summarize(result.series);
  const DiagnosticsRecord& first = result.series.front();
  const DiagnosticsRecord& last = result.series.back();
  os << std::setprecision(10);
  os << "mode simulate\n"
     << "cells " << config.grid.cells() << " dim " << config.grid.dim << "\n"
     << "t_final " << result.time << " steps " << result.steps << "\n"
     << "outputs " << result.series.records().size() << "\n"
     << "total_mass initial " << first.total_mass << " final "
     << last.total_mass << "\n"
     << "total_energy initial " << first.total_energy << " final "
     << last.total_energy << " max_rel_drift " << s.energy_drift_rel << "\n"
     << "lyapunov initial " << first.lyapunov << " final " << last.lyapunov
     << " max_increase " << s.lyapunov_max_increase << "\n"
     << "production_rate min " << s.min_production << "\n"
     << "entropy_budget max_error " << s.entropy_budget_error << "\n"
     << "div_b max " << s.max_div_b << "\n"
     << "gauss max " << s.max_gauss << "\n";
  auto ratio = [](double a, double b) { return b > 0 ? a / b : 0.0; };
  os << "linf_ratio rho " << ratio(last.norms.linf_rho, first.norms.linf_rho)
     << " u " << ratio(last.norms.linf_u, first.norms.linf_u) << " theta "
     << ratio(last.norms.linf_theta, first.norms.linf_theta) << " Er "
     << ratio(last.norms.linf_er, first.norms.linf_er) << " E "
     << ratio(last.norms.linf_e, first.norms.linf_e) << " B "
     << ratio(last.norms.linf_b, first.norms.linf_b) << "\n";
}

}  // namespace

SeriesSummary summarize(const DiagnosticsSeries& series) {
  SeriesSummary s;
  if (series.empty()) return s;
  const auto& r = series.records();
  const double e0 = r.front().total_energy;
  s.min_production = r.front().production_rate;
  for (std::size_t k = 0; k < r.size(); ++k) {
    s.energy_drift_abs =
        std::max(s.energy_drift_abs, std::abs(r[k].total_energy - e0));
    s.max_div_b = std::max(s.max_div_b, r[k].residuals.div_b);
    s.max_gauss = std::max(s.max_gauss, r[k].residuals.gauss);
    s.min_production = std::min(s.min_production, r[k].production_rate);
    if (k > 0) {
      s.lyapunov_max_increase =
          std::max(s.lyapunov_max_increase, r[k].lyapunov - r[k - 1].lyapunov);
      const double dt = r[k].t - r[k - 1].t;
      const double rate = (r[k].total_entropy - r[k - 1].total_entropy) / dt;
      const double prod = 0.5 * (r[k].production_rate + r[k - 1].production_rate);
      s.entropy_budget_error = std::max(s.entropy_budget_error, std::abs(rate - prod));
    }
  }
  s.energy_drift_rel = e0 != 0.0 ? s.energy_drift_abs / std::abs(e0) : 0.0;
  return s;
}

void write_checkpoint(const fs::path& path, const FieldGrid& grid,
                      const Config& config, const DiagnosticsRecord& last,
                      double time, long step) {
  SnapshotMeta meta;
  meta.time = time;
  meta.step = step;
  for (const auto& [k, v] : config_entries(config)) meta.extra["config." + k] = v;
  meta.extra["acc.e_sup"] = fmt17(last.e_sup);
  meta.extra["acc.f_sup"] = fmt17(last.f_sup);
  meta.extra["acc.i2"] = fmt17(last.i2);
  meta.extra["acc.d2"] = fmt17(last.d2);
  write_snapshot(path, grid, config.model().matter(), meta, true);
}

Checkpoint read_checkpoint(const fs::path& path) {
  // The EOS is needed to rebuild conserved variables; read the config keys
  // first with a provisional ideal gas, then re-read with the stored one.
  std::ifstream probe(path);
  if (!probe) throw ConfigError("restart: cannot open '" + path.string() + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  while (std::getline(probe, line) && line.rfind("#", 0) == 0) {
    const auto pos = line.find("config.");
    const auto eq = line.find('=');
    if (pos == 2 && eq != std::string::npos) {
      entries[line.substr(9, eq - 9)] = line.substr(eq + 1);
    }
  }
  if (entries.empty()) {
    throw ConfigError("restart: '" + path.string() + "' holds no config");
  }
  Checkpoint cp;
  cp.config = config_from_entries(entries);
  Snapshot snap = read_snapshot(path, cp.config.model().matter());
  cp.grid = std::move(snap.grid);
  cp.time = snap.meta.time;
  cp.step = snap.meta.step;
  auto acc = [&](const std::string& key) {
    const auto it = snap.meta.extra.find(key);
    if (it == snap.meta.extra.end()) {
      throw ConfigError("restart: checkpoint lacks " + key);
    }
    return std::stod(it->second);
  };
  cp.last.t = cp.time;
  cp.last.step = cp.step;
  cp.last.e_sup = acc("acc.e_sup");
  cp.last.f_sup = acc("acc.f_sup");
  cp.last.i2 = acc("acc.i2");
  cp.last.d2 = acc("acc.d2");
  return cp;
}

RunResult simulate(const Config& config, const SimulateOptions& options) {
  config.validate();
  const Model model = config.model();
  const Equilibrium eq = config.equilibrium();

  RunParams params;
  params.cfl = config.cfl;
  params.t_end = config.t_end;
  params.output_every = config.output_every;
  params.stepper = config.stepper();

  FieldGrid initial;
  double t0 = 0.0;
  long step0 = 0;
  if (options.restart) {
    Checkpoint cp = read_checkpoint(*options.restart);
    if (!(cp.grid.shape() == config.grid)) {
      throw ConfigError("grid: does not match the checkpoint grid");
    }
    initial = std::move(cp.grid);
    t0 = cp.time;
    step0 = cp.step;
    // Continue the running accumulators from the checkpointed state.
    DiagnosticsRecord seed =
        measure(initial, model, eq, t0, step0, params.stepper.exec);
    seed.e_sup = cp.last.e_sup;
    seed.f_sup = cp.last.f_sup;
    seed.i2 = cp.last.i2;
    seed.d2 = cp.last.d2;
    params.resume = seed;
    // Discretization error has moved the residuals off round-off level;
    // the initial-data check only applies to fresh starts.
    params.check_constraints = false;
  } else {
    initial = init_fields(config.grid, model, eq, config.perturb);
  }

  fs::path snap_dir;
  if (options.out) {
    fs::create_directories(*options.out);
    if (config.snapshot_every > 0) {
      snap_dir = *options.out / "snapshots";
      fs::create_directories(snap_dir);
    }
  }
  const EquationOfState& eos = model.matter();
  RunObserver observer = [&](const FieldGrid& grid, double t, long step,
                             std::size_t index) {
    if (!snap_dir.empty() && index % config.snapshot_every == 0) {
      SnapshotMeta meta;
      meta.time = t;
      meta.step = step;
      write_snapshot(snap_dir / snapshot_name(index / config.snapshot_every),
                     grid, eos, meta);
    }
    if (options.observer) options.observer(grid, t, step, index);
  };

  RunResult result = run(std::move(initial), model, eq, params, observer, t0, step0);

  if (options.out) {
    auto csv = open_out(*options.out / "diagnostics.csv");
    result.series.write_csv(csv);
    write_checkpoint(*options.out / "checkpoint.dat", result.fields, config,
                     result.series.back(), result.time,
                     step0 + result.steps);
    auto report = open_out(*options.out / "report.txt");
    write_report(report, config, result);
  }
  return result;
}

double MmsReport::min_spatial_order() const { return min_order(spatial); }
double MmsReport::min_temporal_order() const { return min_order(temporal); }

MmsReport mms_convergence(const Config& config) {
  config.validate();
  mms::Problem problem;
  problem.gas_constant = config.gas_constant;
  problem.specific_heat = config.specific_heat;
  problem.a = config.a;
  problem.sigma_a = config.sigma_a;
  problem.nu = config.nu;
  const Model model = problem.model();
  const Equilibrium eq = config.equilibrium();

  auto shape_for = [&](int n) {
    GridShape s = config.grid;
    for (int a = 0; a < s.dim; ++a) s.n[a] = n;
    return s;
  };
  RunParams params;
  params.cfl = config.cfl;
  params.t_end = config.mms_t_end;
  params.output_every = config.mms_t_end;
  params.check_constraints = false;
  params.stepper = config.stepper();

  MmsReport report;
  for (int l = 0; l < config.mms_levels; ++l) {
    const int n = config.mms_n0 << l;
    problem.shape = shape_for(n);
    params.stepper.forcing = problem.forcing_function();
    RunResult r = run(problem.exact_grid(0.0), model, eq, params);
    ConvergenceRow row;
    row.cells = n;
    row.h = problem.shape.dx(0);
    row.error = mms::primitive_distance(r.fields, problem.exact_grid(params.t_end),
                                        model.matter());
    report.spatial.push_back(row);
  }
  fill_orders(report.spatial);

  // dt-halving on a fixed grid: differences of successive solutions.
  const int n = config.mms_n0 * 2;
  problem.shape = shape_for(n);
  params.stepper.forcing = problem.forcing_function();
  const FieldGrid start = problem.exact_grid(0.0);
  Stepper probe(model, params.stepper);
  double dt0 = probe.cfl_dt(start, config.cfl, 0.0, params.t_end);
  dt0 = params.t_end / std::ceil(params.t_end / dt0);
  std::vector<FieldGrid> solutions;
  for (int l = 0; l <= config.mms_levels; ++l) {
    params.fixed_dt = dt0 / static_cast<double>(1 << l);
    solutions.push_back(run(start, model, eq, params).fields);
  }
  for (int l = 0; l < config.mms_levels; ++l) {
    ConvergenceRow row;
    row.cells = n;
    row.h = dt0 / static_cast<double>(1 << l);
    row.error = mms::primitive_distance(solutions[l], solutions[l + 1],
                                        model.matter());
    report.temporal.push_back(row);
  }
  fill_orders(report.temporal);
  return report;
}

void write_mms_report(std::ostream& os, const MmsReport& report) {
  os << std::setprecision(6);
  os << "# manufactured solution, spatial refinement (error vs exact)\n"
     << "cells dx error order\n";
  for (const auto& r : report.spatial) {
    os << r.cells << ' ' << r.h << ' ' << r.error << ' ' << r.order << '\n';
  }
  os << "# time-step halving on a fixed grid (error vs next finer dt)\n"
     << "cells dt error order\n";
  for (const auto& r : report.temporal) {
    os << r.cells << ' ' << r.h << ' ' << r.error << ' ' << r.order << '\n';
  }
  os << "min_spatial_order " << report.min_spatial_order() << '\n'
     << "min_temporal_order " << report.min_temporal_order() << '\n';
}

EnergyAudit energy_audit(const Config& config) {
  EnergyAudit audit;
  for (int n : config.audit_cells) {
    Config c = config;
    for (int a = 0; a < c.grid.dim; ++a) c.grid.n[a] = n;
    const RunResult r = simulate(c);
    const SeriesSummary s = summarize(r.series);
    audit.rows.push_back({n, s.energy_drift_rel, s.energy_drift_abs,
                          s.max_gauss, s.max_div_b});
  }
  return audit;
}

void write_energy_audit(std::ostream& os, const EnergyAudit& audit) {
  os << std::setprecision(6);
  os << "# total energy drift and constraint residuals vs resolution\n"
     << "cells energy_drift_rel energy_drift_abs drift_ratio max_gauss "
        "gauss_ratio max_div_b\n";
  for (std::size_t i = 0; i < audit.rows.size(); ++i) {
    const AuditRow& r = audit.rows[i];
    const double dr = i ? audit.rows[i - 1].energy_drift_rel / r.energy_drift_rel : 0.0;
    const double gr = i ? audit.rows[i - 1].max_gauss / r.max_gauss : 0.0;
    os << r.cells << ' ' << r.energy_drift_rel << ' ' << r.energy_drift_abs
       << ' ' << dr << ' ' << r.max_gauss << ' ' << gr << ' ' << r.max_div_b
       << '\n';
  }
}

void write_lemma1_report(std::ostream& os, const Config& config,
                         const Lemma1Report& base, const Lemma1Report& doubled) {
  auto change = [](double a, double b) { return std::abs(b - a) / std::abs(a); };
  os << std::setprecision(10);
  os << "# quadratic bounds of the relative Helmholtz functions\n"
     << "reference rho=" << config.rho_bar << " theta=" << config.theta_bar
     << " a=" << config.a << "\n"
     << "samples C1 C2 C3 C4 skipped\n"
     << base.samples << ' ' << base.c1 << ' ' << base.c2 << ' ' << base.c3
     << ' ' << base.c4 << ' ' << base.skipped << '\n'
     << doubled.samples << ' ' << doubled.c1 << ' ' << doubled.c2 << ' '
     << doubled.c3 << ' ' << doubled.c4 << ' ' << doubled.skipped << '\n'
     << "relative_change " << change(base.c1, doubled.c1) << ' '
     << change(base.c2, doubled.c2) << ' ' << change(base.c3, doubled.c3)
     << ' ' << change(base.c4, doubled.c4) << '\n';
  if (base.failure) os << "failure " << *base.failure << '\n';
  if (doubled.failure) os << "failure " << *doubled.failure << '\n';
  os << "verdict " << (base.ok() && doubled.ok() ? "positive" : "FAILED") << '\n';
}

double ModeDecayCheck::relative_error() const {
  if (dominant < 0) return std::numeric_limits<double>::infinity();
  const ModeTrack& m = modes[dominant];
  return std::abs(m.measured_rate - m.eigenvalue.real()) /
         std::abs(m.eigenvalue.real());
}

ModeDecayCheck mode_decay_check(const Config& base, double amplitude) {
  Config c = base;
  c.grid.dim = 1;
  c.grid.n[1] = c.grid.n[2] = 1;
  c.perturb = PerturbationSpec{};
  c.perturb.fields[kPertU1] = {amplitude, {1, 0, 0}, 0.0};
  c.snapshot_every = 0;
  const Model model = c.model();
  const Equilibrium eq = c.equilibrium();
  const double k = 2.0 * std::numbers::pi / c.grid.length[0];

  // Fourier coefficient of exp(i k x) for each primitive deviation.
  using CVec = Eigen::Matrix<std::complex<double>, kLinearSize, 1>;
  std::vector<double> times;
  std::vector<CVec> coeffs;
  SimulateOptions opt;
  opt.observer = [&](const FieldGrid& grid, double t, long, std::size_t) {
    CVec v = CVec::Zero();
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
      const PrimitiveState p = to_primitive(grid[i], model.matter(), eq.theta, i);
      const double x = grid.center(i).x;
      const std::complex<double> w = std::polar(1.0 / n, -k * x);
      LinearVector d;
      d << p.rho - eq.rho, p.u.x, p.u.y, p.u.z, p.theta - eq.theta,
          p.er - eq.er, p.b.x - eq.b.x, p.b.y - eq.b.y, p.b.z - eq.b.z, p.e.x,
          p.e.y, p.e.z;
      v += w * d.cast<std::complex<double>>();
    }
    times.push_back(t);
    coeffs.push_back(v);
  };
  simulate(c, opt);

  const LinearizedSystem lin = assemble(eq, model);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(lin.generator({k, 0.0, 0.0}));
  const ComplexMatrix r = es.eigenvectors();
  const ComplexMatrix r_inv = r.inverse();

  ModeDecayCheck check;
  double best = -1.0;
  for (int j = 0; j < kLinearSize; ++j) {
    ModeTrack m;
    m.eigenvalue = es.eigenvalues()(j);
    const double c0 = std::abs((r_inv.row(j) * coeffs.front())(0));
    m.u_weight = c0 * r.col(j).segment(kLinU, 3).norm();
    // Least-squares slope of log|c_j| over outputs above the noise floor.
    double st = 0, sy = 0, stt = 0, sty = 0;
    int count = 0;
    for (std::size_t n = 0; n < times.size(); ++n) {
      const double cj = std::abs((r_inv.row(j) * coeffs[n])(0));
      if (!(cj > 1e-6 * c0) || c0 == 0.0) break;
      const double y = std::log(cj);
      st += times[n];
      sy += y;
      stt += times[n] * times[n];
      sty += times[n] * y;
      ++count;
    }
    if (count >= 2) {
      m.measured_rate = (count * sty - st * sy) / (count * stt - st * st);
    }
    if (m.u_weight > best) {
      best = m.u_weight;
      check.dominant = j;
    }
    check.modes.push_back(m);
  }
  return check;
}

int run_mode(const Config& config, const fs::path& out,
             const std::optional<fs::path>& restart, std::ostream& log) {
  fs::create_directories(out);
  switch (config.mode) {
    case Mode::simulate: {
      SimulateOptions opt;
      opt.out = out;
      opt.restart = restart;
      const RunResult r = simulate(config, opt);
      log << "simulate: " << r.steps << " steps to t=" << r.time << ", "
          << r.series.records().size() << " outputs\n";
      return 0;
    }
    case Mode::mms: {
      const MmsReport rep = mms_convergence(config);
      auto os = open_out(out / "report.txt");
      write_mms_report(os, rep);
      write_mms_report(log, rep);
      return 0;
    }
    case Mode::sk_check: {
      const Model model = config.model();
      const LinearizedSystem lin = assemble(config.equilibrium(), model);
      const SkReport rep = sk_check(lin, sphere_directions(config.sk_directions));
      auto os = open_out(out / "report.txt");
      write_sk_report(os, lin, rep);
      log << "sk-check: "
          << (rep.all_violated() ? "SK violated" : "SK not violated for all directions")
          << " (" << rep.directions.size() << " directions)\n";
      return 0;
    }
    case Mode::lemma1_check: {
      const Model model = config.model();
      const auto n = static_cast<std::size_t>(config.lemma1_samples);
      const Lemma1Report base =
          lemma1_verify(model.matter(), model.rad, config.rho_bar, config.theta_bar, n);
      const Lemma1Report doubled = lemma1_verify(
          model.matter(), model.rad, config.rho_bar, config.theta_bar, 2 * n);
      auto os = open_out(out / "report.txt");
      write_lemma1_report(os, config, base, doubled);
      write_lemma1_report(log, config, base, doubled);
      return base.ok() && doubled.ok() ? 0 : 1;
    }
    case Mode::energy_audit: {
      const EnergyAudit audit = energy_audit(config);
      auto os = open_out(out / "report.txt");
      write_energy_audit(os, audit);
      write_energy_audit(log, audit);
      return 0;
    }
  }
  return 0;
}

}  // namespace remx
