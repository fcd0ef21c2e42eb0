#include "remx/integrator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "remx/errors.hpp"

namespace remx {

void momentum_electric_update(ConservedState& cell, double dt, double nu) {
  using Mat6 = Eigen::Matrix<double, 6, 6>;
  using Vec6 = Eigen::Matrix<double, 6, 1>;
  const Vec3& b = cell.b;

  // d/dt (m, E) = M (m, E); the m x B rotation is the skew block.
  Mat6 m = Mat6::Zero();
  m(0, 0) = m(1, 1) = m(2, 2) = -nu;
  m(0, 1) = -b.z;
  m(0, 2) = b.y;
  m(1, 0) = b.z;
  m(1, 2) = -b.x;
  m(2, 0) = -b.y;
  m(2, 1) = b.x;
  for (int i = 0; i < 3; ++i) {
    m(i, 3 + i) = -cell.rho;
    m(3 + i, i) = 1.0;
  }

  Vec6 y0;
  y0 << cell.m.x, cell.m.y, cell.m.z, cell.e.x, cell.e.y, cell.e.z;
  if (y0.isZero(0.0)) return;

  const Mat6 id = Mat6::Identity();
  const Vec6 y1 = (id - 0.5 * dt * m).partialPivLu().solve((id + 0.5 * dt * m) * y0);

  const double electric_before = 0.5 * norm2(cell.e);
  cell.m = {y1(0), y1(1), y1(2)};
  cell.e = {y1(3), y1(4), y1(5)};
  cell.energy -= 0.5 * norm2(cell.e) - electric_before;
}

void radiative_exchange_update(ConservedState& cell, const Model& model,
                               double dt, std::size_t cell_index) {
  const double sigma = model.rad.sigma_a;
  if (sigma == 0.0 || dt == 0.0) return;
  const EquationOfState& eos = model.matter();
  const double a = model.rad.a;
  const double rho = cell.rho;
  const double kinetic = 0.5 * norm2(cell.m) / rho;
  const double rho_e0 = cell.energy - kinetic;
  if (!(rho_e0 > 0.0)) {
    throw PositivityError("non-positive internal energy before exchange",
                          cell_index);
  }
  const double theta0 = eos.temperature(rho, rho_e0 / rho, 1.0);
  const double er0 = cell.er;
  const double rho_e_at0 = rho * eos.internal_energy(rho, theta0);

  // Increment of rho e; E_r receives the opposite increment.
  auto delta = [&](double theta1) {
    return rho * eos.internal_energy(rho, theta1) - rho_e_at0;
  };
  auto residual = [&](double theta1) {
    const double tm = 0.5 * (theta0 + theta1);
    const double d = delta(theta1);
    return d + dt * sigma * (a * tm * tm * tm * tm - (er0 - 0.5 * d));
  };
  auto slope = [&](double theta1) {
    const double tm = 0.5 * (theta0 + theta1);
    const double cv = rho * eos.de_dtheta(rho, theta1);
    return cv + dt * sigma * (2.0 * a * tm * tm * tm + 0.5 * cv);
  };

  const double r0 = residual(theta0);
  double theta1 = theta0;
  if (r0 != 0.0) {
    double lo = theta0;
    double hi = theta0;
    int expansions = 0;
    if (r0 > 0.0) {
      do {
        hi = lo;
        lo *= 0.5;
        if (++expansions > 60) {
          throw ConvergenceError("exchange bracket expansion failed in cell " +
                                 std::to_string(cell_index));
        }
      } while (residual(lo) > 0.0);
    } else {
      do {
        lo = hi;
        hi *= 2.0;
        if (++expansions > 60) {
          throw ConvergenceError("exchange bracket expansion failed in cell " +
                                 std::to_string(cell_index));
        }
      } while (residual(hi) < 0.0);
    }

    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
      const double f = residual(theta1);
      if (f == 0.0) {
        converged = true;
        break;
      }
      if (f < 0.0) {
        lo = std::max(lo, theta1);
      } else {
        hi = std::min(hi, theta1);
      }
      double next = theta1 - f / slope(theta1);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const bool small = std::abs(next - theta1) <= 1e-12 * next;
      theta1 = next;
      if (small) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "exchange Newton did not converge in cell " << cell_index
         << " (rho=" << rho << ", theta=" << theta0 << ", E_r=" << er0 << ")";
      throw ConvergenceError(os.str());
    }
  }

  const double d = delta(theta1);
  const double er1 = er0 - d;
  if (!(er1 > 0.0) || !(theta1 > 0.0)) {
    std::ostringstream os;
    os << "exchange produced theta=" << theta1 << ", E_r=" << er1;
    throw PositivityError(os.str(), cell_index);
  }
  cell.energy = kinetic + (rho_e0 + d);
  cell.er = er1;
}

void source_update_cell(ConservedState& cell, const Model& model, double dt,
                        std::size_t cell_index) {
  momentum_electric_update(cell, 0.5 * dt, model.nu);
  radiative_exchange_update(cell, model, dt, cell_index);
  momentum_electric_update(cell, 0.5 * dt, model.nu);
}

Stepper::Stepper(Model model, StepperOptions options)
    : model_(std::move(model)), options_(std::move(options)) {}

double Stepper::cfl_dt(const FieldGrid& grid, double cfl, double t,
                       double t_end) const {
  compute_primitives(grid, model_.matter(), prim_, options_.exec);
  const double dt = cfl * min_transit_time(grid, prim_, model_, options_.exec);
  return std::min(dt, t_end - t);
}

void Stepper::rhs(const FieldGrid& grid, double t) {
  compute_primitives(grid, model_.matter(), prim_, options_.exec);
  hyperbolic_rhs(grid, prim_, model_, options_.recon, rhs_, options_.exec);
  if (options_.forcing) {
    for_each_index(grid.size(), options_.exec, [&](std::size_t i) {
      rhs_[i] += options_.forcing(grid.center(i), t);
    });
  }
}

void Stepper::hyperbolic_step(FieldGrid& grid, double dt, double t) {
  const std::size_t n = grid.size();
  const Exec exec = options_.exec;
  if (options_.scheme == TimeScheme::midpoint) {
    rhs(grid, t);
    stage_ = grid;
    for_each_index(n, exec, [&](std::size_t i) {
      stage_[i] += (0.5 * dt) * rhs_[i];
    });
    rhs(stage_, t + 0.5 * dt);
    for_each_index(n, exec, [&](std::size_t i) { grid[i] += dt * rhs_[i]; });
  } else {
    // Shu-Osher form of the three-stage SSP Runge-Kutta scheme.
    rhs(grid, t);
    stage_ = grid;
    for_each_index(n, exec, [&](std::size_t i) { stage_[i] += dt * rhs_[i]; });
    rhs(stage_, t + dt);
    stage2_ = grid;
    for_each_index(n, exec, [&](std::size_t i) {
      ConservedState s = stage_[i];
      s += dt * rhs_[i];
      stage2_[i] = 0.75 * grid[i] + 0.25 * s;
    });
    rhs(stage2_, t + 0.5 * dt);
    for_each_index(n, exec, [&](std::size_t i) {
      ConservedState s = stage2_[i];
      s += dt * rhs_[i];
      grid[i] = (1.0 / 3.0) * grid[i] + (2.0 / 3.0) * s;
    });
  }
  // Positivity check of the updated state.
  compute_primitives(grid, model_.matter(), prim_, exec);
}

void Stepper::source_step(FieldGrid& grid, double dt) const {
  for_each_index(grid.size(), options_.exec, [&](std::size_t i) {
    source_update_cell(grid[i], model_, dt, i);
  });
}

void Stepper::strang_step(FieldGrid& grid, double dt, double t) {
  source_step(grid, 0.5 * dt);
  hyperbolic_step(grid, dt, t);
  source_step(grid, 0.5 * dt);
}

RunResult run(FieldGrid initial, const Model& model, const Equilibrium& eq,
              const RunParams& params, const RunObserver& observer, double t0,
              long step0) {
  if (!(params.t_end > t0)) throw RunAbort("t_end must exceed start time", t0, step0);
  if (!(params.output_every > 0.0)) {
    throw RunAbort("output cadence must be positive", t0, step0);
  }
  const Exec exec = params.stepper.exec;
  if (params.check_constraints) {
    const ConstraintResiduals r = constraint_residuals(initial, eq.rho, exec);
    if (r.div_b > params.constraint_tol || r.gauss > params.constraint_tol) {
      std::ostringstream os;
      os << "initial constraint residuals too large: div B=" << r.div_b
         << ", Gauss=" << r.gauss << " (limit " << params.constraint_tol << ")";
      throw RunAbort(os.str(), t0, step0);
    }
  }

  RunResult result;
  result.fields = std::move(initial);
  FieldGrid& grid = result.fields;
  Stepper stepper(model, params.stepper);
  if (params.resume) result.series.seed(*params.resume);

  double t = t0;
  long step = step0;
  std::size_t output_index = 0;
  auto record = [&]() {
    result.series.add(measure(grid, model, eq, t, step, exec));
    if (observer) observer(grid, t, step, output_index);
    ++output_index;
  };

  try {
    record();
    const double eps = 1e-12 * std::max(1.0, std::abs(params.t_end));
    double next_output = t0 + params.output_every;
    while (params.t_end - t > eps) {
      const double target = std::min(next_output, params.t_end);
      double dt = params.fixed_dt ? *params.fixed_dt
                                  : stepper.cfl_dt(grid, params.cfl, t,
                                                   params.t_end);
      dt = std::min(dt, target - t);
      if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::runtime_error("invalid time step " + std::to_string(dt));
      }
      stepper.strang_step(grid, dt, t);
      ++step;
      t += dt;
      if (std::abs(target - t) <= eps) {
        t = target;
        record();
        next_output = t0 + static_cast<double>(output_index) * params.output_every;
        if (next_output <= t + eps) next_output = t + params.output_every;
      }
    }
  } catch (const RunAbort&) {
    throw;
  } catch (const std::exception& err) {
    throw RunAbort(err.what(), t, step);
  }
  result.time = t;
  result.steps = step - step0;
  return result;
}

}  // namespace remx
