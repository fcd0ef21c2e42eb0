#include "remx/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>

#include "remx/operators.hpp"

namespace remx {

namespace {

std::vector<PrimitiveState> primitives(const FieldGrid& grid,
                                       const Model& model, Exec exec) {
  std::vector<PrimitiveState> prim;
  compute_primitives(grid, model.matter(), prim, exec);
  return prim;
}

double energy_density(const PrimitiveState& p, const Model& model) {
  return 0.5 * p.rho * norm2(p.u) +
         p.rho * model.matter().internal_energy(p.rho, p.theta) + p.er +
         0.5 * (norm2(p.b) + norm2(p.e));
}

double entropy_density(const PrimitiveState& p, const Model& model) {
  return p.rho * model.matter().entropy(p.rho, p.theta) +
         model.rad.entropy(p.er);
}

ConstraintResiduals residuals_from(const FieldGrid& grid, double rho_bar,
                                   Exec exec) {
  const std::size_t n = grid.size();
  const double dv = grid.shape().cell_volume();
  const double vol = grid.shape().volume();
  const double div_b2 = reduce_cells(n, exec, [&](std::size_t i) {
    const double d = centered_divergence(
        grid, i, [&](std::size_t j) { return grid[j].b; });
    return d * d * dv;
  });
  const double gauss2 = reduce_cells(n, exec, [&](std::size_t i) {
    const double d =
        centered_divergence(grid, i,
                            [&](std::size_t j) { return grid[j].e; }) -
        (rho_bar - grid[i].rho);
    return d * d * dv;
  });
  return {std::sqrt(div_b2 / vol), std::sqrt(gauss2 / vol)};
}

// Squared norms sum_{|alpha| = j} ||D^alpha f||^2 dV for j = 0..3, using
// centered differences along non-decreasing axis sequences (one per
// multi-index).
std::array<double, 4> derivative_norms(const FieldGrid& g,
                                       const std::vector<double>& f) {
  std::array<double, 4> sums{};
  const double dv = g.shape().cell_volume();
  std::function<void(const std::vector<double>&, int, int)> visit =
      [&](const std::vector<double>& arr, int order, int min_axis) {
        std::vector<double> sq(arr.size());
        for (std::size_t i = 0; i < arr.size(); ++i) sq[i] = arr[i] * arr[i] * dv;
        sums[order] += pairwise_sum(sq);
        if (order == 3) return;
        for (int a = min_axis; a < g.shape().dim; ++a) {
          std::vector<double> d(arr.size());
          for (std::size_t i = 0; i < arr.size(); ++i) {
            d[i] = centered_diff(g, i, a, [&](std::size_t j) { return arr[j]; });
          }
          visit(d, order + 1, a);
        }
      };
  visit(f, 0, 0);
  return sums;
}

double max_abs_first_derivative(const FieldGrid& g,
                                const std::vector<double>& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    m = std::max(m, std::abs(f[i]));
    for (int a = 0; a < g.shape().dim; ++a) {
      m = std::max(m, std::abs(centered_diff(
                          g, i, a, [&](std::size_t j) { return f[j]; })));
    }
  }
  return m;
}

}  // namespace

double total_energy(const FieldGrid& grid, const Model& model, Exec exec) {
  const auto prim = primitives(grid, model, exec);
  const double dv = grid.shape().cell_volume();
  return reduce_cells(grid.size(), exec, [&](std::size_t i) {
    return energy_density(prim[i], model) * dv;
  });
}

double total_mass(const FieldGrid& grid, Exec exec) {
  const double dv = grid.shape().cell_volume();
  return reduce_cells(grid.size(), exec,
                      [&](std::size_t i) { return grid[i].rho * dv; });
}

double total_entropy(const FieldGrid& grid, const Model& model, Exec exec) {
  const auto prim = primitives(grid, model, exec);
  const double dv = grid.shape().cell_volume();
  return reduce_cells(grid.size(), exec, [&](std::size_t i) {
    return entropy_density(prim[i], model) * dv;
  });
}

double entropy_production_density(const PrimitiveState& p,
                                  const Model& model) {
  const double tr = model.rad.temperature(p.er);
  const double th = p.theta;
  const double d = th - tr;
  const double radiative = model.rad.a * model.rad.sigma_a / (th * tr) * d * d *
                           (th + tr) * (th * th + tr * tr);
  const double damping = model.nu * p.rho * norm2(p.u) / th;
  return radiative + damping;
}

double production_rate(const FieldGrid& grid, const Model& model, Exec exec) {
  const auto prim = primitives(grid, model, exec);
  const double dv = grid.shape().cell_volume();
  return reduce_cells(grid.size(), exec, [&](std::size_t i) {
    return entropy_production_density(prim[i], model) * dv;
  });
}

double lyapunov_density(const PrimitiveState& p, const Model& model,
                        const Equilibrium& eq) {
  return 0.5 * p.rho * norm2(p.u) +
         helmholtz_matter_relative(model.matter(), p.rho, p.theta, eq.rho,
                                   eq.theta) +
         helmholtz_rad_relative(model.rad, model.rad.temperature(p.er),
                                eq.theta) +
         0.5 * norm2(p.b - eq.b) + 0.5 * norm2(p.e);
}

double lyapunov(const FieldGrid& grid, const Model& model,
                const Equilibrium& eq, Exec exec) {
  const auto prim = primitives(grid, model, exec);
  const double dv = grid.shape().cell_volume();
  return reduce_cells(grid.size(), exec, [&](std::size_t i) {
    return lyapunov_density(prim[i], model, eq) * dv;
  });
}

ConstraintResiduals constraint_residuals(const FieldGrid& grid,
                                         double rho_bar, Exec exec) {
  return residuals_from(grid, rho_bar, exec);
}

double NormSuite::linf_fluid() const {
  return std::max({linf_rho, linf_u, linf_theta, linf_er});
}

NormSuite norm_suite(const FieldGrid& grid, const Model& model,
                     const Equilibrium& eq) {
  const auto prim = primitives(grid, model, Exec::parallel);
  const std::size_t n = grid.size();

  // Component arrays: 0 rho, 1-3 u, 4 theta, 5 E_r, 6-8 B, 9-11 E.
  std::vector<std::vector<double>> comp(12, std::vector<double>(n));
  NormSuite s;
  for (std::size_t i = 0; i < n; ++i) {
    const PrimitiveState& p = prim[i];
    comp[0][i] = p.rho - eq.rho;
    comp[4][i] = p.theta - eq.theta;
    comp[5][i] = p.er - eq.er;
    for (int c = 0; c < 3; ++c) {
      comp[1 + c][i] = p.u[c];
      comp[6 + c][i] = p.b[c] - eq.b[c];
      comp[9 + c][i] = p.e[c];
    }
    s.linf_rho = std::max(s.linf_rho, std::abs(comp[0][i]));
    s.linf_theta = std::max(s.linf_theta, std::abs(comp[4][i]));
    s.linf_er = std::max(s.linf_er, std::abs(comp[5][i]));
    s.linf_u = std::max(s.linf_u, norm(p.u));
    s.linf_b = std::max(s.linf_b, norm(p.b - eq.b));
    s.linf_e = std::max(s.linf_e, norm(p.e));
  }

  std::array<double, 4> fluid{}, mag{}, elec{};
  for (int c = 0; c < 12; ++c) {
    const auto sums = derivative_norms(grid, comp[c]);
    auto& target = c < 6 ? fluid : (c < 9 ? mag : elec);
    for (int k = 0; k < 4; ++k) target[k] += sums[k];
  }
  s.l2_fluid = std::sqrt(fluid[0]);
  s.l2_b = std::sqrt(mag[0]);
  s.l2_e = std::sqrt(elec[0]);
  double acc_f = fluid[0], acc_b = mag[0], acc_e = elec[0];
  for (int k = 1; k <= 3; ++k) {
    acc_f += fluid[k];
    acc_b += mag[k];
    acc_e += elec[k];
    s.h_fluid[k - 1] = std::sqrt(acc_f);
    s.h_b[k - 1] = std::sqrt(acc_b);
    s.h_e[k - 1] = std::sqrt(acc_e);
  }
  s.h3_all = std::sqrt(acc_f + acc_b + acc_e);
  s.d2_density = acc_f + (elec[0] + elec[1] + elec[2]) + (mag[1] + mag[2]);

  for (int c : {0, 1, 2, 3, 6, 7, 8, 9, 10, 11}) {
    s.w1inf = std::max(s.w1inf, max_abs_first_derivative(grid, comp[c]));
  }
  return s;
}

DiagnosticsRecord measure(const FieldGrid& grid, const Model& model,
                          const Equilibrium& eq, double t, long step,
                          Exec exec) {
  const auto prim = primitives(grid, model, exec);
  const double dv = grid.shape().cell_volume();
  const std::size_t n = grid.size();
  DiagnosticsRecord r;
  r.t = t;
  r.step = step;
  r.total_mass =
      reduce_cells(n, exec, [&](std::size_t i) { return grid[i].rho * dv; });
  r.total_energy = reduce_cells(n, exec, [&](std::size_t i) {
    return energy_density(prim[i], model) * dv;
  });
  r.total_entropy = reduce_cells(n, exec, [&](std::size_t i) {
    return entropy_density(prim[i], model) * dv;
  });
  r.production_rate = reduce_cells(n, exec, [&](std::size_t i) {
    return entropy_production_density(prim[i], model) * dv;
  });
  r.lyapunov = reduce_cells(n, exec, [&](std::size_t i) {
    return lyapunov_density(prim[i], model, eq) * dv;
  });
  r.residuals = residuals_from(grid, eq.rho, exec);
  r.norms = norm_suite(grid, model, eq);
  return r;
}

void DiagnosticsSeries::add(DiagnosticsRecord record) {
  const double linf = record.norms.linf_fluid();
  if (records_.empty() && !base_) {
    record.e_sup = record.norms.w1inf;
    record.f_sup = record.norms.h3_all;
    record.i2 = 0.0;
    record.d2 = 0.0;
  } else {
    const DiagnosticsRecord& prev = records_.empty() ? *base_ : records_.back();
    const double dt = record.t - prev.t;
    const double prev_linf = prev.norms.linf_fluid();
    record.e_sup = std::max(prev.e_sup, record.norms.w1inf);
    record.f_sup = std::max(prev.f_sup, record.norms.h3_all);
    record.i2 = prev.i2 + 0.5 * dt * (prev_linf * prev_linf + linf * linf);
    record.d2 =
        prev.d2 + 0.5 * dt * (prev.norms.d2_density + record.norms.d2_density);
  }
  records_.push_back(std::move(record));
}

const std::vector<const char*>& diagnostics_columns() {
  static const std::vector<const char*> columns = {
      "t",          "step",       "total_mass", "total_energy",
      "total_entropy", "production_rate", "lyapunov", "div_b",
      "gauss",      "l2_fluid",   "l2_b",       "l2_e",
      "linf_rho",   "linf_u",     "linf_theta", "linf_er",
      "linf_b",     "linf_e",     "h1_fluid",   "h2_fluid",
      "h3_fluid",   "h1_b",       "h2_b",       "h3_b",
      "h1_e",       "h2_e",       "h3_e",       "e_sup",
      "f_sup",      "i2",         "d2"};
  return columns;
}

void DiagnosticsSeries::write_csv(std::ostream& os) const {
  os << "# remx diagnostics time series\n"
     << "# t: time; step: step count; total_mass, total_energy, total_entropy:"
        " volume sums\n"
     << "# production_rate: entropy production; lyapunov: relative energy"
        " functional\n"
     << "# div_b, gauss: RMS constraint residuals\n"
     << "# l2_*, linf_*: deviation norms (fluid = rho, u, theta, E_r);"
        " h<k>_*: discrete H^k proxies\n"
     << "# e_sup, f_sup: running sup of W^{1,inf} and H^3 proxies;"
        " i2, d2: running time integrals\n";
  const auto& cols = diagnostics_columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    os << (c ? "," : "") << cols[c];
  }
  os << '\n' << std::setprecision(17);
  for (const auto& r : records_) {
    const NormSuite& s = r.norms;
    os << r.t << ',' << r.step << ',' << r.total_mass << ',' << r.total_energy
       << ',' << r.total_entropy << ',' << r.production_rate << ','
       << r.lyapunov << ',' << r.residuals.div_b << ',' << r.residuals.gauss
       << ',' << s.l2_fluid << ',' << s.l2_b << ',' << s.l2_e << ','
       << s.linf_rho << ',' << s.linf_u << ',' << s.linf_theta << ','
       << s.linf_er << ',' << s.linf_b << ',' << s.linf_e << ','
       << s.h_fluid[0] << ',' << s.h_fluid[1] << ',' << s.h_fluid[2] << ','
       << s.h_b[0] << ',' << s.h_b[1] << ',' << s.h_b[2] << ',' << s.h_e[0]
       << ',' << s.h_e[1] << ',' << s.h_e[2] << ',' << r.e_sup << ','
       << r.f_sup << ',' << r.i2 << ',' << r.d2 << '\n';
  }
}

}  // namespace remx
