#include "remx/init.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "remx/errors.hpp"
#include "remx/kernels.hpp"
#include "remx/operators.hpp"

namespace remx {

namespace {

constexpr std::string_view kFieldNames[kPertCount] = {
    "rho", "u1", "u2", "u3", "theta", "er",
    "a1",  "a2", "a3", "c1", "c2",    "c3"};

double rms(const std::vector<double>& v) {
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = v[i] * v[i];
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(v.size()));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
  return pairwise_sum(p);
}

// -div_c grad_c applied to x: symmetric positive semi-definite.
void apply_negative_laplacian(const FieldGrid& g, const std::vector<double>& x,
                              std::vector<double>& out) {
  const auto& shape = g.shape();
  for_each_index(g.size(), Exec::parallel, [&](std::size_t i) {
    double acc = 0.0;
    for (int a = 0; a < shape.dim; ++a) {
      const double h = shape.dx(a);
      acc += (2.0 * x[i] - x[g.neighbor(i, a, 2)] - x[g.neighbor(i, a, -2)]) /
             (4.0 * h * h);
    }
    out[i] = acc;
  });
}

// Removes the components along the null space of the wide Laplacian: the
// products of per-axis constants and (for even n) (-1)^i checkerboards.
void project_out_nullspace(const FieldGrid& g, std::vector<double>& v) {
  const auto& shape = g.shape();
  const int patterns = 1 << shape.dim;
  std::vector<double> basis(v.size());
  for (int p = 0; p < patterns; ++p) {
    bool valid = true;
    for (int a = 0; a < shape.dim; ++a) {
      if ((p >> a & 1) && shape.n[a] % 2 != 0) valid = false;
    }
    if (!valid) continue;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto c = g.coords(i);
      int parity = 0;
      for (int a = 0; a < shape.dim; ++a) {
        if (p >> a & 1) parity += c[a];
      }
      basis[i] = (parity % 2 == 0) ? 1.0 : -1.0;
    }
    const double coef = dot(v, basis) / static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= coef * basis[i];
  }
}

}  // namespace

std::string_view perturbed_field_name(int field) {
  if (field < 0 || field >= kPertCount) {
    throw DomainError("perturbed field index out of range");
  }
  return kFieldNames[field];
}

double mode_value(const ModeSpec& mode, const Vec3& x, const GridShape& shape) {
  if (mode.amplitude == 0.0) return 0.0;
  double arg = mode.phase;
  for (int a = 0; a < shape.dim; ++a) {
    arg += 2.0 * std::numbers::pi * mode.mode[a] * x[a] / shape.length[a];
  }
  return mode.amplitude * std::sin(arg);
}

std::vector<double> solve_gauss_potential(const FieldGrid& g,
                                          std::vector<double> rhs, double tol) {
  const std::size_t n = g.size();
  if (rhs.size() != n) throw DomainError("Gauss potential: size mismatch");
  // div_c grad_c phi = rhs  <=>  (-div_c grad_c) phi = -rhs.
  for (double& v : rhs) v = -v;
  project_out_nullspace(g, rhs);

  std::vector<double> x(n, 0.0), r = rhs, p = rhs, ap(n);
  const double target = tol * std::max(1.0, rms(rhs));
  double rr = dot(r, r);
  const std::size_t max_iter = 20 * n + 100;
  std::size_t iter = 0;
  while (std::sqrt(rr / n) > target) {
    if (++iter > max_iter) {
      std::ostringstream os;
      os << "Gauss-law Poisson solve did not converge: residual "
         << std::sqrt(rr / n) << " after " << max_iter << " iterations";
      throw ConvergenceError(os.str());
    }
    apply_negative_laplacian(g, p, ap);
    const double alpha = rr / dot(p, ap);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    // Keep the iterate out of the null space against round-off drift.
    if (iter % 50 == 0) project_out_nullspace(g, r);
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
  project_out_nullspace(g, x);
  return x;
}

void check_admissible(const FieldGrid& grid, const Model& model,
                      const Equilibrium& eq) {
  const EquationOfState& eos = model.matter();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PrimitiveState p = to_primitive(grid[i], eos, eq.theta, i);
    const double tr = model.rad.temperature(p.er);
    auto inside = [](double v, double ref) {
      return v > 0.5 * ref && v < 2.0 * ref;
    };
    if (!inside(p.rho, eq.rho) || !inside(p.theta, eq.theta) ||
        !inside(tr, eq.theta)) {
      std::ostringstream os;
      os << "initial state leaves the admissible set in cell " << i
         << ": rho=" << p.rho << " theta=" << p.theta << " T_r=" << tr;
      throw DomainError(os.str());
    }
  }
}

FieldGrid init_fields(const GridShape& shape, const Model& model,
                      const Equilibrium& eq, const PerturbationSpec& spec) {
  shape.validate();
  check_compatible(eq, model.rad);
  for (int f = 0; f < kPertCount; ++f) {
    const ModeSpec& m = spec.fields[f];
    if (m.amplitude == 0.0) continue;
    const std::string key = "perturb." + std::string(kFieldNames[f]) + ".mode";
    bool any = false;
    for (int a = 0; a < 3; ++a) {
      if (!shape.active(a)) {
        if (m.mode[a] != 0) {
          throw ConfigError(key + ": nonzero mode number on inactive axis");
        }
        continue;
      }
      if (2 * std::abs(m.mode[a]) >= shape.n[a]) {
        throw ConfigError(key + ": mode number not resolved by the grid");
      }
      any = any || m.mode[a] != 0;
    }
    if (f == kPertRho && !any) {
      throw ConfigError(key + ": density mode must be nonconstant");
    }
  }

  FieldGrid grid(shape);
  const std::size_t n = grid.size();
  auto sample = [&](int field) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = mode_value(spec.fields[field], grid.center(i), shape);
    }
    return v;
  };

  std::vector<double> drho = sample(kPertRho);
  {
    const double mean = pairwise_sum(drho) / static_cast<double>(n);
    for (double& v : drho) v -= mean;
  }
  std::array<std::vector<double>, 3> du = {sample(kPertU1), sample(kPertU2),
                                          sample(kPertU3)};
  const std::vector<double> dtheta = sample(kPertTheta);
  const std::vector<double> der = sample(kPertEr);
  std::vector<Vec3> pot_b(n), pot_e(n);
  {
    const auto a1 = sample(kPertA1), a2 = sample(kPertA2), a3 = sample(kPertA3);
    const auto c1 = sample(kPertC1), c2 = sample(kPertC2), c3 = sample(kPertC3);
    for (std::size_t i = 0; i < n; ++i) {
      pot_b[i] = {a1[i], a2[i], a3[i]};
      pot_e[i] = {c1[i], c2[i], c3[i]};
    }
  }

  // div_c E = rho_bar - rho = -drho.
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -drho[i];
  const std::vector<double> phi = solve_gauss_potential(grid, rhs);

  const EquationOfState& eos = model.matter();
  for (std::size_t i = 0; i < n; ++i) {
    PrimitiveState p;
    p.rho = eq.rho + drho[i];
    p.u = {du[0][i], du[1][i], du[2][i]};
    p.theta = eq.theta + dtheta[i];
    p.er = eq.er + der[i];
    p.b = eq.b + centered_curl(grid, i, [&](std::size_t j) { return pot_b[j]; });
    p.e = centered_gradient(grid, i, [&](std::size_t j) { return phi[j]; }) +
          centered_curl(grid, i, [&](std::size_t j) { return pot_e[j]; });
    if (!(p.rho > 0.0) || !(p.theta > 0.0) || !(p.er > 0.0)) {
      std::ostringstream os;
      os << "perturbation makes the state non-positive in cell " << i;
      throw ConfigError("perturb: " + os.str());
    }
    grid[i] = to_conserved(p, eos);
  }
  try {
    check_admissible(grid, model, eq);
  } catch (const DomainError& err) {
    throw ConfigError(std::string("perturb: ") + err.what());
  }
  return grid;
}

}  // namespace remx
