#include "remx/mms.hpp"

#include <numbers>
#include <vector>

#include "remx/kernels.hpp"

namespace remx::mms {

namespace {

struct Wave {
  double mean;
  double amplitude;
  double omega;  // temporal frequency
  double phase;
};

// Per-field waves: rho, u1..u3, theta, E_r, B1..B3, E1..E3.
constexpr Wave kWaves[12] = {
    {1.0, 0.10, -0.5, 0.0}, {0.0, 0.10, 0.3, 1.6},  {0.0, 0.05, 0.7, 0.0},
    {0.0, 0.05, -0.2, 1.6}, {1.0, 0.10, -0.4, 1.6}, {1.0, 0.10, 0.6, 0.0},
    {0.5, 0.00, 0.0, 0.0},  {0.5, 0.10, 0.2, 0.0},  {0.0, 0.10, -0.3, 1.6},
    {0.0, 0.10, 0.1, 0.0},  {0.0, 0.05, -0.6, 1.6}, {0.0, 0.05, 0.4, 0.0}};

std::array<Jet, 12> exact_jets(const GridShape& shape, const Vec3& x,
                               double t) {
  // Phase argument s = 2 pi sum_a x_a / L_a + omega t + phase.
  Jet space{0.0, {}};
  for (int a = 0; a < shape.dim; ++a) {
    const double k = 2.0 * std::numbers::pi / shape.length[a];
    space.v += k * x[a];
    space.d[1 + a] = k;
  }
  std::array<Jet, 12> out;
  for (int f = 0; f < 12; ++f) {
    const Wave& w = kWaves[f];
    Jet arg = space;
    arg.v += w.omega * t + w.phase;
    arg.d[0] = w.omega;
    out[f] = Jet::constant(w.mean) + w.amplitude * sin(arg);
  }
  return out;
}

}  // namespace

PrimitiveState Problem::exact(const Vec3& x, double t) const {
  const auto j = exact_jets(shape, x, t);
  PrimitiveState p;
  p.rho = j[0].v;
  p.u = {j[1].v, j[2].v, j[3].v};
  p.theta = j[4].v;
  p.er = j[5].v;
  p.b = {j[6].v, j[7].v, j[8].v};
  p.e = {j[9].v, j[10].v, j[11].v};
  return p;
}

ConservedState Problem::forcing(const Vec3& x, double t) const {
  const auto j = exact_jets(shape, x, t);
  const Jet& rho = j[0];
  const Jet u[3] = {j[1], j[2], j[3]};
  const Jet& theta = j[4];
  const Jet& er = j[5];
  const Jet b[3] = {j[6], j[7], j[8]};
  const Jet e[3] = {j[9], j[10], j[11]};

  const Jet p = gas_constant * (rho * theta);
  const Jet pr = (1.0 / 3.0) * er;
  Jet ke = Jet::constant(0.0);
  for (int i = 0; i < 3; ++i) ke = ke + u[i] * u[i];
  const Jet energy = rho * (0.5 * ke + specific_heat * theta);
  const Jet theta4 = theta * theta * theta * theta;
  const Jet exchange = sigma_a * (a * theta4 - er);

  Jet div_u = Jet::constant(0.0);
  for (int ax = 0; ax < 3; ++ax) div_u.v += u[ax].dx(ax);

  ConservedState f;
  // Mass.
  f.rho = rho.dt();
  for (int ax = 0; ax < 3; ++ax) f.rho += (rho * u[ax]).dx(ax);

  // Momentum with Lorentz force and damping.
  const Jet uxb[3] = {u[1] * b[2] - u[2] * b[1], u[2] * b[0] - u[0] * b[2],
                      u[0] * b[1] - u[1] * b[0]};
  for (int i = 0; i < 3; ++i) {
    double v = (rho * u[i]).dt();
    for (int ax = 0; ax < 3; ++ax) v += (rho * u[i] * u[ax]).dx(ax);
    v += (p + pr).dx(i);
    v += (rho * (e[i] + uxb[i])).v + nu * (rho * u[i]).v;
    f.m[i] = v;
  }

  // Matter energy.
  double e_dot_u = 0.0;
  double u_grad_pr = 0.0;
  for (int i = 0; i < 3; ++i) {
    e_dot_u += e[i].v * u[i].v;
    u_grad_pr += u[i].v * pr.dx(i);
  }
  f.energy = energy.dt();
  for (int ax = 0; ax < 3; ++ax) f.energy += ((energy + p) * u[ax]).dx(ax);
  f.energy += u_grad_pr + exchange.v + rho.v * e_dot_u;

  // Radiation energy.
  f.er = er.dt();
  for (int ax = 0; ax < 3; ++ax) f.er += (er * u[ax]).dx(ax);
  f.er += pr.v * div_u.v - exchange.v;

  // Maxwell: dB/dt + curl E = 0, dE/dt - curl B = rho u.
  auto curl = [](const Jet* w) {
    return Vec3{w[2].dx(1) - w[1].dx(2), w[0].dx(2) - w[2].dx(0),
                w[1].dx(0) - w[0].dx(1)};
  };
  const Vec3 curl_e = curl(e);
  const Vec3 curl_b = curl(b);
  for (int i = 0; i < 3; ++i) {
    f.b[i] = b[i].dt() + curl_e[i];
    f.e[i] = e[i].dt() - curl_b[i] - rho.v * u[i].v;
  }
  return f;
}

Forcing Problem::forcing_function() const {
  const Problem copy = *this;
  return [copy](const Vec3& x, double t) { return copy.forcing(x, t); };
}

Model Problem::model() const {
  return make_ideal_model(gas_constant, specific_heat, a, sigma_a, nu);
}

FieldGrid Problem::exact_grid(double t) const {
  FieldGrid g(shape);
  const Model m = model();
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = to_conserved(exact(g.center(i), t), m.matter());
  }
  return g;
}

double primitive_distance(const FieldGrid& a, const FieldGrid& b,
                          const EquationOfState& eos) {
  std::vector<double> sq(a.size());
  for_each_index(a.size(), Exec::parallel, [&](std::size_t i) {
    const PrimitiveState p = to_primitive(a[i], eos, 1.0, i);
    const PrimitiveState q = to_primitive(b[i], eos, 1.0, i);
    const double d = (p.rho - q.rho) * (p.rho - q.rho) +
                     norm2(p.u - q.u) + (p.theta - q.theta) * (p.theta - q.theta) +
                     (p.er - q.er) * (p.er - q.er) + norm2(p.b - q.b) +
                     norm2(p.e - q.e);
    sq[i] = d;
  });
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(a.size()));
}

}  // namespace remx::mms
