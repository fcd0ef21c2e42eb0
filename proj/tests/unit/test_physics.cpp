#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "remx/integrator.hpp"
#include "remx/operators.hpp"
#include "remx/physics.hpp"

using namespace remx;

namespace {

constexpr double kPi = std::numbers::pi;

Model canonical() { return make_ideal_model(1.0, 1.5, 1.0, 1.0, 1.0); }

PrimitiveState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.1, 10.0);
  std::uniform_real_distribution<double> sym(-3.0, 3.0);
  PrimitiveState p;
  p.rho = pos(rng);
  p.u = {sym(rng), sym(rng), sym(rng)};
  p.theta = pos(rng);
  p.er = pos(rng);
  p.b = {sym(rng), sym(rng), sym(rng)};
  p.e = {sym(rng), sym(rng), sym(rng)};
  return p;
}

// Smooth 1D field used by the manufactured-derivative checks.
PrimitiveState smooth(double x) {
  PrimitiveState p;
  p.rho = 1.0 + 0.2 * std::sin(2 * kPi * x);
  p.u = {0.3 * std::cos(2 * kPi * x), 0.1 * std::sin(2 * kPi * x), 0.0};
  p.theta = 1.0 + 0.1 * std::cos(2 * kPi * x);
  p.er = 1.0 + 0.3 * std::sin(2 * kPi * x + 0.4);
  return p;
}

// d/dx of the smooth field components, by hand.
struct SmoothDerivs {
  double rho, u, theta, er;
};
SmoothDerivs smooth_dx(double x) {
  const double w = 2 * kPi;
  return {0.2 * w * std::cos(w * x), -0.3 * w * std::sin(w * x),
          -0.1 * w * std::sin(w * x), 0.3 * w * std::cos(w * x + 0.4)};
}

double observed_order(double e_coarse, double e_fine) {
  return std::log2(e_coarse / e_fine);
}

}  // namespace

TEST_CASE("transport flux at rest and at equilibrium") {
  const Model m = canonical();
  PrimitiveState p;
  p.rho = 1.3;
  p.theta = 0.7;
  p.er = 2.0;
  for (int axis = 0; axis < 3; ++axis) {
    const TransportVector f = transport_flux(p, axis, m);
    for (int q = 0; q < 6; ++q) {
      const double want = q == kMx + axis ? 1.3 * 0.7 + 2.0 / 3.0 : 0.0;
      CHECK(f[q] == doctest::Approx(want).epsilon(1e-15));
    }
  }
}

TEST_CASE("flux divergence converges at second order") {
  const Model m = canonical();
  double prev_mass = 0, prev_energy = 0;
  for (int n : {32, 64, 128}) {
    const double h = 1.0 / n;
    double err_mass = 0, err_energy = 0;
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) * h;
      const TransportVector fp = transport_flux(smooth(x + h), 0, m);
      const TransportVector fm = transport_flux(smooth(x - h), 0, m);
      const PrimitiveState p = smooth(x);
      const SmoothDerivs d = smooth_dx(x);
      // d(rho u)/dx by the product rule.
      const double mass = d.rho * p.u.x + p.rho * d.u;
      err_mass = std::max(err_mass, std::abs((fp[kRho] - fm[kRho]) / (2 * h) - mass));

      // Conservative matter + radiation fluxes plus the centered
      // non-conservative terms reproduce d/dx of the total energy flux
      // (rho E + p + E_r + p_r) u.
      const double grad_pr = (smooth(x + h).er - smooth(x - h).er) / (6 * h);
      const double div_u = (smooth(x + h).u.x - smooth(x - h).u.x) / (2 * h);
      const NonconservativeTerms nc = nonconservative_terms(p, {grad_pr, 0, 0}, div_u);
      const double discrete = (fp[kEnergy] - fm[kEnergy] + fp[kEr] - fm[kEr]) / (2 * h) -
                              nc.energy - nc.er;
      // Analytic: total energy flux G = (rho (|u|^2/2 + C_v theta) + rho theta
      // + 4/3 E_r) u.
      const double u2 = norm2(p.u);
      const double du2 = 2 * (p.u.x * d.u + p.u.y * 0.1 * 2 * kPi * std::cos(2 * kPi * x));
      const double g = p.rho * (0.5 * u2 + 1.5 * p.theta) + p.rho * p.theta + 4.0 / 3.0 * p.er;
      const double dg = d.rho * (0.5 * u2 + 2.5 * p.theta) + p.rho * (0.5 * du2 + 2.5 * d.theta) +
                        4.0 / 3.0 * d.er;
      err_energy = std::max(err_energy, std::abs(discrete - (dg * p.u.x + g * d.u)));
    }
    if (prev_mass > 0) {
      CHECK(observed_order(prev_mass, err_mass) > 1.9);
      CHECK(observed_order(prev_energy, err_energy) > 1.9);
    }
    prev_mass = err_mass;
    prev_energy = err_energy;
  }
}

TEST_CASE("non-conservative terms vanish on trivial fields") {
  PrimitiveState p;
  p.er = 3.0;
  const NonconservativeTerms a = nonconservative_terms(p, {1, 2, 3}, 4.0);
  CHECK(a.energy == 0.0);
  CHECK(a.er == -4.0);
  p.u = {1, 2, 3};
  const NonconservativeTerms b = nonconservative_terms(p, {}, 0.0);
  CHECK(b.energy == 0.0);
  CHECK(b.er == 0.0);
}

TEST_CASE("centered curl: plane wave and div curl") {
  // E = (0, sin kx, 0): curl E = (0, 0, k cos kx).
  double prev = 0;
  for (int n : {32, 64, 128}) {
    FieldGrid g(GridShape{1, {n, 1, 1}, {1, 1, 1}});
    std::vector<Vec3> e(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) e[i] = {0, std::sin(2 * kPi * g.center(i).x), 0};
    double err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Vec3 c = centered_curl(g, i, [&](std::size_t j) { return e[j]; });
      err = std::max({err, std::abs(c.x), std::abs(c.y),
                      std::abs(c.z - 2 * kPi * std::cos(2 * kPi * g.center(i).x))});
    }
    if (prev > 0) CHECK(observed_order(prev, err) > 1.95);
    prev = err;
  }

  FieldGrid g(GridShape{3, {6, 5, 7}, {1.0, 2.0, 0.5}});
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  std::vector<Vec3> f(g.size());
  for (auto& v : f) v = {nd(rng), nd(rng), nd(rng)};
  std::vector<Vec3> curl(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    curl[i] = centered_curl(g, i, [&](std::size_t j) { return f[j]; });
  }
  double worst = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    worst = std::max(worst, std::abs(centered_divergence(g, i, [&](std::size_t j) { return curl[j]; })));
  }
  CHECK(worst < 1e-12);

  std::vector<Vec3> uniform(g.size(), Vec3{1.5, -2, 3});
  const Vec3 c0 = centered_curl(g, 4, [&](std::size_t j) { return uniform[j]; });
  CHECK(norm(c0) == 0.0);
}

TEST_CASE("local sources") {
  const Model m = canonical();
  RadiationClosure rad = m.rad;
  PrimitiveState eq;
  eq.rho = 1.2;
  eq.theta = 0.9;
  eq.er = rad.energy(0.9);
  eq.b = {0.3, -0.2, 0.5};
  const SourceVector s0 = local_sources(eq, m);
  CHECK(norm(s0.momentum) == 0.0);
  CHECK(s0.energy == 0.0);
  CHECK(s0.er == 0.0);
  CHECK(norm(s0.electric) == 0.0);

  Model m0 = make_ideal_model(1.0, 1.5, 1.0, 1.0, 0.0);
  PrimitiveState p = eq;
  p.u = {1.0, 0.0, 0.0};
  p.b = {0.0, 2.0, 0.0};
  p.er = 2.0;
  const SourceVector s1 = local_sources(p, m0);
  CHECK(dot(s1.momentum, p.u) == doctest::Approx(0.0));
  CHECK(s1.energy == doctest::Approx(-s1.exchange));

  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    const PrimitiveState q = random_state(rng);
    const SourceVector s = local_sources(q, m);
    const double scale = std::abs(s.exchange) + std::abs(q.rho * dot(q.e, q.u)) + 1.0;
    CHECK(std::abs(s.energy + q.rho * dot(q.e, q.u) + s.er) < 1e-14 * scale);
    CHECK(s.energy + s.exchange == doctest::Approx(-q.rho * dot(q.e, q.u)));
  }
}

TEST_CASE("wave speed bound") {
  const Model m = canonical();
  PrimitiveState eq;
  const double expect = std::max(1.0, 1.2 * std::sqrt(1.0 + 2.0 / 3.0 + 4.0 / 3.0));
  CHECK(max_wave_speed(eq, 0, m) == doctest::Approx(expect).epsilon(1e-15));

  Model faint = make_ideal_model(1.0, 1.5, 1e-12, 1.0, 1.0);
  PrimitiveState cold;
  cold.theta = 0.01;
  cold.er = faint.rad.energy(0.01);
  CHECK(max_wave_speed(cold, 0, faint) == 1.0);
  cold.theta = 4.0;
  cold.er = faint.rad.energy(4.0);
  CHECK(max_wave_speed(cold, 1, faint) ==
        doctest::Approx(1.2 * std::sqrt(4.0 * 5.0 / 3.0)).epsilon(1e-9));

  // Numerical Jacobian of the quasi-linear transport system
  //   dU/dt + dF/dx + N(U) dU/dx = 0,  N from -u dp_r/dx and -p_r du/dx,
  // in conserved variables U = (rho, m, E, E_r).
  std::mt19937_64 rng(8);
  double max_ratio = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const PrimitiveState p = random_state(rng);
    const int axis = trial % 3;
    auto prim_of = [&](const Eigen::Matrix<double, 6, 1>& u) {
      PrimitiveState q = p;
      q.rho = u(0);
      q.u = {u(1) / u(0), u(2) / u(0), u(3) / u(0)};
      q.theta = (u(4) / u(0) - 0.5 * norm2(q.u)) / 1.5;
      q.er = u(5);
      return q;
    };
    Eigen::Matrix<double, 6, 1> u0;
    const TransportVector t0 = transport_state(p, m.matter());
    for (int q = 0; q < 6; ++q) u0(q) = t0[q];
    Eigen::Matrix<double, 6, 6> jac;
    for (int c = 0; c < 6; ++c) {
      const double h = 1e-6 * std::max(1.0, std::abs(u0(c)));
      Eigen::Matrix<double, 6, 1> up = u0, um = u0;
      up(c) += h;
      um(c) -= h;
      const PrimitiveState qp = prim_of(up), qm = prim_of(um);
      const TransportVector fp = transport_flux(qp, axis, m);
      const TransportVector fm = transport_flux(qm, axis, m);
      for (int r = 0; r < 6; ++r) jac(r, c) = (fp[r] - fm[r]) / (2 * h);
      const double dpr = (qp.er - qm.er) / (3 * 2 * h);
      const double du = (qp.u[axis] - qm.u[axis]) / (2 * h);
      jac(kEnergy, c) += p.u[axis] * dpr;
      jac(kEr, c) += p.er / 3.0 * du;
    }
    const auto ev = jac.eigenvalues();
    double biggest = 0;
    for (int q = 0; q < 6; ++q) biggest = std::max(biggest, std::abs(ev(q)));
    max_ratio = std::max(max_ratio, biggest / max_wave_speed(p, axis, m));
  }
  CHECK(max_ratio <= 1.0);
  MESSAGE("largest |eigenvalue| / lambda over 1000 states: " << max_ratio);
}

TEST_CASE("Rusanov flux consistency and symmetry") {
  const Model m = canonical();
  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const PrimitiveState p = random_state(rng);
    for (int axis = 0; axis < 3; ++axis) {
      CHECK(rusanov_flux(p, p, axis, m) == transport_flux(p, axis, m));
      PrimitiveState l = p, r = p;
      l.u[axis] = std::abs(p.u[axis]);
      r.u[axis] = -std::abs(p.u[axis]);
      CHECK(rusanov_flux(l, r, axis, m)[kRho] == doctest::Approx(0.0).scale(1.0));
    }
  }
}

TEST_CASE("interface reconstruction") {
  PrimitiveState a, b, c, d;
  a.rho = 1.0;
  b.rho = 2.0;
  c.rho = 3.0;
  d.rho = 4.0;
  auto [l1, r1] = interface_states(a, b, c, d, Reconstruction::first_order);
  CHECK(l1 == b);
  CHECK(r1 == c);
  // Linear data is reproduced exactly at the face.
  auto [l2, r2] = interface_states(a, b, c, d, Reconstruction::linear);
  CHECK(l2.rho == doctest::Approx(2.5));
  CHECK(r2.rho == doctest::Approx(2.5));
  auto [l3, r3] = interface_states(a, b, c, d, Reconstruction::minmod);
  CHECK(l3.rho == doctest::Approx(2.5));
  // Minmod flattens at an extremum.
  c.rho = 1.0;
  auto [l4, r4] = interface_states(a, b, c, d, Reconstruction::minmod);
  CHECK(l4.rho == 2.0);
  // Non-positive reconstructions fall back to first order.
  PrimitiveState s0, s1, s2, s3;
  s0.theta = 10.0;
  s1.theta = 0.1;
  s2.theta = 0.1;
  s3.theta = 0.1;
  auto [l5, r5] = interface_states(s0, s1, s2, s3, Reconstruction::linear);
  CHECK(l5 == s1);
  CHECK(r5 == s2);
}

TEST_CASE("Sod shock tube against an independent first-order Rusanov code") {
  // Matter-only problem: tiny radiation constant, fields zero, transport
  // stage only.
  const double a = 1e-14;
  const Model m = make_ideal_model(1.0, 1.5, a, 0.0, 0.0);
  const int n = 200;
  const GridShape shape{1, {n, 1, 1}, {1.0, 1.0, 1.0}};
  FieldGrid g(shape);
  std::vector<double> rho(n), mom(n), en(n);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) / n;
    const bool inside = x > 0.25 && x < 0.75;
    PrimitiveState p;
    p.rho = inside ? 1.0 : 0.125;
    p.theta = inside ? 1.0 : 0.8;  // p = 1 and 0.1
    p.er = a * std::pow(p.theta, 4);
    g[i] = to_conserved(p, m.matter());
    rho[i] = p.rho;
    mom[i] = 0.0;
    en[i] = 1.5 * p.rho * p.theta;
  }

  StepperOptions opt;
  opt.recon = Reconstruction::first_order;
  opt.scheme = TimeScheme::ssp_rk3;
  opt.exec = Exec::serial;
  Stepper stepper(m, opt);
  const double dt = 0.4 / n / 1.2 / std::sqrt(5.0 / 3.0 * 1.0 / 1.0) * 0.8;
  const int steps = static_cast<int>(0.1 / dt);

  // Reference: scalar Euler arrays, same wave-speed bound, same RK stages.
  auto speed = [&](double r, double mm, double e) {
    const double u = mm / r;
    const double theta = (e / r - 0.5 * u * u) / 1.5;
    const double c = std::sqrt(theta + theta / 1.5 + 4.0 * a * std::pow(theta, 4) / (3.0 * r));
    return std::max(1.0, std::abs(u) + 1.2 * c);
  };
  auto rhs = [&](const std::vector<double>& r, const std::vector<double>& mm,
                 const std::vector<double>& e, std::vector<double>& dr,
                 std::vector<double>& dm, std::vector<double>& de) {
    std::vector<double> fr(n), fm(n), fe(n);
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      auto flux = [&](int k, double& f0, double& f1, double& f2) {
        const double u = mm[k] / r[k];
        const double p = r[k] * (e[k] / r[k] - 0.5 * u * u) / 1.5;
        f0 = mm[k];
        f1 = mm[k] * u + p;
        f2 = (e[k] + p) * u;
      };
      double l0, l1, l2, r0, r1, r2;
      flux(i, l0, l1, l2);
      flux(j, r0, r1, r2);
      const double lam = std::max(speed(r[i], mm[i], e[i]), speed(r[j], mm[j], e[j]));
      fr[i] = 0.5 * (l0 + r0) - 0.5 * lam * (r[j] - r[i]);
      fm[i] = 0.5 * (l1 + r1) - 0.5 * lam * (mm[j] - mm[i]);
      fe[i] = 0.5 * (l2 + r2) - 0.5 * lam * (e[j] - e[i]);
    }
    for (int i = 0; i < n; ++i) {
      const int k = (i + n - 1) % n;
      dr[i] = -(fr[i] - fr[k]) * n;
      dm[i] = -(fm[i] - fm[k]) * n;
      de[i] = -(fe[i] - fe[k]) * n;
    }
  };
  std::vector<double> dr(n), dm(n), de(n);
  for (int s = 0; s < steps; ++s) {
    stepper.hyperbolic_step(g, dt);
    auto r1 = rho, m1 = mom, e1 = en;
    rhs(rho, mom, en, dr, dm, de);
    for (int i = 0; i < n; ++i) { r1[i] += dt * dr[i]; m1[i] += dt * dm[i]; e1[i] += dt * de[i]; }
    auto r2 = r1, m2 = m1, e2 = e1;
    rhs(r1, m1, e1, dr, dm, de);
    for (int i = 0; i < n; ++i) {
      r2[i] = 0.75 * rho[i] + 0.25 * (r1[i] + dt * dr[i]);
      m2[i] = 0.75 * mom[i] + 0.25 * (m1[i] + dt * dm[i]);
      e2[i] = 0.75 * en[i] + 0.25 * (e1[i] + dt * de[i]);
    }
    rhs(r2, m2, e2, dr, dm, de);
    for (int i = 0; i < n; ++i) {
      rho[i] = rho[i] / 3.0 + 2.0 / 3.0 * (r2[i] + dt * dr[i]);
      mom[i] = mom[i] / 3.0 + 2.0 / 3.0 * (m2[i] + dt * dm[i]);
      en[i] = en[i] / 3.0 + 2.0 / 3.0 * (e2[i] + dt * de[i]);
    }
  }
  double err = 0, spread = 0;
  for (int i = 0; i < n; ++i) {
    err = std::max({err, std::abs(g[i].rho - rho[i]), std::abs(g[i].m.x - mom[i]),
                    std::abs(g[i].energy - en[i])});
    spread = std::max(spread, std::abs(rho[i] - (i < n / 4 || i >= 3 * n / 4 ? 0.125 : 1.0)));
  }
  CHECK(spread > 0.1);  // the waves actually moved
  CHECK(err < 1e-10);
}
