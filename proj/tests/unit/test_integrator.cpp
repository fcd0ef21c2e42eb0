#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "remx/diagnostics.hpp"
#include "remx/errors.hpp"
#include "remx/integrator.hpp"
#include "support/fixtures.hpp"

using namespace remx;
using namespace remx::testing;

namespace {

double max_cell_difference(const FieldGrid& a, const FieldGrid& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const ConservedState d = a[i] - b[i];
    worst = std::max({worst, std::abs(d.rho), norm(d.m), std::abs(d.energy),
                      std::abs(d.er), norm(d.b), norm(d.e)});
  }
  return worst;
}

// exp(M t) by scaling and squaring of a Taylor series.
Eigen::MatrixXd expm(const Eigen::MatrixXd& m) {
  int squarings = 0;
  double scale = m.lpNorm<Eigen::Infinity>();
  while (scale > 0.1) {
    scale /= 2;
    ++squarings;
  }
  const Eigen::MatrixXd a = m / std::pow(2.0, squarings);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < 25; ++k) {
    term = term * a / k;
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace

TEST_CASE("CFL step") {
  const Model m = canonical_model();
  const Equilibrium eq = canonical_equilibrium(m);
  const FieldGrid g = uniform_grid(GridShape{1, {64, 1, 1}, {1, 1, 1}}, eq.primitive(), m.matter());
  Stepper s(m, {});
  const double lambda = 1.2 * std::sqrt(1.0 + 2.0 / 3.0 + 4.0 / 3.0);
  CHECK(s.cfl_dt(g, 0.5, 0.0, 10.0) == doctest::Approx(0.5 / 64 / lambda).epsilon(1e-14));
  CHECK(s.cfl_dt(g, 0.5, 1.0, 1.001) == doctest::Approx(0.001));

  // 2D: the smaller transit time wins.
  const FieldGrid g2 = uniform_grid(GridShape{2, {64, 128, 1}, {1, 1, 1}}, eq.primitive(), m.matter());
  CHECK(s.cfl_dt(g2, 0.5, 0.0, 10.0) == doctest::Approx(0.5 / 128 / lambda).epsilon(1e-14));
}

TEST_CASE("mass is conserved to round-off") {
  const Model m = canonical_model();
  const Equilibrium eq = canonical_equilibrium(m);
  FieldGrid g = init_fields(GridShape{2, {16, 16, 1}, {1, 1, 1}}, m, eq, full_perturbation(2, 0.05));
  Stepper s(m, {});
  const double mass0 = total_mass(g);
  for (int i = 0; i < 50; ++i) s.strang_step(g, s.cfl_dt(g, 0.5, 0, 1e9));
  CHECK(std::abs(total_mass(g) - mass0) < 1e-13 * mass0);
}

TEST_CASE("transport stage conserves momentum without fields") {
  const Model m = make_ideal_model(1.0, 1.5, 1.0, 1.0, 0.0);
  const Equilibrium eq = make_equilibrium(1.0, 1.0, {}, m.rad);
  PerturbationSpec spec = full_perturbation(1, 0.05);
  for (int f = kPertA1; f < kPertCount; ++f) spec.fields[f].amplitude = 0.0;
  FieldGrid g = init_fields(GridShape{1, {64, 1, 1}, {1, 1, 1}}, m, eq, spec);
  // Drop the Gauss field so only transport acts.
  for (auto& c : g.cells()) c.e = {};
  Stepper s(m, {});
  auto momentum = [&] {
    Vec3 p;
    for (const auto& c : g.cells()) p += c.m;
    return p;
  };
  const Vec3 p0 = momentum();
  for (int i = 0; i < 50; ++i) s.hyperbolic_step(g, s.cfl_dt(g, 0.5, 0, 1e9));
  CHECK(norm(momentum() - p0) < 1e-13);
}

TEST_CASE("momentum-electric update tracks the matrix exponential") {
  ConservedState c;
  c.rho = 1.3;
  c.m = {0.2, -0.1, 0.05};
  c.e = {0.03, 0.07, -0.02};
  c.b = {0.4, -0.3, 0.9};
  c.energy = 2.0;
  const double nu = 0.7;
  const double rho = c.rho;
  const Vec3 b = c.b;

  // y = (m, E): dm/dt = -rho E - m x B - nu m, dE/dt = m.
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(6, 6);
  const Eigen::Matrix3d cross_b{{0, -b.z, b.y}, {b.z, 0, -b.x}, {-b.y, b.x, 0}};  // m -> B x m
  gen.block<3, 3>(0, 0) = cross_b - nu * Eigen::Matrix3d::Identity();
  gen.block<3, 3>(0, 3) = -rho * Eigen::Matrix3d::Identity();
  gen.block<3, 3>(3, 0) = Eigen::Matrix3d::Identity();
  Eigen::VectorXd y0(6);
  y0 << c.m.x, c.m.y, c.m.z, c.e.x, c.e.y, c.e.z;

  double prev = 0;
  for (double dt : {0.1, 0.05, 0.025}) {
    ConservedState d = c;
    momentum_electric_update(d, dt, nu);
    const Eigen::VectorXd exact = expm(gen * dt) * y0;
    Eigen::VectorXd got(6);
    got << d.m.x, d.m.y, d.m.z, d.e.x, d.e.y, d.e.z;
    const double err = (got - exact).norm();
    if (prev > 0) CHECK(std::log2(prev / err) > 2.8);
    prev = err;
    // Energy bookkeeping: matter + electric energy only gains damping heat,
    // which stays in the matter energy, so the sum is unchanged.
    CHECK(d.energy + 0.5 * norm2(d.e) == doctest::Approx(c.energy + 0.5 * norm2(c.e)).epsilon(1e-14));
    CHECK(d.rho == c.rho);
    CHECK(d.b == c.b);
  }
}

TEST_CASE("radiative exchange keeps rho e + E_r and relaxes") {
  const Model m = canonical_model();
  PrimitiveState p;
  p.rho = 0.8;
  p.u = {0.1, 0.2, -0.3};
  p.theta = 1.4;
  p.er = 0.5;
  ConservedState c = to_conserved(p, m.matter());
  const double before = c.energy + c.er;
  const double gap0 = std::abs(m.rad.energy(p.theta) - p.er);
  radiative_exchange_update(c, m, 0.1);
  CHECK(std::abs(c.energy + c.er - before) < 1e-12);
  CHECK(c.m == to_conserved(p, m.matter()).m);
  const PrimitiveState q = to_primitive(c, m.matter());
  CHECK(std::abs(m.rad.energy(q.theta) - q.er) < gap0);
  CHECK(q.theta < p.theta);
  CHECK(q.er > p.er);
}

TEST_CASE("equilibrium is a fixed point of the full step") {
  const Model m = canonical_model();
  const Equilibrium eq = canonical_equilibrium(m);
  const GridShape shape{2, {16, 16, 1}, {1, 1, 1}};
  FieldGrid g = uniform_grid(shape, eq.primitive(), m.matter());
  const FieldGrid g0 = g;
  Stepper s(m, {});
  for (int i = 0; i < 200; ++i) s.strang_step(g, s.cfl_dt(g, 0.5, 0, 1e9));
  CHECK(max_cell_difference(g, g0) < 1e-13);
}

TEST_CASE("restart continues a run to round-off") {
  const Model m = canonical_model();
  const Equilibrium eq = canonical_equilibrium(m);
  const FieldGrid g0 = init_fields(GridShape{1, {64, 1, 1}, {1, 1, 1}}, m, eq, full_perturbation(1, 0.01));
  RunParams p;
  p.t_end = 0.4;
  p.output_every = 0.1;
  const RunResult whole = run(g0, m, eq, p);

  RunParams first = p;
  first.t_end = 0.2;
  const RunResult a = run(g0, m, eq, first);
  RunParams second = p;
  second.resume = a.series.back();
  second.check_constraints = false;  // residuals of an evolved state
  const RunResult b = run(a.fields, m, eq, second, {}, a.time, a.steps);

  CHECK(max_cell_difference(whole.fields, b.fields) < 1e-12);
  CHECK(b.series.back().step == whole.series.back().step);
  CHECK(b.series.back().d2 == doctest::Approx(whole.series.back().d2).epsilon(1e-12));
  CHECK(b.series.back().f_sup == doctest::Approx(whole.series.back().f_sup).epsilon(1e-12));
}

TEST_CASE("run refuses constraint-violating data") {
  const Model m = canonical_model();
  const Equilibrium eq = canonical_equilibrium(m);
  FieldGrid g = uniform_grid(GridShape{1, {32, 1, 1}, {1, 1, 1}}, eq.primitive(), m.matter());
  g[3].e.x = 0.1;  // breaks Gauss
  CHECK_THROWS_AS(run(g, m, eq, RunParams{}), RunAbort);
  RunParams bad;
  bad.t_end = 0.0;
  CHECK_THROWS_AS(run(uniform_grid(g.shape(), eq.primitive(), m.matter()), m, eq, bad), RunAbort);
}

TEST_CASE("run reports the abort time for a stage failure") {
  const Model m = canonical_model();
  const Equilibrium eq = canonical_equilibrium(m);
  FieldGrid g = uniform_grid(GridShape{1, {32, 1, 1}, {1, 1, 1}}, eq.primitive(), m.matter());
  RunParams p;
  p.fixed_dt = 50.0;  // far beyond stability
  p.t_end = 1000.0;
  p.output_every = 1000.0;
  PerturbationSpec spec;
  spec.fields[kPertU1].amplitude = 0.5;
  g = init_fields(g.shape(), m, eq, spec);
  try {
    run(g, m, eq, p);
    FAIL("expected RunAbort");
  } catch (const RunAbort& e) {
    CHECK(e.step() >= 0);
  }
}
