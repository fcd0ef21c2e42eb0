#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "remx/diagnostics.hpp"
#include "remx/errors.hpp"
#include "remx/init.hpp"
#include "remx/operators.hpp"
#include "support/fixtures.hpp"

using namespace remx;
using namespace remx::testing;

TEST_CASE("zero perturbation gives the equilibrium") {
  const Model m = canonical_model();
  const Equilibrium eq = canonical_equilibrium(m);
  const GridShape shape{2, {8, 6, 1}, {1, 1, 1}};
  const FieldGrid g = init_fields(shape, m, eq, PerturbationSpec{});
  const FieldGrid u = uniform_grid(shape, eq.primitive(), m.matter());
  CHECK(g.cells() == u.cells());
}

TEST_CASE("constraints hold for perturbed data") {
  const Model m = canonical_model();
  const Equilibrium eq = canonical_equilibrium(m);
  for (int dim : {1, 2, 3}) {
    const GridShape shape{dim, {16, dim > 1 ? 12 : 1, dim > 2 ? 10 : 1}, {1.0, 1.5, 0.8}};
    const FieldGrid g = init_fields(shape, m, eq, full_perturbation(dim, 0.05));
    const ConstraintResiduals r = constraint_residuals(g, eq.rho);
    CHECK(r.div_b <= 1e-12);
    CHECK(r.gauss <= 1e-10);
    CHECK(total_mass(g) == doctest::Approx(eq.rho * shape.volume()).epsilon(1e-14));
    // The magnetic perturbation has zero mean.
    Vec3 mean_b;
    for (const auto& c : g.cells()) mean_b += c.b;
    mean_b = (1.0 / g.size()) * mean_b;
    CHECK(norm(mean_b - eq.b) < 1e-14);
  }
}

TEST_CASE("mode values") {
  const GridShape shape{2, {8, 8, 1}, {2.0, 4.0, 1.0}};
  ModeSpec mode{0.5, {1, 2, 0}, 0.25};
  const double want = 0.5 * std::sin(2 * std::numbers::pi * (0.3 / 2.0 + 2 * 1.0 / 4.0) + 0.25);
  CHECK(mode_value(mode, Vec3{0.3, 1.0, 0.0}, shape) == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("Gauss potential solve") {
  const GridShape shape{2, {12, 10, 1}, {1, 1, 1}};
  FieldGrid geom(shape);
  std::vector<double> rhs(geom.size());
  double mean = 0;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    const Vec3 x = geom.center(i);
    rhs[i] = std::cos(2 * std::numbers::pi * x.x) * std::sin(2 * std::numbers::pi * x.y) + 0.1;
    mean += rhs[i];
  }
  mean /= rhs.size();
  const std::vector<double> phi = solve_gauss_potential(geom, rhs);
  // div grad phi reproduces the mean-free right-hand side.
  double worst = 0;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    const double lap = centered_divergence(geom, i, [&](std::size_t j) {
      return centered_gradient(geom, j, [&](std::size_t k) { return phi[k]; });
    });
    worst = std::max(worst, std::abs(lap - (rhs[i] - mean)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("invalid perturbations are rejected") {
  const Model m = canonical_model();
  const Equilibrium eq = canonical_equilibrium(m);
  const GridShape shape{1, {16, 1, 1}, {1, 1, 1}};
  PerturbationSpec spec;
  spec.fields[kPertU1] = {0.01, {8, 0, 0}, 0.0};  // Nyquist
  CHECK_THROWS_AS(init_fields(shape, m, eq, spec), ConfigError);
  spec.fields[kPertU1] = {0.01, {1, 1, 0}, 0.0};  // inactive axis
  CHECK_THROWS_AS(init_fields(shape, m, eq, spec), ConfigError);
  spec.fields[kPertU1] = {};
  spec.fields[kPertRho] = {0.01, {0, 0, 0}, 0.0};
  CHECK_THROWS_AS(init_fields(shape, m, eq, spec), ConfigError);
  spec.fields[kPertRho] = {};
  spec.fields[kPertTheta] = {2.0, {1, 0, 0}, 0.0};  // negative temperature
  CHECK_THROWS_WITH(init_fields(shape, m, eq, spec), doctest::Contains("non-positive"));
}
