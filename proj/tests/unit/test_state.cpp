#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "remx/errors.hpp"
#include "remx/snapshot.hpp"
#include "remx/state.hpp"
#include "support/test_eos.hpp"

using namespace remx;

namespace {

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

void check_close(const PrimitiveState& a, const PrimitiveState& b, double tol) {
  auto rel = [](double x, double y) {
    return std::abs(x - y) / std::max(1.0, std::abs(y));
  };
  CHECK(rel(a.rho, b.rho) <= tol);
  CHECK(rel(a.theta, b.theta) <= tol);
  CHECK(rel(a.er, b.er) <= tol);
  for (int i = 0; i < 3; ++i) {
    CHECK(rel(a.u[i], b.u[i]) <= tol);
    CHECK(a.b[i] == b.b[i]);
    CHECK(a.e[i] == b.e[i]);
  }
}

}  // namespace

TEST_CASE("conserved image of simple states") {
  IdealGas gas(1.0, 1.5);
  PrimitiveState p;
  p.rho = 1.0;
  p.u = {2.0, 0.0, 0.0};
  p.theta = 1.0;
  const ConservedState c = to_conserved(p, gas);
  CHECK(c.energy == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(c.m.x == 2.0);

  RadiationClosure rad{1.0, 1.0};
  const Equilibrium eq = make_equilibrium(1.3, 0.9, {0.1, 0.2, 0.3}, rad);
  const ConservedState ce = to_conserved(eq.primitive(), gas);
  CHECK(ce.m == Vec3{});
  CHECK(ce.energy == doctest::Approx(1.3 * 1.5 * 0.9).epsilon(1e-15));
  CHECK(to_primitive(ce, gas) == eq.primitive());
}

TEST_CASE("primitive round trip over random states") {
  IdealGas gas(1.0, 1.5);
  testing::CohesiveGas cohesive(0.8, 2.0, 0.2);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const PrimitiveState p = random_state(rng);
    check_close(to_primitive(to_conserved(p, gas), gas), p, 1e-12);
    check_close(to_primitive(to_conserved(p, cohesive), cohesive, 1.0), p, 1e-12);
  }
}

TEST_CASE("non-recoverable states name the cell") {
  IdealGas gas(1.0, 1.5);
  ConservedState c;
  c.rho = 1.0;
  c.m = {2.0, 0.0, 0.0};
  c.energy = 1.5;  // kinetic energy alone is 2
  c.er = 1.0;
  try {
    to_primitive(c, gas, 1.0, 42);
    FAIL("expected PositivityError");
  } catch (const PositivityError& e) {
    CHECK(e.cell() == 42);
    CHECK(std::string(e.what()).find("cell 42") != std::string::npos);
  }
  c.energy = 10.0;
  c.er = -1.0;
  CHECK_THROWS_AS(to_primitive(c, gas, 1.0, 3), PositivityError);
  c.er = 1.0;
  c.rho = 0.0;
  CHECK_THROWS_AS(to_primitive(c, gas, 1.0, 3), PositivityError);
}

TEST_CASE("equilibrium compatibility") {
  RadiationClosure rad{2.0, 1.0};
  Equilibrium eq = make_equilibrium(1.0, 1.1, {}, rad);
  CHECK(eq.er == doctest::Approx(2.0 * std::pow(1.1, 4)).epsilon(1e-15));
  CHECK_NOTHROW(check_compatible(eq, rad));
  eq.er *= 1.0 + 1e-9;
  CHECK_THROWS_AS(check_compatible(eq, rad), DomainError);
}

TEST_CASE("grid geometry and periodic indexing") {
  GridShape shape{2, {4, 3, 1}, {2.0, 1.5, 1.0}};
  CHECK_NOTHROW(shape.validate());
  CHECK(shape.cells() == 12);
  CHECK(shape.dx(0) == 0.5);
  CHECK(shape.cell_volume() == doctest::Approx(0.25));
  CHECK(shape.volume() == doctest::Approx(3.0));
  FieldGrid g(shape);
  const std::size_t idx = g.index(3, 2, 0);
  CHECK(g.coords(idx) == std::array<int, 3>{3, 2, 0});
  CHECK(g.neighbor(idx, 0, 1) == g.index(0, 2, 0));
  CHECK(g.neighbor(idx, 1, 1) == g.index(3, 0, 0));
  CHECK(g.neighbor(g.index(0, 0, 0), 0, -1) == g.index(3, 0, 0));
  CHECK(g.neighbor(g.index(0, 0, 0), 0, -6) == g.index(2, 0, 0));
  CHECK(g.neighbor(idx, 1, 3) == idx);
  const Vec3 c = g.center(g.index(1, 2, 0));
  CHECK(c.x == doctest::Approx(0.75));
  CHECK(c.y == doctest::Approx(1.25));

  CHECK_THROWS_AS((GridShape{1, {2, 1, 1}, {1, 1, 1}}.validate()), DomainError);
  CHECK_THROWS_AS((GridShape{1, {8, 2, 1}, {1, 1, 1}}.validate()), DomainError);
  CHECK_THROWS_AS((GridShape{1, {8, 1, 1}, {0, 1, 1}}.validate()), DomainError);
}

TEST_CASE("snapshot round trip") {
  IdealGas gas(1.0, 1.5);
  GridShape shape{2, {4, 3, 1}, {1.0, 2.0, 1.0}};
  FieldGrid g(shape);
  std::mt19937_64 rng(9);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = to_conserved(random_state(rng), gas);
  SnapshotMeta meta;
  meta.time = 0.125;
  meta.step = 17;
  meta.extra["note"] = "abc";
  std::stringstream ss;
  write_snapshot(ss, g, gas, meta);
  const std::string text = ss.str();
  CHECK(text.find(kSnapshotColumns) != std::string::npos);

  const Snapshot back = read_snapshot(ss, gas);
  CHECK(back.grid.shape() == shape);
  CHECK(back.meta.time == 0.125);
  CHECK(back.meta.step == 17);
  CHECK(back.meta.extra.at("note") == "abc");
  for (std::size_t i = 0; i < g.size(); ++i) {
    check_close(to_primitive(back.grid[i], gas), to_primitive(g[i], gas), 1e-15);
  }
  std::istringstream bad("# not a snapshot\n");
  CHECK_THROWS(read_snapshot(bad, gas));
}

TEST_CASE("checkpoint layout restores conserved values exactly") {
  IdealGas gas(1.0, 1.5);
  FieldGrid g(GridShape{1, {16, 1, 1}, {1, 1, 1}});
  std::mt19937_64 rng(10);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = to_conserved(random_state(rng), gas);
  std::stringstream ss;
  write_snapshot(ss, g, gas, SnapshotMeta{}, true);
  CHECK(ss.str().find(kCheckpointColumns) != std::string::npos);
  const Snapshot back = read_snapshot(ss, gas);
  CHECK(back.grid.cells() == g.cells());

  std::stringstream truncated;
  write_snapshot(truncated, g, gas, SnapshotMeta{}, true);
  std::string text = truncated.str();
  text.erase(text.rfind(' '));  // drop the last energy value
  std::istringstream is(text + "\n");
  CHECK_THROWS(read_snapshot(is, gas));
}
