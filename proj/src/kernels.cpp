#include "remx/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "remx/errors.hpp"
#include "remx/operators.hpp"

namespace remx {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 8;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void compute_primitives(const FieldGrid& grid, const EquationOfState& eos,
                        std::vector<PrimitiveState>& prim, Exec exec) {
  prim.resize(grid.size());
  for_each_index(grid.size(), exec, [&](std::size_t i) {
    prim[i] = to_primitive(grid[i], eos, 1.0, i);
  });
}

namespace {

// Flux through the face between cell `idx` and its +1 neighbour on `axis`.
TransportVector face_flux(const FieldGrid& g,
                          const std::vector<PrimitiveState>& prim,
                          std::size_t idx, int axis, const Model& model,
                          Reconstruction recon) {
  const std::size_t r = g.neighbor(idx, axis, 1);
  const std::size_t l = g.neighbor(idx, axis, -1);
  const std::size_t rr = g.neighbor(idx, axis, 2);
  const auto [left, right] =
      interface_states(prim[l], prim[idx], prim[r], prim[rr], recon);
  return rusanov_flux(left, right, axis, model);
}

// Terms shared by both execution paths: centered radiation work terms and
// the Maxwell curls. `out` already holds the flux divergence.
void add_centered_terms(const FieldGrid& g,
                        const std::vector<PrimitiveState>& prim,
                        std::size_t idx, ConservedState& out) {
  const PrimitiveState& p = prim[idx];
  const Vec3 grad_pr = centered_gradient(
      g, idx, [&](std::size_t j) { return prim[j].er / 3.0; });
  const double div_u =
      centered_divergence(g, idx, [&](std::size_t j) { return prim[j].u; });
  const NonconservativeTerms nc = nonconservative_terms(p, grad_pr, div_u);
  out.energy += nc.energy;
  out.er += nc.er;
  out.b = -centered_curl(g, idx, [&](std::size_t j) { return prim[j].e; });
  out.e = centered_curl(g, idx, [&](std::size_t j) { return prim[j].b; });
}

void accumulate_divergence(ConservedState& out, const TransportVector& fp,
                           const TransportVector& fm, double inv_dx) {
  out.rho -= (fp[kRho] - fm[kRho]) * inv_dx;
  out.m.x -= (fp[kMx] - fm[kMx]) * inv_dx;
  out.m.y -= (fp[kMy] - fm[kMy]) * inv_dx;
  out.m.z -= (fp[kMz] - fm[kMz]) * inv_dx;
  out.energy -= (fp[kEnergy] - fm[kEnergy]) * inv_dx;
  out.er -= (fp[kEr] - fm[kEr]) * inv_dx;
}

}  // namespace

void hyperbolic_rhs(const FieldGrid& grid,
                    const std::vector<PrimitiveState>& prim,
                    const Model& model, Reconstruction recon,
                    std::vector<ConservedState>& rhs, Exec exec) {
  const std::size_t n = grid.size();
  const int dim = grid.shape().dim;
  rhs.assign(n, ConservedState{});

  if (exec == Exec::serial) {
    for (std::size_t idx = 0; idx < n; ++idx) {
      ConservedState& out = rhs[idx];
      for (int a = 0; a < dim; ++a) {
        const double inv_dx = 1.0 / grid.shape().dx(a);
        const TransportVector fp = face_flux(grid, prim, idx, a, model, recon);
        const TransportVector fm = face_flux(
            grid, prim, grid.neighbor(idx, a, -1), a, model, recon);
        accumulate_divergence(out, fp, fm, inv_dx);
      }
      add_centered_terms(grid, prim, idx, out);
    }
    return;
  }

  std::vector<TransportVector> faces(n);
  for (int a = 0; a < dim; ++a) {
    const double inv_dx = 1.0 / grid.shape().dx(a);
    for_each_index(n, Exec::parallel, [&](std::size_t idx) {
      faces[idx] = face_flux(grid, prim, idx, a, model, recon);
    });
    for_each_index(n, Exec::parallel, [&](std::size_t idx) {
      accumulate_divergence(rhs[idx], faces[idx],
                            faces[grid.neighbor(idx, a, -1)], inv_dx);
    });
  }
  for_each_index(n, Exec::parallel, [&](std::size_t idx) {
    add_centered_terms(grid, prim, idx, rhs[idx]);
  });
}

double min_transit_time(const FieldGrid& grid,
                        const std::vector<PrimitiveState>& prim,
                        const Model& model, Exec exec) {
  std::vector<double> local(grid.size());
  for_each_index(grid.size(), exec, [&](std::size_t idx) {
    double t = std::numeric_limits<double>::infinity();
    for (int a = 0; a < grid.shape().dim; ++a) {
      const double lambda = max_wave_speed(prim[idx], a, model);
      if (!std::isfinite(lambda) || !(lambda > 0.0)) {
        std::ostringstream os;
        os << "non-finite wave speed " << lambda << " on axis " << a;
        throw PositivityError(os.str(), idx);
      }
      t = std::min(t, grid.shape().dx(a) / lambda);
    }
    local[idx] = t;
  });
  return *std::min_element(local.begin(), local.end());
}

}  // namespace remx
