#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <vector>

#include "remx/physics.hpp"
#include "remx/state.hpp"

namespace remx {

/// Execution policy for the grid kernels. `serial` is the straightforward
/// reference loop kept for testing; `parallel` is the OpenMP kernel.
enum class Exec { serial, parallel };

/// Runs body(i) for i in [0, n). Under Exec::parallel the loop is an OpenMP
/// worksharing loop; an exception thrown by any iteration is rethrown after
/// the loop, choosing the lowest failing index so reports do not depend on
/// the thread count.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(remx_for_each_error)
      {
        if (static_cast<std::size_t>(i) < error_index) {
          error_index = static_cast<std::size_t>(i);
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Pairwise (tree) summation with a fixed split, so the result is
/// independent of how the summands were produced.
double pairwise_sum(std::span<const double> values);

/// Sum over cells of f(idx), evaluated under `exec`, reduced pairwise.
template <class F>
double reduce_cells(std::size_t n, Exec exec, F&& f) {
  std::vector<double> values(n);
  for_each_index(n, exec, [&](std::size_t i) { values[i] = f(i); });
  return pairwise_sum(values);
}

/// Conserved -> primitive for every cell. Throws PositivityError naming the
/// first failing cell.
void compute_primitives(const FieldGrid& grid, const EquationOfState& eos,
                        std::vector<PrimitiveState>& prim, Exec exec);

/// Semi-discrete transport + Maxwell right-hand side (no local sources):
/// Rusanov face fluxes with the chosen reconstruction, centered
/// non-conservative radiation terms and centered curls.
///
/// The serial path recomputes both faces of every cell; the parallel path
/// caches one flux per face and axis. Both evaluate identical expressions,
/// so their results agree bit for bit.
void hyperbolic_rhs(const FieldGrid& grid,
                    const std::vector<PrimitiveState>& prim,
                    const Model& model, Reconstruction recon,
                    std::vector<ConservedState>& rhs, Exec exec);

/// min over cells and active axes of dx_a / max_wave_speed(axis).
double min_transit_time(const FieldGrid& grid,
                        const std::vector<PrimitiveState>& prim,
                        const Model& model, Exec exec);

}  // namespace remx
