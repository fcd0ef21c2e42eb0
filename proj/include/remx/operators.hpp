#pragma once

#include <cstddef>

#include "remx/state.hpp"

namespace remx {

// Second-order centered differences on a periodic grid. `field(idx)` returns
// the sampled quantity at cell idx. Inactive axes contribute nothing, so
// div(curl F) vanishes identically for every periodic F.

template <class Field>
auto centered_diff(const FieldGrid& g, std::size_t idx, int axis,
                   Field&& field) {
  const double inv = 1.0 / (2.0 * g.shape().dx(axis));
  return (field(g.neighbor(idx, axis, 1)) - field(g.neighbor(idx, axis, -1))) *
         inv;
}

template <class Field>
Vec3 centered_gradient(const FieldGrid& g, std::size_t idx, Field&& field) {
  Vec3 grad;
  for (int a = 0; a < g.shape().dim; ++a) {
    grad[a] = centered_diff(g, idx, a, field);
  }
  return grad;
}

template <class Field>
double centered_divergence(const FieldGrid& g, std::size_t idx,
                           Field&& field) {
  double div = 0.0;
  for (int a = 0; a < g.shape().dim; ++a) {
    div += centered_diff(g, idx, a,
                         [&](std::size_t j) { return field(j)[a]; });
  }
  return div;
}

template <class Field>
Vec3 centered_curl(const FieldGrid& g, std::size_t idx, Field&& field) {
  // d[a] = partial_a of the vector field.
  Vec3 d[3];
  for (int a = 0; a < g.shape().dim; ++a) {
    d[a] = centered_diff(g, idx, a, field);
  }
  return {d[1].z - d[2].y, d[2].x - d[0].z, d[0].y - d[1].x};
}

}  // namespace remx
