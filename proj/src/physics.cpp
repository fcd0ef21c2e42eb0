#include "remx/physics.hpp"

#include <algorithm>
#include <cmath>

namespace remx {

Model make_ideal_model(double gas_constant, double specific_heat, double a,
                       double sigma_a, double nu) {
  Model m;
  m.eos = std::make_shared<IdealGas>(gas_constant, specific_heat);
  m.rad = RadiationClosure{a, sigma_a};
  m.nu = nu;
  return m;
}

TransportVector transport_state(const PrimitiveState& prim,
                                const EquationOfState& eos) {
  const double e = eos.internal_energy(prim.rho, prim.theta);
  return {prim.rho,
          prim.rho * prim.u.x,
          prim.rho * prim.u.y,
          prim.rho * prim.u.z,
          prim.rho * (0.5 * norm2(prim.u) + e),
          prim.er};
}

TransportVector transport_flux(const PrimitiveState& prim, int axis,
                               const Model& model) {
  const EquationOfState& eos = model.matter();
  const double ua = prim.u[axis];
  const double p = eos.pressure(prim.rho, prim.theta);
  const double pr = model.rad.pressure(prim.er);
  const double total_energy =
      prim.rho * (0.5 * norm2(prim.u) + eos.internal_energy(prim.rho, prim.theta));

  TransportVector f;
  f[kRho] = prim.rho * ua;
  f[kMx] = prim.rho * prim.u.x * ua;
  f[kMy] = prim.rho * prim.u.y * ua;
  f[kMz] = prim.rho * prim.u.z * ua;
  f[kMx + axis] += p + pr;
  f[kEnergy] = (total_energy + p) * ua;
  f[kEr] = prim.er * ua;
  return f;
}

NonconservativeTerms nonconservative_terms(const PrimitiveState& prim,
                                           const Vec3& grad_pr, double div_u) {
  return {-dot(prim.u, grad_pr), -prim.er / 3.0 * div_u};
}

SourceVector local_sources(const PrimitiveState& prim, const Model& model) {
  const double t2 = prim.theta * prim.theta;
  const double exchange = model.rad.sigma_a * (model.rad.a * t2 * t2 - prim.er);
  SourceVector s;
  s.momentum = -prim.rho * (prim.e + cross(prim.u, prim.b)) -
               model.nu * prim.rho * prim.u;
  s.exchange = exchange;
  s.energy = -exchange - prim.rho * dot(prim.e, prim.u);
  s.er = exchange;
  s.electric = prim.rho * prim.u;
  return s;
}

double sound_speed_bound(const PrimitiveState& prim, const Model& model) {
  const EquationOfState& eos = model.matter();
  const double p_rho = eos.dp_drho(prim.rho, prim.theta);
  const double p_theta = eos.dp_dtheta(prim.rho, prim.theta);
  const double cv = eos.de_dtheta(prim.rho, prim.theta);
  const double c2 = p_rho +
                    prim.theta * p_theta * p_theta / (prim.rho * prim.rho * cv) +
                    4.0 * prim.er / (3.0 * prim.rho);
  return std::sqrt(c2);
}

double max_wave_speed(const PrimitiveState& prim, int axis,
                      const Model& model) {
  return std::max(1.0,
                  std::abs(prim.u[axis]) + 1.2 * sound_speed_bound(prim, model));
}

TransportVector rusanov_flux(const PrimitiveState& left,
                             const PrimitiveState& right, int axis,
                             const Model& model, double lambda) {
  const TransportVector fl = transport_flux(left, axis, model);
  const TransportVector fr = transport_flux(right, axis, model);
  const TransportVector ul = transport_state(left, model.matter());
  const TransportVector ur = transport_state(right, model.matter());
  TransportVector f;
  for (int q = 0; q < 6; ++q) {
    f[q] = 0.5 * (fl[q] + fr[q]) - 0.5 * lambda * (ur[q] - ul[q]);
  }
  return f;
}

TransportVector rusanov_flux(const PrimitiveState& left,
                             const PrimitiveState& right, int axis,
                             const Model& model) {
  const double lambda = std::max(max_wave_speed(left, axis, model),
                                 max_wave_speed(right, axis, model));
  return rusanov_flux(left, right, axis, model, lambda);
}

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

double slope(double dl, double dr, Reconstruction recon) {
  switch (recon) {
    case Reconstruction::linear:
      return 0.5 * (dl + dr);
    case Reconstruction::minmod:
      return minmod(dl, dr);
    case Reconstruction::first_order:
      break;
  }
  return 0.0;
}

// Half-slope offsets for the reconstructed fluid variables of cell c.
struct FluidSlope {
  double rho, theta, er;
  Vec3 u;
};

FluidSlope fluid_slope(const PrimitiveState& l, const PrimitiveState& c,
                       const PrimitiveState& r, Reconstruction recon) {
  FluidSlope s;
  s.rho = 0.5 * slope(c.rho - l.rho, r.rho - c.rho, recon);
  s.theta = 0.5 * slope(c.theta - l.theta, r.theta - c.theta, recon);
  s.er = 0.5 * slope(c.er - l.er, r.er - c.er, recon);
  for (int i = 0; i < 3; ++i) {
    s.u[i] = 0.5 * slope(c.u[i] - l.u[i], r.u[i] - c.u[i], recon);
  }
  return s;
}

PrimitiveState shifted(const PrimitiveState& c, const FluidSlope& s,
                       double sign) {
  PrimitiveState p = c;
  p.rho += sign * s.rho;
  p.theta += sign * s.theta;
  p.er += sign * s.er;
  p.u += sign * s.u;
  return p;
}

bool admissible(const PrimitiveState& p) {
  return p.rho > 0.0 && p.theta > 0.0 && p.er > 0.0;
}

}  // namespace

std::pair<PrimitiveState, PrimitiveState> interface_states(
    const PrimitiveState& cm, const PrimitiveState& c0,
    const PrimitiveState& c1, const PrimitiveState& cp, Reconstruction recon) {
  if (recon == Reconstruction::first_order) return {c0, c1};
  PrimitiveState left = shifted(c0, fluid_slope(cm, c0, c1, recon), 1.0);
  PrimitiveState right = shifted(c1, fluid_slope(c0, c1, cp, recon), -1.0);
  if (!admissible(left) || !admissible(right)) return {c0, c1};
  return {left, right};
}

}  // namespace remx
