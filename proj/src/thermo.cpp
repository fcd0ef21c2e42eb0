#include "remx/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "remx/errors.hpp"

namespace remx {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << value;
    throw DomainError(os.str());
  }
}

// x - log(1 + x), accurate for small |x|.
double x_minus_log1p(double x) {
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    return x2 * (0.5 - x / 3.0 + x2 / 4.0 - x2 * x / 5.0 + x2 * x2 / 6.0);
  }
  return x - std::log1p(x);
}

// (1 + y) log(1 + y) - y, accurate for small |y|. With y = rho / rho_ref - 1,
// rho_ref times this equals rho ln(rho / rho_ref) - rho + rho_ref.
double one_plus_y_log_minus_y(double y) {
  if (std::abs(y) < 1e-3) {
    const double y2 = y * y;
    return y2 * (0.5 - y / 6.0 + y2 / 12.0 - y2 * y / 20.0 + y2 * y2 / 30.0);
  }
  return (1.0 + y) * std::log1p(y) - y;
}

}  // namespace

double EquationOfState::temperature(double rho, double e_target,
                                    double theta_guess) const {
  require_positive(rho, "density");
  double theta = theta_guess > 0.0 ? theta_guess : 1.0;
  auto residual = [&](double t) { return internal_energy(rho, t) - e_target; };

  double lo = theta / 2.0;
  double hi = theta * 2.0;
  int expansions = 0;
  while (residual(lo) > 0.0) {
    lo /= 2.0;
    if (++expansions > 60 || lo < std::numeric_limits<double>::min()) {
      throw PositivityError("no positive temperature for internal energy " +
                                std::to_string(e_target),
                            0);
    }
  }
  expansions = 0;
  while (residual(hi) < 0.0) {
    hi *= 2.0;
    if (++expansions > 60) {
      throw ConvergenceError("temperature bracket expansion failed");
    }
  }

  theta = std::clamp(theta, lo, hi);
  for (int iter = 0; iter < 50; ++iter) {
    const double f = residual(theta);
    if (f == 0.0) return theta;
    if (f < 0.0) {
      lo = theta;
    } else {
      hi = theta;
    }
    double next = theta - f / de_dtheta(rho, theta);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - theta) <= 1e-12 * next) return next;
    theta = next;
  }
  throw ConvergenceError("temperature Newton iteration did not converge");
}

double EquationOfState::helmholtz_relative(double rho, double theta,
                                           double rho_ref,
                                           double theta_ref) const {
  auto helmholtz = [&](double r, double t) {
    return r * (internal_energy(r, t) - theta_ref * entropy(r, t));
  };
  const double h = 1e-6 * rho_ref;
  const double dh_drho = (helmholtz(rho_ref + h, theta_ref) -
                          helmholtz(rho_ref - h, theta_ref)) /
                         (2.0 * h);
  return helmholtz(rho, theta) - (rho - rho_ref) * dh_drho -
         helmholtz(rho_ref, theta_ref);
}

IdealGas::IdealGas(double gas_constant, double specific_heat)
    : r_(gas_constant), cv_(specific_heat) {
  require_positive(gas_constant, "gas constant R");
  require_positive(specific_heat, "specific heat C_v");
}

double IdealGas::pressure(double rho, double theta) const {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  return r_ * rho * theta;
}

double IdealGas::internal_energy(double rho, double theta) const {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  return cv_ * theta;
}

double IdealGas::entropy(double rho, double theta) const {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  return cv_ * std::log(theta) - r_ * std::log(rho);
}

double IdealGas::dp_drho(double rho, double theta) const {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  return r_ * theta;
}

double IdealGas::dp_dtheta(double rho, double theta) const {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  return r_ * rho;
}

double IdealGas::de_drho(double rho, double theta) const {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  return 0.0;
}

double IdealGas::de_dtheta(double rho, double theta) const {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  return cv_;
}

double IdealGas::temperature(double rho, double e_target, double) const {
  require_positive(rho, "density");
  if (!(e_target > 0.0)) {
    throw PositivityError("non-positive internal energy " +
                              std::to_string(e_target),
                          0);
  }
  return e_target / cv_;
}

// rho C_v (theta - theta_ref - theta_ref ln(theta / theta_ref))
//   + R theta_ref (rho ln(rho / rho_ref) - rho + rho_ref)
double IdealGas::helmholtz_relative(double rho, double theta, double rho_ref,
                                    double theta_ref) const {
  require_positive(rho, "density");
  require_positive(theta, "temperature");
  require_positive(rho_ref, "reference density");
  require_positive(theta_ref, "reference temperature");
  const double x = (theta - theta_ref) / theta_ref;
  const double y = (rho - rho_ref) / rho_ref;
  return rho * cv_ * theta_ref * x_minus_log1p(x) +
         r_ * theta_ref * rho_ref * one_plus_y_log_minus_y(y);
}

double RadiationClosure::energy(double temperature) const {
  require_positive(temperature, "radiation temperature");
  const double t2 = temperature * temperature;
  return a * t2 * t2;
}

double RadiationClosure::temperature(double energy) const {
  require_positive(energy, "radiative energy");
  require_positive(a, "radiation constant");
  return std::sqrt(std::sqrt(energy / a));
}

double RadiationClosure::pressure(double energy) const {
  require_positive(energy, "radiative energy");
  return energy / 3.0;
}

double RadiationClosure::entropy(double energy) const {
  const double t = temperature(energy);
  return 4.0 / 3.0 * a * t * t * t;
}

double helmholtz_matter_relative(const EquationOfState& eos, double rho,
                                 double theta, double rho_ref,
                                 double theta_ref) {
  require_positive(rho_ref, "reference density");
  require_positive(theta_ref, "reference temperature");
  return eos.helmholtz_relative(rho, theta, rho_ref, theta_ref);
}

double helmholtz_rad_relative(const RadiationClosure& rad, double t_rad,
                              double theta_ref) {
  require_positive(t_rad, "radiation temperature");
  require_positive(theta_ref, "reference temperature");
  const double d = t_rad - theta_ref;
  return rad.a * d * d *
         (t_rad * t_rad + 2.0 / 3.0 * theta_ref * t_rad +
          theta_ref * theta_ref / 3.0);
}

double radical_inverse(std::size_t index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

Lemma1Report lemma1_verify(const EquationOfState& eos,
                           const RadiationClosure& rad, double rho_ref,
                           double theta_ref, std::size_t sample_count) {
  require_positive(rho_ref, "reference density");
  require_positive(theta_ref, "reference temperature");
  if (sample_count < 1000) {
    throw DomainError("lemma1_verify needs at least 1000 samples");
  }

  Lemma1Report report;
  report.c1 = report.c3 = std::numeric_limits<double>::infinity();
  report.c2 = report.c4 = 0.0;

  auto fail = [&](const std::string& what) {
    report.failure = what;
    return report;
  };

  // Halton points are strictly inside (0, 1), so samples stay in the open
  // sets O1, O2.
  for (std::size_t n = 1; n <= sample_count; ++n) {
    const double rho =
        rho_ref * (0.5 + 1.5 * radical_inverse(n, 2));
    const double theta = theta_ref * (0.5 + 1.5 * radical_inverse(n, 3));
    const double t_rad = theta_ref * (0.5 + 1.5 * radical_inverse(n, 5));
    ++report.samples;

    const double d_matter = (rho - rho_ref) * (rho - rho_ref) +
                            (theta - theta_ref) * (theta - theta_ref);
    if (d_matter == 0.0) {
      ++report.skipped;
    } else {
      const double ratio =
          helmholtz_matter_relative(eos, rho, theta, rho_ref, theta_ref) /
          d_matter;
      if (!std::isfinite(ratio)) {
        std::ostringstream os;
        os << "non-finite matter ratio at rho=" << rho << " theta=" << theta;
        return fail(os.str());
      }
      report.c1 = std::min(report.c1, ratio);
      report.c2 = std::max(report.c2, ratio);
    }

    const double d_rad = (t_rad - theta_ref) * (t_rad - theta_ref);
    if (d_rad == 0.0) {
      ++report.skipped;
    } else {
      const double ratio =
          helmholtz_rad_relative(rad, t_rad, theta_ref) / d_rad;
      if (!std::isfinite(ratio)) {
        std::ostringstream os;
        os << "non-finite radiative ratio at T_r=" << t_rad;
        return fail(os.str());
      }
      report.c3 = std::min(report.c3, ratio);
      report.c4 = std::max(report.c4, ratio);
    }
  }
  return report;
}

}  // namespace remx
