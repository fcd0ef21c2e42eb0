#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace remx {

/// Matter closure p(rho, theta), e(rho, theta), s(rho, theta).
///
/// Implementations must satisfy the Gibbs relation theta ds = de + p d(1/rho)
/// and the sign conditions de/dtheta > 0, dp/drho > 0 for rho, theta > 0.
/// All evaluators throw DomainError on non-positive arguments.
class EquationOfState {
 public:
  virtual ~EquationOfState() = default;

  virtual double pressure(double rho, double theta) const = 0;
  virtual double internal_energy(double rho, double theta) const = 0;
  virtual double entropy(double rho, double theta) const = 0;
  virtual double dp_drho(double rho, double theta) const = 0;
  virtual double dp_dtheta(double rho, double theta) const = 0;
  virtual double de_drho(double rho, double theta) const = 0;
  virtual double de_dtheta(double rho, double theta) const = 0;

  /// Inverts e(rho, .) = e_target. The default is a safeguarded Newton
  /// iteration with bisection fallback (relative tolerance 1e-12, at most
  /// 50 Newton steps). Throws PositivityError if no positive root exists.
  virtual double temperature(double rho, double e_target,
                             double theta_guess) const;

  /// H(rho, theta) - (rho - rho_ref) dH/drho(rho_ref, theta_ref)
  ///   - H(rho_ref, theta_ref),  with H(rho, theta) = rho (e - theta_ref s).
  /// The generic version differentiates H in rho by centered differences.
  virtual double helmholtz_relative(double rho, double theta, double rho_ref,
                                    double theta_ref) const;

  /// Closed-form label used in snapshot headers and reports.
  virtual std::string name() const = 0;
};

/// p = R rho theta, e = C_v theta, s = C_v ln theta - R ln rho (s(1,1) = 0).
class IdealGas final : public EquationOfState {
 public:
  IdealGas(double gas_constant, double specific_heat);

  double gas_constant() const noexcept { return r_; }
  double specific_heat() const noexcept { return cv_; }

  double pressure(double rho, double theta) const override;
  double internal_energy(double rho, double theta) const override;
  double entropy(double rho, double theta) const override;
  double dp_drho(double rho, double theta) const override;
  double dp_dtheta(double rho, double theta) const override;
  double de_drho(double rho, double theta) const override;
  double de_dtheta(double rho, double theta) const override;
  double temperature(double rho, double e_target,
                     double theta_guess) const override;
  double helmholtz_relative(double rho, double theta, double rho_ref,
                            double theta_ref) const override;
  std::string name() const override { return "ideal_gas"; }

 private:
  double r_;
  double cv_;
};

/// Grey two-temperature radiation: E_r = a T_r^4, p_r = E_r / 3,
/// S_r = (4/3) a T_r^3, exchange rate sigma_a (a T^4 - E_r).
struct RadiationClosure {
  double a = 1.0;
  double sigma_a = 1.0;

  double energy(double temperature) const;
  double temperature(double energy) const;
  double pressure(double energy) const;
  double entropy(double energy) const;
};

/// Relative Helmholtz free energy of matter about (rho_ref, theta_ref);
/// non-negative and zero only at the reference state.
double helmholtz_matter_relative(const EquationOfState& eos, double rho,
                                 double theta, double rho_ref,
                                 double theta_ref);

/// a T^3 (T - 4/3 theta_ref) + a theta_ref^4 / 3, evaluated in the
/// cancellation-free factored form a (T - theta_ref)^2 (T^2 + 2/3 theta_ref T
/// + theta_ref^2 / 3).
double helmholtz_rad_relative(const RadiationClosure& rad, double t_rad,
                              double theta_ref);

struct Lemma1Report {
  double c1 = 0.0;  ///< inf of matter ratio over O1
  double c2 = 0.0;  ///< sup of matter ratio over O1
  double c3 = 0.0;  ///< inf of radiative ratio over O2
  double c4 = 0.0;  ///< sup of radiative ratio over O2
  std::size_t samples = 0;
  std::size_t skipped = 0;  ///< samples exactly at the reference state
  /// Set when a ratio was non-finite; describes the offending sample.
  std::optional<std::string> failure;

  bool ok() const {
    return !failure && c1 > 0.0 && c3 > 0.0 && c2 >= c1 && c4 >= c3;
  }
};

/// Empirical quadratic bounds of the relative Helmholtz functions over
/// O1 = (rho/2, 2 rho) x (theta/2, 2 theta) and O2 = (theta/2, 2 theta),
/// sampled with a Halton sequence. Requires sample_count >= 1000.
Lemma1Report lemma1_verify(const EquationOfState& eos,
                           const RadiationClosure& rad, double rho_ref,
                           double theta_ref, std::size_t sample_count);

/// Van der Corput radical inverse of index in the given prime base.
double radical_inverse(std::size_t index, unsigned base);

}  // namespace remx
