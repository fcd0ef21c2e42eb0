#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "remx/physics.hpp"
#include "remx/state.hpp"

namespace remx {

inline constexpr int kLinearSize = 12;

/// Unknown ordering of the linearized system.
enum LinearIndex : int {
  kLinRho = 0,
  kLinU = 1,  // 1..3
  kLinTheta = 4,
  kLinEr = 5,
  kLinB = 6,  // 6..8
  kLinE = 9   // 9..11
};

using LinearMatrix = Eigen::Matrix<double, kLinearSize, kLinearSize>;
using LinearVector = Eigen::Matrix<double, kLinearSize, 1>;
using ComplexMatrix = Eigen::Matrix<std::complex<double>, kLinearSize, kLinearSize>;

/// Coefficients of the linearized principal part and relaxation terms at the
/// equilibrium.
struct LinearCoefficients {
  double a1 = 0;  ///< p_rho / rho
  double a2 = 0;  ///< p_theta / rho
  double a3 = 0;  ///< 1 / (3 rho)
  double b1 = 0;  ///< theta p_theta / (rho C_v)
  double b2 = 0;  ///< 4 a sigma_a theta^3 / (rho C_v)
  double b3 = 0;  ///< sigma_a / (rho C_v)
  double c1 = 0;  ///< 4 E_r / 3
  double c2 = 0;  ///< 4 a sigma_a theta^3
  double c3 = 0;  ///< sigma_a
};

/// d/dt V + sum_j A_j d_j V + L V = 0 for the deviation V from equilibrium.
struct LinearizedSystem {
  Equilibrium eq;
  LinearCoefficients coeff;
  double nu = 0;
  std::array<LinearMatrix, 3> a;  ///< directional matrices A_1..A_3
  LinearMatrix l;                  ///< zeroth-order matrix
  LinearVector symmetrizer;        ///< diagonal S with S A_j symmetric

  /// A(xi) = sum_j xi_j A_j.
  LinearMatrix symbol(const Vec3& xi) const;
  /// -(i A(xi) + L): the Fourier-mode generator for exp(i xi . x).
  ComplexMatrix generator(const Vec3& xi) const;
};

/// Throws DomainError for an incompatible equilibrium (E_r != a theta^4).
LinearizedSystem assemble(const Equilibrium& eq, const Model& model);

struct SkViolation {
  double eigenvalue = 0;  ///< eigenvalue of A(xi) (symmetrized)
  double angle = 0;       ///< angle between the eigenspace and ker(sym L)
  LinearVector vector;    ///< offending eigenvector, original variables
};

struct SkDirectionReport {
  Vec3 xi;
  std::vector<double> eigenvalues;
  double min_angle = 0;  ///< smallest eigenspace-to-kernel angle
  std::vector<SkViolation> violations;
  bool failed = false;  ///< eigen-solver failure
  std::string failure;
};

struct SkReport {
  std::vector<SkDirectionReport> directions;
  int kernel_dim = 0;         ///< dimension of ker(sym L)
  double angle_tol = 1e-8;
  /// Same analysis on the (rho, u, theta, E_r) block; recorded only.
  std::vector<SkDirectionReport> fluid_block;

  /// True when every direction shows at least one violation.
  bool all_violated() const;
};

/// Kawashima-Shizuta check: for each direction, eigenvectors of the
/// symmetrized A(xi) that lie (within angle_tol) in the kernel of the
/// symmetric part of the symmetrized L.
SkReport sk_check(const LinearizedSystem& lin, const std::vector<Vec3>& xis,
                  double angle_tol = 1e-8);

/// The 26 lattice directions (i, j, k) in {-1, 0, 1}^3 \ 0 normalized,
/// followed by Fibonacci-sphere points up to `count`.
std::vector<Vec3> sphere_directions(int count);

/// Eigenvalues of -(i A(xi) + L), sorted by decreasing real part.
std::vector<std::complex<double>> decay_rates(const LinearizedSystem& lin,
                                              const Vec3& xi);

/// Structured text: header documenting the partition of L, per-direction
/// eigenvalues, angles and violations, and the final verdict.
void write_sk_report(std::ostream& os, const LinearizedSystem& lin,
                     const SkReport& report);

}  // namespace remx
