#include "remx/linear.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "remx/errors.hpp"

namespace remx {

namespace {

constexpr int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((i + 1) % 3 == j) ? 1 : -1;
}

using DynMatrix = Eigen::MatrixXd;

// Orthonormal basis of the eigenspace of the symmetric matrix `sym` with
// eigenvalues |lambda| <= tol * scale.
DynMatrix kernel_basis(const DynMatrix& sym, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<DynMatrix> es(sym);
  const auto& vals = es.eigenvalues();
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::vector<int> cols;
  for (int i = 0; i < vals.size(); ++i) {
    if (std::abs(vals(i)) <= rel_tol * scale) cols.push_back(i);
  }
  DynMatrix k(sym.rows(), static_cast<int>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    k.col(static_cast<int>(c)) = es.eigenvectors().col(cols[c]);
  }
  return k;
}

SkDirectionReport analyse_direction(const DynMatrix& a_sym,
                                    const DynMatrix& kernel,
                                    const Eigen::VectorXd& inv_sqrt_s,
                                    const Vec3& xi, double angle_tol) {
  SkDirectionReport rep;
  rep.xi = xi;
  Eigen::SelfAdjointEigenSolver<DynMatrix> es(a_sym);
  if (es.info() != Eigen::Success) {
    rep.failed = true;
    rep.failure = "eigen-solver failure";
    return rep;
  }
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  const int n = static_cast<int>(vals.size());
  for (int i = 0; i < n; ++i) rep.eigenvalues.push_back(vals(i));

  const DynMatrix proj_out =
      DynMatrix::Identity(n, n) - kernel * kernel.transpose();
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  rep.min_angle = std::numbers::pi / 2;

  // Group eigenvalues into clusters; each cluster spans one eigenspace.
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && vals(end) - vals(end - 1) <= 1e-9 * scale) ++end;
    const DynMatrix basis = vecs.middleCols(start, end - start);
    // Smallest sin(angle) between the eigenspace and ker(sym L).
    Eigen::JacobiSVD<DynMatrix> svd(proj_out * basis, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const int last = static_cast<int>(sv.size()) - 1;
    const double sin_angle = std::min(1.0, sv(last));
    const double angle = std::asin(sin_angle);
    rep.min_angle = std::min(rep.min_angle, angle);
    if (angle < angle_tol) {
      SkViolation v;
      v.eigenvalue = vals(start);
      v.angle = angle;
      Eigen::VectorXd w = basis * svd.matrixV().col(last);
      w = w.cwiseProduct(inv_sqrt_s);
      w.normalize();
      v.vector = LinearVector::Zero();
      v.vector.head(w.size()) = w;
      rep.violations.push_back(v);
    }
    start = end;
  }
  return rep;
}

}  // namespace

LinearMatrix LinearizedSystem::symbol(const Vec3& xi) const {
  return xi.x * a[0] + xi.y * a[1] + xi.z * a[2];
}

ComplexMatrix LinearizedSystem::generator(const Vec3& xi) const {
  const std::complex<double> i1(0.0, 1.0);
  return -(i1 * symbol(xi).cast<std::complex<double>>() +
           l.cast<std::complex<double>>());
}

LinearizedSystem assemble(const Equilibrium& eq, const Model& model) {
  check_compatible(eq, model.rad);
  const EquationOfState& eos = model.matter();
  const double rho = eq.rho;
  const double th = eq.theta;
  const double p_rho = eos.dp_drho(rho, th);
  const double p_th = eos.dp_dtheta(rho, th);
  const double cv = eos.de_dtheta(rho, th);
  const double a = model.rad.a;
  const double sigma = model.rad.sigma_a;

  LinearizedSystem lin;
  lin.eq = eq;
  lin.nu = model.nu;
  LinearCoefficients& c = lin.coeff;
  c.a1 = p_rho / rho;
  c.a2 = p_th / rho;
  c.a3 = 1.0 / (3.0 * rho);
  c.b1 = th * p_th / (rho * cv);
  c.b2 = 4.0 * a * sigma * th * th * th / (rho * cv);
  c.b3 = sigma / (rho * cv);
  c.c1 = 4.0 / 3.0 * eq.er;
  c.c2 = 4.0 * a * sigma * th * th * th;
  c.c3 = sigma;

  for (int j = 0; j < 3; ++j) {
    LinearMatrix& aj = lin.a[j];
    aj.setZero();
    aj(kLinRho, kLinU + j) = rho;
    aj(kLinU + j, kLinRho) = c.a1;
    aj(kLinU + j, kLinTheta) = c.a2;
    aj(kLinU + j, kLinEr) = c.a3;
    aj(kLinTheta, kLinU + j) = c.b1;
    aj(kLinEr, kLinU + j) = c.c1;
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) {
        const int eps = levi_civita(i, j, k);
        if (eps == 0) continue;
        aj(kLinB + i, kLinE + k) = eps;   // dB/dt + curl E = 0
        aj(kLinE + i, kLinB + k) = -eps;  // dE/dt - curl B = ...
      }
    }
  }

  LinearMatrix& l = lin.l;
  l.setZero();
  for (int i = 0; i < 3; ++i) {
    l(kLinU + i, kLinU + i) = model.nu;
    l(kLinU + i, kLinE + i) = 1.0;
    l(kLinE + i, kLinU + i) = -rho;
    for (int j = 0; j < 3; ++j) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) v += levi_civita(i, j, k) * eq.b[k];
      l(kLinU + i, kLinU + j) += v;  // (u x B_bar)_i
    }
  }
  l(kLinTheta, kLinTheta) = c.b2;
  l(kLinTheta, kLinEr) = -c.b3;
  l(kLinEr, kLinTheta) = -c.c2;
  l(kLinEr, kLinEr) = c.c3;

  LinearVector& s = lin.symmetrizer;
  s(kLinRho) = p_rho / rho;
  for (int i = 0; i < 3; ++i) {
    s(kLinU + i) = rho;
    s(kLinB + i) = 1.0;
    s(kLinE + i) = 1.0;
  }
  s(kLinTheta) = rho * cv / th;
  s(kLinEr) = 1.0 / (4.0 * eq.er);
  return lin;
}

bool SkReport::all_violated() const {
  if (directions.empty()) return false;
  return std::all_of(directions.begin(), directions.end(),
                     [](const SkDirectionReport& d) {
                       return !d.failed && !d.violations.empty();
                     });
}

SkReport sk_check(const LinearizedSystem& lin, const std::vector<Vec3>& xis,
                  double angle_tol) {
  SkReport report;
  report.angle_tol = angle_tol;

  const Eigen::VectorXd sqrt_s = lin.symmetrizer.cwiseSqrt();
  const Eigen::VectorXd inv_sqrt_s = sqrt_s.cwiseInverse();
  auto symmetrize = [&](const DynMatrix& m, int n) {
    return DynMatrix(sqrt_s.head(n).asDiagonal() * m *
                     inv_sqrt_s.head(n).asDiagonal());
  };

  const DynMatrix l_tilde = symmetrize(lin.l, kLinearSize);
  const DynMatrix dissipative = 0.5 * (l_tilde + l_tilde.transpose());
  const DynMatrix kernel = kernel_basis(dissipative, 1e-12);
  report.kernel_dim = static_cast<int>(kernel.cols());

  constexpr int kFluid = 6;
  const DynMatrix l_fluid = symmetrize(lin.l.topLeftCorner(kFluid, kFluid), kFluid);
  const DynMatrix kernel_fluid =
      kernel_basis(0.5 * (l_fluid + l_fluid.transpose()), 1e-12);

  for (const Vec3& xi : xis) {
    if (norm2(xi) == 0.0) {
      throw DomainError("sk_check: zero direction");
    }
    const Vec3 dir = (1.0 / norm(xi)) * xi;
    DynMatrix a_tilde = symmetrize(lin.symbol(dir), kLinearSize);
    a_tilde = 0.5 * (a_tilde + a_tilde.transpose());
    report.directions.push_back(
        analyse_direction(a_tilde, kernel, inv_sqrt_s, dir, angle_tol));

    DynMatrix a_fluid =
        symmetrize(lin.symbol(dir).topLeftCorner(kFluid, kFluid), kFluid);
    a_fluid = 0.5 * (a_fluid + a_fluid.transpose());
    report.fluid_block.push_back(analyse_direction(
        a_fluid, kernel_fluid, inv_sqrt_s.head(kFluid), dir, angle_tol));
  }
  return report;
}

std::vector<Vec3> sphere_directions(int count) {
  std::vector<Vec3> dirs;
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      for (int k = -1; k <= 1; ++k) {
        if (i == 0 && j == 0 && k == 0) continue;
        const Vec3 v{double(i), double(j), double(k)};
        dirs.push_back((1.0 / norm(v)) * v);
      }
    }
  }
  // Order so that e_1 comes first.
  std::stable_partition(dirs.begin(), dirs.end(), [](const Vec3& v) {
    return v.x == 1.0 && v.y == 0.0 && v.z == 0.0;
  });
  const int extra = count - static_cast<int>(dirs.size());
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int n = 0; n < extra; ++n) {
    const double z = 1.0 - 2.0 * (n + 0.5) / extra;
    const double r = std::sqrt(1.0 - z * z);
    dirs.push_back({r * std::cos(golden * n), r * std::sin(golden * n), z});
  }
  if (count < static_cast<int>(dirs.size())) dirs.resize(std::max(count, 1));
  return dirs;
}

std::vector<std::complex<double>> decay_rates(const LinearizedSystem& lin,
                                              const Vec3& xi) {
  if (norm2(xi) == 0.0) throw DomainError("decay_rates: xi must be nonzero");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(lin.generator(xi));
  std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                        es.eigenvalues().data() + kLinearSize);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
  return out;
}

void write_sk_report(std::ostream& os, const LinearizedSystem& lin,
                     const SkReport& report) {
  const LinearCoefficients& c = lin.coeff;
  os << std::setprecision(12);
  os << "# Kawashima-Shizuta check of the linearized radiative Euler-Maxwell "
        "system\n"
     << "# unknowns: rho u1 u2 u3 theta Er B1 B2 B3 E1 E2 E3\n"
     << "# equilibrium: rho=" << lin.eq.rho << " theta=" << lin.eq.theta
     << " Er=" << lin.eq.er << " B=(" << lin.eq.b.x << "," << lin.eq.b.y << ","
     << lin.eq.b.z << ")\n"
     << "# coefficients: a1=" << c.a1 << " a2=" << c.a2 << " a3=" << c.a3
     << " b1=" << c.b1 << " b2=" << c.b2 << " b3=" << c.b3 << " c1=" << c.c1
     << " c2=" << c.c2 << " c3=" << c.c3 << " nu=" << lin.nu << "\n"
     << "# L partition: dissipative = symmetric part of S L (damping nu on u,\n"
     << "#   theta/E_r relaxation block); antisymmetric = u<->E coupling and\n"
     << "#   u x B_bar rotation. S = diag(p_rho/rho, rho, rho, rho,\n"
     << "#   rho C_v/theta, 1/(4 Er), 1, 1, 1, 1, 1, 1).\n"
     << "# dim ker(sym L) = " << report.kernel_dim
     << ", angle tolerance = " << report.angle_tol << "\n";
  int index = 0;
  for (const auto& d : report.directions) {
    os << "direction " << index++ << " xi=(" << d.xi.x << "," << d.xi.y << ","
       << d.xi.z << ")";
    if (d.failed) {
      os << " FAILED: " << d.failure << "\n";
      continue;
    }
    os << " min_angle=" << d.min_angle << " violations=" << d.violations.size()
       << "\n  eigenvalues:";
    for (double v : d.eigenvalues) os << ' ' << v;
    os << "\n";
    for (const auto& v : d.violations) {
      os << "  violation eigenvalue=" << v.eigenvalue << " angle=" << v.angle
         << " vector=[";
      for (int i = 0; i < kLinearSize; ++i) {
        const double x = std::abs(v.vector(i)) < 1e-14 ? 0.0 : v.vector(i);
        os << (i ? " " : "") << x;
      }
      os << "]\n";
    }
  }
  int fluid_violations = 0;
  for (const auto& d : report.fluid_block) {
    fluid_violations += d.violations.empty() ? 0 : 1;
  }
  os << "fluid block (rho,u,theta,Er): directions with violations = "
     << fluid_violations << " of " << report.fluid_block.size() << "\n";
  os << "verdict: "
     << (report.all_violated() ? "SK violated" : "SK not violated for all directions")
     << "\n";
}

}  // namespace remx
