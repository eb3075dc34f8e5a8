#include "nbody/central.hpp"

#include <cmath>

namespace nbody {

namespace {

constexpr double kResidualTol = 1e-12;

void require_planar_three(const VecX& masses) {
  if (masses.size() != 3)
    throw InvalidInput("this operation is specific to three bodies");
  if ((masses.array() <= 0.0).any())
    throw InvalidInput("masses must be strictly positive");
}

}  // namespace

std::pair<double, double> central_residual(const MassSystem& sys,
                                           const Potential& U, const VecX& x) {
  sys.check_config(x);
  const double scale = mass_norm(sys, x);
  const VecX g_center = delta_embed(sys, center_of_mass(sys, x));
  if (mass_norm(sys, g_center) > 1e-10 * scale)
    throw InvalidInput("central_residual: configuration is not centered");
  const double u = value(sys, U, x);
  const double inertia = scale * scale;
  const double lambda = -U.kappa * u / inertia;
  const VecX grad = gradient(sys, U, x);
  const double residual =
      mass_norm(sys, grad - lambda * x) / mass_norm(sys, grad);
  return {residual, lambda};
}

CentralConfiguration make_central(const MassSystem& sys, const Potential& U,
                                  const VecX& x) {
  CentralConfiguration cc{sys, U, x, 0.0, 0.0, {}, false, false, 0};
  std::tie(cc.residual_norm, cc.lambda) = central_residual(sys, U, x);
  if (sys.dim() == 2) {
    const SpectrumFlag snd = strong_nondegeneracy(cc);
    cc.spectrum_D = snd.spectrum;
    cc.strongly_nondegenerate = snd.flag;
    CentralConfiguration unit = cc;
    unit.config = x / mass_norm(sys, x);
    cc.strong_minimizer = strong_minimizer(unit).flag;
  }
  return cc;
}

CentralConfiguration find_central(const MassSystem& sys, const Potential& U,
                                  const VecX& seed, int max_iterations) {
  if (sys.dim() != 2)
    throw InvalidInput("find_central works on planar systems");
  sys.check_config(seed);
  check_collision(sys, seed);

  auto normalize = [&](const VecX& v) {
    const VecX c = centered(sys, v);
    const double n = mass_norm(sys, c);
    if (n == 0.0) throw InvalidInput("find_central: degenerate seed");
    return VecX(c / n);
  };
  auto residual_of = [&](const VecX& x) {
    // gradient of U restricted to the unit sphere of centered configurations
    return VecX(gradient(sys, U, x) + U.kappa * value(sys, U, x) * x);
  };

  VecX x = normalize(seed);
  double res = mass_norm(sys, residual_of(x)) /
               mass_norm(sys, gradient(sys, U, x));
  int used = 0;
  for (int it = 0; it < max_iterations && res > kResidualTol; ++it) {
    used = it + 1;
    const double u = value(sys, U, x);
    const VecX grad_s = residual_of(x);
    const SimilarityFrame frame = build_subspaces(sys, x);
    const HessianOperator H = hessian(sys, U, x);
    // Hessian of U|_sphere on the deformation tangent directions
    MatX hess_t = restrict_hessian(sys, H, frame.D);
    hess_t.diagonal().array() += U.kappa * u;
    const VecX rhs = -block_coordinates(sys, grad_s, frame.D);
    const VecX step_c = hess_t.fullPivLu().solve(rhs);
    const VecX step = frame.D.basis * step_c;

    double alpha = 1.0;
    bool accepted = false;
    for (int half = 0; half < 60; ++half, alpha *= 0.5) {
      VecX trial;
      double trial_res;
      try {
        trial = normalize(x + alpha * step);
        trial_res = mass_norm(sys, residual_of(trial)) /
                    mass_norm(sys, gradient(sys, U, trial));
      } catch (const CollisionError&) {
        continue;  // step into collision: halve and retry
      }
      if (trial_res < res) {
        x = trial;
        res = trial_res;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (res > kResidualTol)
    throw SearchFailure("find_central: no convergence to a central "
                        "configuration (residual " +
                        std::to_string(res) + ")");
  CentralConfiguration cc = make_central(sys, U, x);
  cc.newton_iterations = used;
  return cc;
}

SpectrumFlag strong_nondegeneracy(const CentralConfiguration& cc) {
  if (cc.sys.dim() != 2)
    throw InvalidInput("strong non-degeneracy is defined for planar systems");
  const SimilarityFrame frame = build_subspaces(cc.sys, cc.config);
  if (frame.D.dim() == 0) return {true, VecX()};  // two bodies: D is empty
  const HessianOperator H = hessian(cc.sys, cc.pot, cc.config);
  Eigen::SelfAdjointEigenSolver<MatX> eig(
      restrict_hessian(cc.sys, H, frame.D), Eigen::EigenvaluesOnly);
  const VecX spectrum = eig.eigenvalues();
  return {spectrum.minCoeff() > 1e-10 * operator_norm(cc.sys, H), spectrum};
}

SpectrumFlag strong_minimizer(const CentralConfiguration& cc) {
  if (cc.sys.dim() != 2)
    throw InvalidInput("strong minimization is defined for planar systems");
  if (std::abs(mass_norm(cc.sys, cc.config) - 1.0) > 1e-10)
    throw InvalidInput("strong_minimizer needs a unit-norm configuration");
  const MassSystem& sys = cc.sys;
  const VecX& a = cc.config;
  const double u = value(sys, cc.pot, a);
  const double kappa = cc.pot.kappa;
  const SimilarityFrame frame = build_subspaces(sys, a);
  if (frame.D.dim() == 0) return {true, VecX()};
  const HessianOperator H = hessian(sys, cc.pot, a);
  // derivative of the sphere-gradient extension Z = grad U + kappa U x,
  // in the deformation basis: <HU b_i, b_j> + kappa <grad U, b_i><a, b_j>
  // + kappa U delta_ij
  const VecX grad = gradient(sys, cc.pot, a);
  const int k = frame.D.dim();
  MatX m = restrict_hessian(sys, H, frame.D);
  const VecX gc = block_coordinates(sys, grad, frame.D);
  const VecX ac = block_coordinates(sys, a, frame.D);
  m += kappa * gc * ac.transpose();
  m = 0.5 * (m + m.transpose());
  m.diagonal().array() += kappa * u;
  Eigen::SelfAdjointEigenSolver<MatX> eig(m, Eigen::EigenvaluesOnly);
  VecX spectrum = eig.eigenvalues();
  bool flag = true;
  for (int i = 0; i < k; ++i)
    if (!(spectrum[i] > u + 1e-10)) flag = false;
  return {flag, spectrum};
}

GascheauParams gascheau(const VecX& masses) {
  require_planar_three(masses);
  const double m1 = masses[0], m2 = masses[1], m3 = masses[2];
  const double pairwise = m1 * m2 + m1 * m3 + m2 * m3;
  const double squares = m1 * m1 + m2 * m2 + m3 * m3;
  const double total = m1 + m2 + m3;
  return {total * total / pairwise, pairwise / squares};
}

VecX orthogonal_triangle(const VecX& masses) {
  require_planar_three(masses);
  const double m1 = masses[0], m2 = masses[1], m3 = masses[2];
  const Complex w(-0.5, std::sqrt(3.0) / 2.0);
  VecX s(6);
  const Complex z1 = m2 * m3 * Complex(1.0, 0.0);
  const Complex z2 = m1 * m3 * w * w;
  const Complex z3 = m1 * m2 * w;
  s << z1.real(), z1.imag(), z2.real(), z2.imag(), z3.real(), z3.imag();
  return s;
}

DeformationForm deformation_form_closed(const VecX& masses) {
  require_planar_three(masses);
  const double m1 = masses[0], m2 = masses[1], m3 = masses[2];
  const double nu = m1 * m2 * m3 * (m1 * m2 + m1 * m3 + m2 * m3);
  DeformationForm f;
  f.a = nu * (-16.0 * m1 + 20.0 * m2 + 20.0 * m3);
  f.d = nu * (32.0 * m1 - 4.0 * m2 - 4.0 * m3);
  f.b = f.c = nu * 12.0 * std::sqrt(3.0) * (m3 - m2);
  f.trace = f.a + f.d;
  f.det = f.a * f.d - f.b * f.c;
  return f;
}

DeformationForm deformation_form(const VecX& masses) {
  require_planar_three(masses);
  MassSystem sys(masses, 2);
  Potential U{1.0};
  // unit equilateral triangle (1, w, w^2); the Hessian is translation
  // invariant, so centering is not required here
  const Complex w(-0.5, std::sqrt(3.0) / 2.0);
  VecX T(6);
  T << 1.0, 0.0, w.real(), w.imag(), (w * w).real(), (w * w).imag();
  const HessianOperator H = hessian(sys, U, T);
  const MatX A = 12.0 * std::sqrt(3.0) * H.hu;

  const VecX eta = 2.0 * orthogonal_triangle(masses);
  const VecX zeta = rot90(sys, eta);
  DeformationForm f;
  f.a = mass_inner(sys, eta, A * eta);
  f.b = mass_inner(sys, eta, A * zeta);
  f.c = mass_inner(sys, zeta, A * eta);
  f.d = mass_inner(sys, zeta, A * zeta);
  f.trace = f.a + f.d;
  f.det = f.a * f.d - f.b * f.c;

  const DeformationForm closed = deformation_form_closed(masses);
  const double scale = std::max({std::abs(closed.a), std::abs(closed.b),
                                 std::abs(closed.c), std::abs(closed.d)});
  const double worst =
      std::max({std::abs(f.a - closed.a), std::abs(f.b - closed.b),
                std::abs(f.c - closed.c), std::abs(f.d - closed.d)});
  if (worst > 1e-10 * scale)
    throw Error("deformation form: numeric entries disagree with the "
                "closed forms");
  return f;
}

VecX equilateral_configuration(const MassSystem& sys) {
  if (sys.count() != 3 || sys.dim() != 2)
    throw InvalidInput("equilateral configuration needs three planar bodies");
  const Complex w(-0.5, std::sqrt(3.0) / 2.0);
  VecX t(6);
  t << 1.0, 0.0, w.real(), w.imag(), (w * w).real(), (w * w).imag();
  return centered(sys, t);
}

VecX collinear_seed(const MassSystem& sys) {
  if (sys.count() != 3 || sys.dim() != 2)
    throw InvalidInput("collinear seed needs three planar bodies");
  VecX x(6);
  x << -1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  return centered(sys, x);
}

}  // namespace nbody
