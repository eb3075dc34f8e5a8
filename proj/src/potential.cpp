#include "nbody/potential.hpp"

namespace nbody {

double min_pair_distance(const MassSystem& sys, const VecX& x) {
  sys.check_config(x);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sys.count(); ++i)
    for (int j = i + 1; j < sys.count(); ++j)
      best = std::min(best, (sys.body(x, j) - sys.body(x, i)).norm());
  return best;
}

void check_collision(const MassSystem& sys, const VecX& x) {
  if (min_pair_distance(sys, x) <= 1e-13 * mass_norm(sys, x))
    throw CollisionError("two bodies are at collision distance");
}

double value(const MassSystem& sys, const Potential& U, const VecX& x) {
  check_collision(sys, x);
  double u = 0.0;
  for (int i = 0; i < sys.count(); ++i)
    for (int j = i + 1; j < sys.count(); ++j) {
      const double r = (sys.body(x, j) - sys.body(x, i)).norm();
      u += sys.mass(i) * sys.mass(j) * std::pow(r, -U.kappa);
    }
  return u;
}

VecX gradient(const MassSystem& sys, const Potential& U, const VecX& x) {
  check_collision(sys, x);
  const int d = sys.dim();
  VecX g = VecX::Zero(sys.dof());
  for (int i = 0; i < sys.count(); ++i)
    for (int j = i + 1; j < sys.count(); ++j) {
      const VecX dv = sys.body(x, j) - sys.body(x, i);
      const double r = dv.norm();
      const double f = U.kappa * std::pow(r, -(U.kappa + 2.0));
      // acceleration contributions: (grad)_i = sum_j kappa m_j r^-(k+2) (r_j - r_i)
      g.segment(i * d, d) += sys.mass(j) * f * dv;
      g.segment(j * d, d) -= sys.mass(i) * f * dv;
    }
  return g;
}

double euler_identity_check(const MassSystem& sys, const Potential& U,
                            const VecX& x) {
  return mass_inner(sys, gradient(sys, U, x), x) + U.kappa * value(sys, U, x);
}

HessianOperator hessian(const MassSystem& sys, const Potential& U,
                        const VecX& x) {
  check_collision(sys, x);
  const int d = sys.dim();
  const int n = sys.count();
  MatX d2u = MatX::Zero(sys.dof(), sys.dof());
  const MatX id = MatX::Identity(d, d);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const VecX dv = sys.body(x, j) - sys.body(x, i);
      const double r = dv.norm();
      // d/dr_j of the pair force kappa m_i m_j r^-(kappa+2) (r_j - r_i)
      const MatX block =
          U.kappa * sys.mass(i) * sys.mass(j) *
          (-(U.kappa + 2.0) * std::pow(r, -(U.kappa + 4.0)) * dv *
               dv.transpose() +
           std::pow(r, -(U.kappa + 2.0)) * id);
      d2u.block(i * d, j * d, d, d) = block;
      d2u.block(j * d, i * d, d, d) = block;
      d2u.block(i * d, i * d, d, d) -= block;
      d2u.block(j * d, j * d, d, d) -= block;
    }
  HessianOperator H;
  H.hu = sys.weights().cwiseInverse().asDiagonal() * d2u;
  H.d2u = std::move(d2u);
  H.at = x;
  return H;
}

double operator_norm(const MassSystem& sys, const HessianOperator& H) {
  const VecX s = sys.weights().cwiseSqrt().cwiseInverse();
  const MatX sym = s.asDiagonal() * H.d2u * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatX> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

MatX restrict_hessian(const MassSystem& sys, const HessianOperator& H,
                      const Subspace& V) {
  (void)sys;
  MatX s = V.basis.transpose() * H.d2u * V.basis;
  return 0.5 * (s + s.transpose());  // clear roundoff asymmetry
}

double hessian_scaling_check(const MassSystem& sys, const Potential& U,
                             const VecX& x, Complex z) {
  if (sys.dim() != 2)
    throw InvalidInput("hessian scaling law is planar");
  if (U.kappa != 1.0)
    throw InvalidInput("hessian scaling law holds for kappa = 1");
  if (z == Complex(0.0, 0.0)) throw InvalidInput("z must be nonzero");
  const VecX zx = complex_scale(sys, z, x);
  const HessianOperator lhs = hessian(sys, U, zx);
  const HessianOperator base = hessian(sys, U, x);
  const double scale = operator_norm(sys, lhs);
  const double zfac = std::pow(std::abs(z), -3.0);
  double worst = 0.0;
  for (int k = 0; k < sys.dof(); ++k) {
    VecX v = VecX::Zero(sys.dof());
    v[k] = 1.0;
    const VecX left = lhs.apply(v);
    const VecX right = complex_scale(
        sys, z, base.apply(complex_scale(sys, 1.0 / z, v))) * zfac;
    worst = std::max(worst, (left - right).norm() / scale);
  }
  return worst;
}

}  // namespace nbody
