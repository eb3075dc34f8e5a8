#include "nbody/subspace.hpp"

namespace nbody {

const char* to_string(SubspaceLabel label) {
  switch (label) {
    case SubspaceLabel::Delta: return "Delta";
    case SubspaceLabel::Centered: return "Centered";
    case SubspaceLabel::K: return "K";
    case SubspaceLabel::D: return "D";
    case SubspaceLabel::Isosceles: return "Isosceles";
    case SubspaceLabel::Coplanar: return "Coplanar";
    case SubspaceLabel::Full: return "Full";
    case SubspaceLabel::Custom: return "Custom";
  }
  return "?";
}

MatX mass_orthonormalize(const MassSystem& sys, const MatX& candidates,
                         double tol) {
  const auto& w = sys.weights();
  MatX out(sys.dof(), candidates.cols());
  int kept = 0;
  for (int c = 0; c < candidates.cols(); ++c) {
    VecX v = candidates.col(c);
    const double scale = std::sqrt((v.array().square() * w.array()).sum());
    if (scale == 0.0) continue;
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < kept; ++j) {
        const double coeff = (out.col(j).array() * w.array() * v.array()).sum();
        v -= coeff * out.col(j);
      }
    const double nrm = std::sqrt((v.array().square() * w.array()).sum());
    if (nrm <= tol * scale) continue;  // dependent on what we already have
    out.col(kept++) = v / nrm;
  }
  return out.leftCols(kept);
}

double gram_deviation(const MassSystem& sys, const MatX& basis) {
  const MatX g = basis.transpose() * sys.weights().asDiagonal() * basis;
  return (g - MatX::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

VecX project(const MassSystem& sys, const VecX& x, const Subspace& V) {
  sys.check_config(x);
  if (V.basis.cols() == 0)
    throw InvalidSubspace("projection onto the empty subspace");
  if (V.basis.rows() != sys.dof())
    throw InvalidInput("subspace basis has the wrong ambient dimension");
  if (gram_deviation(sys, V.basis) > 1e-10)
    throw InvalidSubspace("subspace basis is not mass-orthonormal");
  return V.basis * (V.basis.transpose() * (sys.weights().asDiagonal() * x));
}

VecX block_coordinates(const MassSystem& sys, const VecX& x,
                       const Subspace& V) {
  sys.check_config(x);
  return V.basis.transpose() * (sys.weights().asDiagonal() * x);
}

Subspace delta_subspace(const MassSystem& sys) {
  const double s = 1.0 / std::sqrt(sys.total_mass());
  MatX basis(sys.dof(), sys.dim());
  for (int k = 0; k < sys.dim(); ++k) {
    VecX e = VecX::Zero(sys.dim());
    e[k] = s;
    basis.col(k) = delta_embed(sys, e);
  }
  return {SubspaceLabel::Delta, std::move(basis)};
}

Subspace centered_subspace(const MassSystem& sys) {
  return complement(sys, delta_subspace(sys), SubspaceLabel::Centered);
}

Subspace coplanar_subspace(const MassSystem& sys, const Vec3& normal) {
  if (sys.dim() != 3)
    throw InvalidInput("coplanar subspace is defined for d = 3");
  if (normal.norm() == 0.0) throw InvalidInput("zero plane normal");
  // orthonormal basis {a, b} of the plane normal^perp
  Vec3 n = normal.normalized();
  Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 a = (seed - seed.dot(n) * n).normalized();
  Vec3 b = n.cross(a);
  MatX basis = MatX::Zero(sys.dof(), 2 * sys.count());
  for (int i = 0; i < sys.count(); ++i) {
    const double s = 1.0 / std::sqrt(sys.mass(i));
    basis.col(2 * i).segment(3 * i, 3) = s * a;
    basis.col(2 * i + 1).segment(3 * i, 3) = s * b;
  }
  return {SubspaceLabel::Coplanar, std::move(basis)};
}

Subspace full_subspace(const MassSystem& sys) {
  MatX basis = MatX::Zero(sys.dof(), sys.dof());
  for (int j = 0; j < sys.dof(); ++j)
    basis(j, j) = 1.0 / std::sqrt(sys.weights()[j]);
  return {SubspaceLabel::Full, std::move(basis)};
}

Subspace complement(const MassSystem& sys, const Subspace& V,
                    SubspaceLabel label) {
  if (gram_deviation(sys, V.basis) > 1e-10)
    throw InvalidSubspace("complement: basis is not mass-orthonormal");
  MatX candidates(sys.dof(), V.basis.cols() + sys.dof());
  candidates.leftCols(V.basis.cols()) = V.basis;
  candidates.rightCols(sys.dof()) = MatX::Identity(sys.dof(), sys.dof());
  MatX all = mass_orthonormalize(sys, candidates);
  return {label, all.rightCols(all.cols() - V.basis.cols())};
}

SimilarityFrame build_subspaces(const MassSystem& sys, const VecX& x0) {
  if (sys.dim() != 2)
    throw InvalidInput("build_subspaces needs a planar system");
  sys.check_config(x0);
  const double nrm = mass_norm(sys, x0);
  if (nrm == 0.0) throw InvalidInput("build_subspaces: zero configuration");
  Subspace delta = delta_subspace(sys);
  if (mass_norm(sys, project(sys, x0, delta)) > 1e-12 * nrm)
    throw InvalidInput("build_subspaces: configuration is not centered");

  MatX kbasis(sys.dof(), 2);
  kbasis.col(0) = x0 / nrm;
  kbasis.col(1) = rot90(sys, x0) / nrm;

  MatX candidates(sys.dof(), 4 + sys.dof());
  candidates.leftCols(2) = delta.basis;
  candidates.middleCols(2, 2) = kbasis;
  candidates.rightCols(sys.dof()) = MatX::Identity(sys.dof(), sys.dof());
  MatX all = mass_orthonormalize(sys, candidates);
  if (all.cols() != sys.dof())
    throw InvalidInput("build_subspaces: degenerate configuration");

  SimilarityFrame frame;
  frame.delta = delta;
  frame.K = {SubspaceLabel::K, std::move(kbasis)};
  frame.D = {SubspaceLabel::D, all.rightCols(sys.dof() - 4)};
  return frame;
}

Subspace isosceles_subspace(const MassSystem& sys, const Vec3& axis) {
  if (sys.count() != 3 || sys.dim() != 3)
    throw InvalidInput("isosceles subspace needs three bodies in d = 3");
  const double m = sys.mass(0);
  if (std::abs(sys.mass(1) - m) > 1e-12 * m)
    throw InvalidInput("isosceles subspace needs m1 = m2");
  if (axis.norm() == 0.0) throw InvalidInput("zero axis");
  Vec3 u = axis.normalized();
  Vec3 seed = std::abs(u.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 a = (seed - seed.dot(u) * u).normalized();
  Vec3 b = u.cross(a);

  const double m3 = sys.mass(2);
  MatX basis = MatX::Zero(sys.dof(), 3);
  // scale direction: body 3 along L, the pair recoiling to keep the center
  basis.col(0).segment(0, 3) = -(m3 / (2 * m)) * u;
  basis.col(0).segment(3, 3) = -(m3 / (2 * m)) * u;
  basis.col(0).segment(6, 3) = u;
  // pair separation in the two directions of L^perp
  basis.col(1).segment(0, 3) = -0.5 * a;
  basis.col(1).segment(3, 3) = 0.5 * a;
  basis.col(2).segment(0, 3) = -0.5 * b;
  basis.col(2).segment(3, 3) = 0.5 * b;
  return {SubspaceLabel::Isosceles, mass_orthonormalize(sys, basis)};
}

}  // namespace nbody
