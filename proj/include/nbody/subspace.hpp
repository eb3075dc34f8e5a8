#pragma once

#include "nbody/mass_system.hpp"

namespace nbody {

enum class SubspaceLabel { Delta, Centered, K, D, Isosceles, Coplanar, Full, Custom };

const char* to_string(SubspaceLabel label);

/// A linear subspace of configuration space, carried by a mass-orthonormal
/// basis stored column-wise (dof x k).
struct Subspace {
  SubspaceLabel label = SubspaceLabel::Custom;
  MatX basis;

  int dim() const { return int(basis.cols()); }
};

/// Modified Gram-Schmidt in the mass metric with a re-orthogonalization
/// pass. Candidate columns whose residual drops below tol (relative to the
/// column's own norm) are rejected as dependent.
MatX mass_orthonormalize(const MassSystem& sys, const MatX& candidates,
                         double tol = 1e-12);

/// max_ij |<b_i, b_j> - delta_ij| over the basis columns.
double gram_deviation(const MassSystem& sys, const MatX& basis);

/// Mass-orthogonal projection of x onto V. The basis is checked first;
/// Gram deviation above 1e-10 raises InvalidSubspace.
VecX project(const MassSystem& sys, const VecX& x, const Subspace& V);

/// Coordinates <x, b_j> of the projection in V's basis.
VecX block_coordinates(const MassSystem& sys, const VecX& x, const Subspace& V);

/// Translations: span of delta(e_k), dimension = ambient dim.
Subspace delta_subspace(const MassSystem& sys);

/// Configurations with center of mass at the origin (dimension N*d - d).
Subspace centered_subspace(const MassSystem& sys);

/// All bodies confined to the plane orthogonal to `normal` (d = 3 only);
/// dimension 2N.
Subspace coplanar_subspace(const MassSystem& sys, const Vec3& normal);

/// Mass-orthonormal basis of everything (dimension N*d).
Subspace full_subspace(const MassSystem& sys);

/// Mass-orthonormal basis of the orthogonal complement of V.
Subspace complement(const MassSystem& sys, const Subspace& V,
                    SubspaceLabel label = SubspaceLabel::Custom);

/// The orthogonal frame attached to a centered planar configuration:
/// Delta = translations (dim 2), K = span{x0, rot90 x0} (dim 2), and the
/// deformation space D = (Delta + K)^perp (dim 2N - 4).
struct SimilarityFrame {
  Subspace delta;
  Subspace K;
  Subspace D;
};

SimilarityFrame build_subspaces(const MassSystem& sys, const VecX& x0);

/// Centered three-body configurations with bodies 1,2 (equal masses) mirror
/// images across the axis line L and body 3 on L; d = 3, dimension 3.
Subspace isosceles_subspace(const MassSystem& sys, const Vec3& axis);

}  // namespace nbody
