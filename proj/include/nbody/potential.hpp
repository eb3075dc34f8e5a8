#pragma once

#include "nbody/subspace.hpp"

namespace nbody {

/// Homogeneous pairwise potential U(x) = sum_{i<j} m_i m_j r_ij^{-kappa},
/// kappa > 0. kappa = 1 is the gravitational case.
struct Potential {
  double kappa = 1.0;
};

/// Smallest pairwise distance in the configuration.
double min_pair_distance(const MassSystem& sys, const VecX& x);

/// Throws CollisionError when two bodies are closer than
/// 1e-13 * mass_norm(x).
void check_collision(const MassSystem& sys, const VecX& x);

double value(const MassSystem& sys, const Potential& U, const VecX& x);

/// Gradient with respect to the mass metric, so that the equations of
/// motion read xdd = gradient(x). Always centered: G(grad) = 0.
VecX gradient(const MassSystem& sys, const Potential& U, const VecX& x);

/// <grad U(x), x> + kappa U(x); zero for an exact evaluation since U is
/// homogeneous of degree -kappa.
double euler_identity_check(const MassSystem& sys, const Potential& U,
                            const VecX& x);

/// The second derivative of U at x, as the endomorphism HU = M^{-1} D2U
/// self-adjoint for the mass metric, together with the raw symmetric
/// matrix D2U.
struct HessianOperator {
  MatX hu;    // dof x dof, acts on configuration vectors
  MatX d2u;   // dof x dof, symmetric: <HU u, v> = u^T d2u v
  VecX at;    // configuration it was evaluated at

  VecX apply(const VecX& u) const { return hu * u; }
};

HessianOperator hessian(const MassSystem& sys, const Potential& U,
                        const VecX& x);

/// Mass-metric operator norm of HU: the largest |eigenvalue| of the
/// symmetrized matrix M^{-1/2} D2U M^{-1/2}.
double operator_norm(const MassSystem& sys, const HessianOperator& H);

/// Matrix of the restriction of HU to a subspace in its mass-orthonormal
/// basis: S_ij = <HU b_i, b_j> = b_i^T D2U b_j (symmetric).
MatX restrict_hessian(const MassSystem& sys, const HessianOperator& H,
                      const Subspace& V);

/// Worst relative deviation, over the canonical basis, between HU at the
/// scaled-rotated configuration z*x and the image of HU at x under the
/// scaling law HU_{zx}(v) = z |z|^{-3} HU_x(z^{-1} v). Planar, kappa = 1.
double hessian_scaling_check(const MassSystem& sys, const Potential& U,
                             const VecX& x, Complex z);

}  // namespace nbody
