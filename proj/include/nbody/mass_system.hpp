#pragma once

#include "nbody/types.hpp"

namespace nbody {

/// N point masses in a Euclidean space of dimension 2 or 3.
///
/// A configuration is a flat vector of length N*dim, body-major:
/// (r_1^1 .. r_1^d, r_2^1 .. r_2^d, ...). All inner products on
/// configuration space are taken with respect to the mass metric
/// <x,y> = sum_i m_i <r_i, s_i>.
class MassSystem {
 public:
  MassSystem(VecX masses, int dim);
  MassSystem(std::initializer_list<double> masses, int dim)
      : MassSystem(VecX(Eigen::Map<const VecX>(masses.begin(),
                                               long(masses.size()))),
                   dim) {}

  int count() const { return int(masses_.size()); }
  int dim() const { return dim_; }
  int dof() const { return count() * dim_; }
  double mass(int i) const { return masses_[i]; }
  const VecX& masses() const { return masses_; }
  double total_mass() const { return total_; }

  /// Per-coordinate weights: each mass repeated dim times. The mass metric
  /// is <x,y> = x . (weights .* y).
  const VecX& weights() const { return weights_; }

  /// Body i as a dim-segment of a configuration vector.
  auto body(const VecX& x, int i) const { return x.segment(i * dim_, dim_); }

  void check_config(const VecX& x) const;

 private:
  VecX masses_;
  int dim_;
  double total_;
  VecX weights_;
};

double mass_inner(const MassSystem& sys, const VecX& x, const VecX& y);
double mass_norm(const MassSystem& sys, const VecX& x);

/// Hermitian product sum_i m_i z_i conj(w_i) of two planar configurations
/// read as complex N-vectors. Real part is the mass inner product,
/// imaginary part is <x, rot90(y)>.
Complex complex_mass_inner(const MassSystem& sys, const VecX& x,
                           const VecX& y);

/// Per-body rotation by pi/2: (a,b) -> (-b,a). Planar systems only.
VecX rot90(const MassSystem& sys, const VecX& x);

/// Per-body multiplication by the complex scalar z. Planar systems only.
VecX complex_scale(const MassSystem& sys, Complex z, const VecX& x);

/// Center of mass G(x) in the ambient space: (sum m_i) G = sum m_i r_i.
VecX center_of_mass(const MassSystem& sys, const VecX& x);

/// The total-collision embedding delta(r) = (r, r, ..., r).
VecX delta_embed(const MassSystem& sys, const VecX& r);

/// x - delta(G(x)): same shape, center of mass moved to the origin.
VecX centered(const MassSystem& sys, const VecX& x);

/// Pack per-body positions given as an N x dim matrix into a flat
/// configuration vector.
VecX flatten(const MassSystem& sys, const MatX& positions);

}  // namespace nbody
