#pragma once

#include "nbody/potential.hpp"

#include <array>
#include <random>

namespace nbody::testing {

inline VecX random_masses(std::mt19937_64& rng, int n = 3) {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  VecX m(n);
  for (int i = 0; i < n; ++i) m[i] = u(rng);
  return m;
}

/// Collision-free configuration with coordinates in [-1, 1] and pairwise
/// distances at least min_dist.
inline VecX random_configuration(const MassSystem& sys, std::mt19937_64& rng,
                                 double min_dist = 0.35) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int attempt = 0; attempt < 20000; ++attempt) {
    VecX x(sys.dof());
    for (int i = 0; i < sys.dof(); ++i) x[i] = u(rng);
    if (min_pair_distance(sys, x) >= min_dist) return x;
  }
  throw std::runtime_error("could not sample a collision-free configuration");
}

inline VecX random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  VecX v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

inline VecX random_unit(const MassSystem& sys, std::mt19937_64& rng) {
  const VecX v = random_vector(sys.dof(), rng);
  return v / mass_norm(sys, v);
}

/// Independent gradient oracle: central differences of value() in every
/// canonical coordinate, pulled back through the mass metric.
inline VecX fd_gradient(const MassSystem& sys, const Potential& U,
                        const VecX& x, double h) {
  VecX g(sys.dof());
  for (int k = 0; k < sys.dof(); ++k) {
    VecX xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (value(sys, U, xp) - value(sys, U, xm)) / (2.0 * h);
  }
  return g.cwiseQuotient(sys.weights());
}

/// Independent directional-Hessian oracle: central difference of gradient()
/// along u.
inline VecX fd_hessian_apply(const MassSystem& sys, const Potential& U,
                             const VecX& x, const VecX& u, double h) {
  return (gradient(sys, U, x + h * u) - gradient(sys, U, x - h * u)) /
         (2.0 * h);
}

/// Direct component-wise mass inner product, independent of the library
/// path.
inline double naive_mass_inner(const MassSystem& sys, const VecX& x,
                               const VecX& y) {
  double sum = 0.0;
  for (int i = 0; i < sys.count(); ++i)
    for (int k = 0; k < sys.dim(); ++k)
      sum += sys.mass(i) * x[i * sys.dim() + k] * y[i * sys.dim() + k];
  return sum;
}

inline VecX unit_equilateral_config() {
  const double s = std::sqrt(3.0) / 2.0;
  VecX t(6);
  t << 1.0, 0.0, -0.5, s, -0.5, -s;
  return t;
}

inline std::array<double, 3> side_lengths_of(const MassSystem& sys,
                                             const VecX& x) {
  return {(sys.body(x, 1) - sys.body(x, 0)).norm(),
          (sys.body(x, 2) - sys.body(x, 1)).norm(),
          (sys.body(x, 2) - sys.body(x, 0)).norm()};
}

}  // namespace nbody::testing
