#pragma once

#include "nbody/potential.hpp"

namespace nbody {

/// residual = |grad U(x) - lambda x| / |grad U(x)| with
/// lambda = -kappa U(x)/I(x), I = |x|^2. Zero exactly at central
/// configurations. x must be centered and collision-free.
std::pair<double, double> central_residual(const MassSystem& sys,
                                           const Potential& U, const VecX& x);

/// A planar central configuration together with its spectral data on the
/// deformation space D.
struct CentralConfiguration {
  MassSystem sys;
  Potential pot;
  VecX config;          // centered; find_central returns it with unit norm
  double lambda = 0.0;  // -kappa U / I
  double residual_norm = 0.0;
  VecX spectrum_D;  // ascending eigenvalues of HU restricted to D
  bool strongly_nondegenerate = false;
  bool strong_minimizer = false;
  int newton_iterations = 0;
};

/// Validate x as a central configuration and fill in the spectral data
/// (planar systems only).
CentralConfiguration make_central(const MassSystem& sys, const Potential& U,
                                  const VecX& x);

/// Damped Newton search for a critical point of U on the unit mass-metric
/// sphere of centered configurations, starting from seed. The rotation
/// degeneracy is removed by stepping only in the deformation directions.
/// Converges to relative residual <= 1e-12 or throws SearchFailure.
CentralConfiguration find_central(const MassSystem& sys, const Potential& U,
                                  const VecX& seed, int max_iterations = 200);

struct SpectrumFlag {
  bool flag;
  VecX spectrum;
};

/// Positive definiteness of HU restricted to D, with spectral tolerance
/// 1e-10 * |HU|.
SpectrumFlag strong_nondegeneracy(const CentralConfiguration& cc);

/// Eigenvalues of the sphere-restricted second derivative of U on D; the
/// flag asks them all to exceed U(a). Requires |config| = 1.
SpectrumFlag strong_minimizer(const CentralConfiguration& cc);

/// mu = (sum m)^2 / (sum of pairwise products) and
/// lambda_ratio = (pairwise sum) / (sum of squares) for three masses.
struct GascheauParams {
  double mu;
  double lambda_ratio;
};
GascheauParams gascheau(const VecX& masses);

/// The triangle (m2 m3, m1 m3 w^2, m1 m2 w), w = exp(2 pi i/3): centered,
/// and orthogonal to every positively oriented equilateral triangle in the
/// Hermitian mass product. Flat planar coordinates.
VecX orthogonal_triangle(const VecX& masses);

/// The bilinear form of A = 12 sqrt(3) HU at the unit equilateral triangle,
/// restricted to the deformation plane D in the basis {eta, zeta} spanned
/// by twice the orthogonal triangle and its quarter turn.
struct DeformationForm {
  double a, b, c, d;
  double trace;
  double det;
};

/// Numerically assembled form; cross-checked against the closed forms to
/// 1e-10 (relative to the largest entry) before returning.
DeformationForm deformation_form(const VecX& masses);

/// Closed forms: with nu = m1 m2 m3 (m1 m2 + m1 m3 + m2 m3),
///   a = nu (-16 m1 + 20 m2 + 20 m3),   d = nu (32 m1 - 4 m2 - 4 m3),
///   b = c = 12 sqrt(3) nu (m3 - m2).
DeformationForm deformation_form_closed(const VecX& masses);

/// The equilateral triangle (1, w, w^2) centered for the given planar
/// system; a central configuration for any masses.
VecX equilateral_configuration(const MassSystem& sys);

/// Symmetric collinear seed (-1,0),(0,0),(1,0), centered for the masses.
VecX collinear_seed(const MassSystem& sys);

}  // namespace nbody
