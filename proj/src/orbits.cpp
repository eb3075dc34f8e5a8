#include "nbody/orbits.hpp"

#include "nbody/central.hpp"

#include <cmath>

namespace nbody {

KeplerOrbit make_orbit(double gravitational_parameter, double eccentricity,
                       double semi_major_axis) {
  if (gravitational_parameter <= 0.0)
    throw InvalidInput("orbit needs a positive gravitational parameter");
  if (!(eccentricity >= 0.0 && eccentricity < 1.0))
    throw InvalidInput("only elliptic orbits are supported: e in [0,1)");
  if (semi_major_axis <= 0.0)
    throw InvalidInput("semi-major axis must be positive");
  return {gravitational_parameter, eccentricity, semi_major_axis};
}

double solve_eccentric_anomaly(double e, double M) {
  if (!(e >= 0.0 && e < 1.0))
    throw InvalidInput("eccentric anomaly needs e in [0,1)");
  // reduce to [-pi, pi]
  double m = std::remainder(M, 2.0 * M_PI);
  double E = m + 0.85 * e * (std::sin(m) >= 0.0 ? 1.0 : -1.0);
  if (e < 0.1) E = m;
  for (int it = 0; it < 100; ++it) {
    const double f = E - e * std::sin(E) - m;
    const double fp = 1.0 - e * std::cos(E);
    const double dE = f / fp;
    E -= dE;
    if (std::abs(dE) <= 1e-14) return E + (M - m);
  }
  throw SearchFailure("Kepler equation did not converge");
}

Complex kepler_position(const KeplerOrbit& orbit, double t) {
  return kepler_state(orbit, t).z;
}

PlanarState kepler_state(const KeplerOrbit& orbit, double t) {
  const double e = orbit.eccentricity;
  const double a = orbit.semi_major_axis;
  const double n = orbit.mean_motion();
  const double E = solve_eccentric_anomaly(e, n * t);
  const double cE = std::cos(E), sE = std::sin(E);
  const double b_over_a = std::sqrt(1.0 - e * e);
  PlanarState s;
  s.z = Complex(a * (cE - e), a * b_over_a * sE);
  const double Edot = n / (1.0 - e * cE);
  s.zdot = Complex(-a * sE * Edot, a * b_over_a * cE * Edot);
  return s;
}

HomographicMotion make_homographic(const MassSystem& sys, const Potential& U,
                                   const VecX& x0, double eccentricity,
                                   double semi_major_axis) {
  if (sys.dim() != 2)
    throw InvalidInput("homographic motions are planar");
  if (U.kappa != 1.0)
    throw InvalidInput(
        "elliptic homographic motions need the inverse-square force");
  sys.check_config(x0);
  if (std::abs(mass_norm(sys, x0) - 1.0) > 1e-10)
    throw InvalidInput("homographic base configuration must have unit norm");
  const auto [residual, lambda] = central_residual(sys, U, x0);
  if (residual > 1e-8)
    throw InvalidInput("homographic base configuration is not central");
  const double mu = -lambda;  // = kappa U / I > 0; equals U(x0) here
  return {sys, U, x0, make_orbit(mu, eccentricity, semi_major_axis)};
}

std::pair<VecX, VecX> homographic_state(const HomographicMotion& motion,
                                        double t) {
  const PlanarState s = kepler_state(motion.orbit, t);
  return {complex_scale(motion.sys, s.z, motion.x0),
          complex_scale(motion.sys, s.zdot, motion.x0)};
}

Trajectory integrate_newton(const MassSystem& sys, const Potential& U,
                            const VecX& x0, const VecX& v0,
                            const std::vector<double>& times, double tol) {
  sys.check_config(x0);
  sys.check_config(v0);
  check_collision(sys, x0);
  const int dof = sys.dof();
  VecX y0(2 * dof);
  y0 << x0, v0;
  auto rhs = [&sys, &U, dof](double, const VecX& y, VecX& dy) {
    dy.head(dof) = y.tail(dof);
    dy.tail(dof) = gradient(sys, U, y.head(dof));
  };
  OdeOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol;
  std::vector<VecX> states;
  try {
    states = integrate_sampled(rhs, times, y0, opt);
  } catch (const StepUnderflow& e) {
    throw CollisionApproach(e.t, e.last_state.head(dof),
                            e.last_state.tail(dof));
  }
  Trajectory out;
  out.times = times;
  out.positions.reserve(states.size());
  out.velocities.reserve(states.size());
  for (const VecX& y : states) {
    out.positions.push_back(y.head(dof));
    out.velocities.push_back(y.tail(dof));
  }
  return out;
}

double total_energy(const MassSystem& sys, const Potential& U, const VecX& x,
                    const VecX& v) {
  return 0.5 * mass_inner(sys, v, v) - value(sys, U, x);
}

}  // namespace nbody
