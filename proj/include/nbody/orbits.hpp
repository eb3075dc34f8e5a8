#pragma once

#include "nbody/ode.hpp"
#include "nbody/potential.hpp"

#include <vector>

namespace nbody {

/// Elliptic solution of the planar central-force law
/// zdd = -mu z |z|^{-3}, parameterized by eccentric anomaly with the
/// perihelion at t = 0 on the positive real axis.
struct KeplerOrbit {
  double gravitational_parameter;  // mu > 0
  double eccentricity;             // in [0, 1)
  double semi_major_axis;          // > 0

  double period() const {
    return 2.0 * M_PI * std::pow(semi_major_axis, 1.5) /
           std::sqrt(gravitational_parameter);
  }
  double mean_motion() const { return 2.0 * M_PI / period(); }
  double max_radius() const { return semi_major_axis * (1.0 + eccentricity); }
  double min_radius() const { return semi_major_axis * (1.0 - eccentricity); }
};

KeplerOrbit make_orbit(double gravitational_parameter, double eccentricity,
                       double semi_major_axis = 1.0);

/// Solve E - e sin E = M by damped Newton iteration to |dE| <= 1e-14.
double solve_eccentric_anomaly(double eccentricity, double mean_anomaly);

Complex kepler_position(const KeplerOrbit& orbit, double t);

struct PlanarState {
  Complex z;
  Complex zdot;
};
PlanarState kepler_state(const KeplerOrbit& orbit, double t);

/// Motion x(t) = z(t) x0 through a planar central configuration of unit
/// mass norm, with z an elliptic solution of the central-force problem for
/// mu = U(x0). Gravitational case only.
struct HomographicMotion {
  MassSystem sys;
  Potential pot;
  VecX x0;  // centered, unit mass norm, central
  KeplerOrbit orbit;

  double period() const { return orbit.period(); }
};

HomographicMotion make_homographic(const MassSystem& sys, const Potential& U,
                                   const VecX& x0, double eccentricity,
                                   double semi_major_axis = 1.0);

/// Position and velocity of the motion at time t.
std::pair<VecX, VecX> homographic_state(const HomographicMotion& motion,
                                        double t);

struct Trajectory {
  std::vector<double> times;
  std::vector<VecX> positions;
  std::vector<VecX> velocities;
};

/// Integration drove two bodies toward collision; carries the last state
/// the integrator accepted.
struct CollisionApproach : CollisionError {
  CollisionApproach(double t_, VecX x_, VecX v_)
      : CollisionError("close approach to collision near t = " +
                       std::to_string(t_)),
        t(t_),
        x(std::move(x_)),
        v(std::move(v_)) {}
  double t;
  VecX x;
  VecX v;
};

/// Direct integration of xdd = grad U(x) from (x0, v0) at times.front(),
/// sampled at the given times. Local error controlled to tol; a close
/// approach to collision surfaces as StepUnderflow carrying the last state.
Trajectory integrate_newton(const MassSystem& sys, const Potential& U,
                            const VecX& x0, const VecX& v0,
                            const std::vector<double>& times,
                            double tol = 1e-12);

/// Total energy |v|^2/2 - U(x) (mass norm).
double total_energy(const MassSystem& sys, const Potential& U, const VecX& x,
                    const VecX& v);

}  // namespace nbody
