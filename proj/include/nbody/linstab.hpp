#pragma once

#include "nbody/central.hpp"
#include "nbody/orbits.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nbody {

/// Time-dependent symmetric matrix source for a second-order linear system
/// cdd = B(t) c.
using BlockMatrixFn = std::function<MatX(double)>;

/// Matrix of HU along a homographic motion restricted to a fixed invariant
/// block, in the block's mass-orthonormal basis. Evaluated analytically
/// from the closed-form planar orbit at every requested time.
BlockMatrixFn block_matrix_source(const HomographicMotion& motion,
                                  const Subspace& block);

struct JacobiSample {
  double t;
  VecX J;
  VecX Jdot;
};

/// Integrate the variational equation Jdd = HU_{x(t)}(J) along the motion,
/// restricted to the given block. J0 and Jdot0 are full configuration
/// vectors and must lie in the block's span (projection residual 1e-10).
std::vector<JacobiSample> jacobi_integrate(const HomographicMotion& motion,
                                           const Subspace& block,
                                           const VecX& J0, const VecX& Jdot0,
                                           const std::vector<double>& times,
                                           double tol = 1e-12);

enum class FloquetClass { Hyperbolic, Elliptic, Mixed, Degenerate };

const char* to_string(FloquetClass c);

/// Period map of a linear periodic Hamiltonian block and its spectrum.
struct MonodromyReport {
  MatX matrix;         // 2k x 2k over one period
  CVecX multipliers;   // sorted by (Re, Im)
  VecX margins;        // | |lambda| - 1 | per multiplier
  double min_margin = 0.0;
  FloquetClass classification = FloquetClass::Degenerate;
  int dim_stable = 0;    // multipliers strictly inside the unit circle
  int dim_unstable = 0;  // strictly outside
  int dim_center = 0;    // on the circle within tolerance
  int forced_units = 0;  // structural multipliers at +1 for this block
  double product_error = 0.0;  // |prod lambda - 1|
  double pairing_error = 0.0;  // worst |lambda_i * lambda_j - 1| over pairs
};

/// Fundamental solution of Xd = [[0, I], [B(t), 0]] X over one period,
/// integrated column-block-wise from the identity, then classified.
MonodromyReport monodromy_of(const BlockMatrixFn& B, int block_dim,
                             double period, double tol = 1e-12,
                             double circle_tol = 1e-6, int forced_units = 0);

/// Monodromy of the motion's variational equation on the given block.
/// Structural unit multipliers: 2 for the translation block, 2 for the
/// similarity block (velocity field and energy direction), 0 for D.
MonodromyReport monodromy(const HomographicMotion& motion,
                          const Subspace& block, double tol = 1e-12,
                          double circle_tol = 1e-6);

/// max(|P_perp HU P_V|, |P_V HU P_perp|) / |HU| in the mass metric;
/// vanishes when V is an invariant subspace containing x.
double splitting_verify(const MassSystem& sys, const Potential& U,
                        const VecX& x, const Subspace& V);

struct ComparisonReport {
  double min_eig_B;     // smallest eigenvalue of B(t) over the sample grid
  double worst_slack;   // min over trials/samples of |J(t)| - bound(t)
  bool pass;
};

/// Check |J(t)| >= |Jdot(0)| sinh(sqrt(alpha) t)/sqrt(alpha) - 1e-8 for
/// solutions of Jdd = B(t) J with J(0) = 0 and random unit initial
/// velocities. Throws HypothesisError when min eig B(t) < alpha on the
/// sample grid (the bound does not apply; the check is skipped, not failed).
ComparisonReport comparison_check(const BlockMatrixFn& B, int dim,
                                  double alpha, double t_end, int trials,
                                  double tol = 1e-12,
                                  unsigned long seed = 20140507);

struct MotionClassification {
  MonodromyReport delta_block;
  MonodromyReport k_block;
  MonodromyReport d_block;
  std::string verdict;  // "linearly unstable" | "spectrally stable" |
                        // "degenerate - refine"
};

/// Per-block monodromy over one period plus the overall verdict: unstable
/// when the deformation block is hyperbolic or any multiplier leaves the
/// unit circle; near-unit deformation multipliers beyond the forced ones
/// flag the verdict as degenerate rather than stable.
MotionClassification classify_motion(const HomographicMotion& motion,
                                     double tol = 1e-12,
                                     double circle_tol = 1e-6);

}  // namespace nbody
