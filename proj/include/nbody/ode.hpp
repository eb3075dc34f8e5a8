#pragma once

#include "nbody/types.hpp"

#include <functional>
#include <vector>

namespace nbody {

/// Adaptive step-size control and termination limits for the integrator.
struct OdeOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0: choose automatically
  double max_step = 0.0;      // 0: unlimited
  long max_steps = 5'000'000;
};

/// Raised when the step size underflows (typically on close approach to a
/// singularity of the right-hand side). Carries the last valid state.
struct StepUnderflow : Error {
  StepUnderflow(double t_, VecX y_)
      : Error("step size underflow at t = " + std::to_string(t_)),
        t(t_),
        last_state(std::move(y_)) {}
  double t;
  VecX last_state;
};

/// Explicit embedded Runge-Kutta pair of order 8(5,3) with 12 stages and a
/// continuous extension evaluated over the last accepted step. Forward
/// integration only.
class Dop853 {
 public:
  using Rhs = std::function<void(double, const VecX&, VecX&)>;

  Dop853(Rhs rhs, double t0, VecX y0, OdeOptions opt = {});

  /// One accepted step, not crossing t_limit. Returns the step taken.
  double step(double t_limit);

  /// Steps until exactly t_end (final step clamped, no interpolation there).
  void advance_to(double t_end);

  double time() const { return t_; }
  double prev_time() const { return t_prev_; }
  const VecX& state() const { return y_; }

  /// Dense output over the last accepted step [prev_time, time].
  VecX sample(double t) const;

  long steps_accepted = 0;
  long steps_rejected = 0;
  long rhs_evals = 0;

 private:
  struct StepRejected {};
  void attempt_step(double h, bool clamped, double t_limit);
  double error_norm(double h, const VecX& ynew) const;
  double initial_step_size(double t_limit) const;

  Rhs rhs_;
  OdeOptions opt_;
  double t_, t_prev_;
  double h_next_ = 0.0;
  VecX y_;
  VecX k_[13];  // stage derivatives; k_[12] is f at the accepted endpoint
  VecX stage_, ynew_, bsum_;
  MatX cont_;  // 8 columns of dense-output coefficients
  bool have_cont_ = false;
};

/// Integrate y' = f(t, y) from (times.front(), y0) and return the states at
/// every requested time. Times must be non-decreasing; interior samples use
/// the continuous extension, the last one is hit exactly.
std::vector<VecX> integrate_sampled(const Dop853::Rhs& rhs,
                                    const std::vector<double>& times,
                                    const VecX& y0, OdeOptions opt = {});

}  // namespace nbody
