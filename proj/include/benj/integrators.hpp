#pragma once

#include <utility>

#include "benj/dynamics.hpp"
#include "benj/solvers.hpp"

namespace benj::integrators {

/// Two-stage explicit step u + (dt/2)(g(u) + g(u + dt g(u))).
Field heun_step(const Field& u, const Params& p, double dt);

/// Classical four-stage Runge-Kutta on the reduced vector field.
Field rk4_step(const Field& u, const Params& p, double dt);

/// Seed the two-level leapfrog with one Heun step: returns (u0, u1).
std::pair<Field, Field> euler_box_start(const Field& u0, const Params& p, double dt);

/// Reduced Euler box step: u_next = u_prev + 2 dt g(u_curr). The centered
/// time difference conserves sum(u) across alternate levels exactly.
Field euler_box_step(const Field& u_prev, const Field& u_curr, const Params& p, double dt);

/// Nodewise residual of the Preissmann box system
///   M dt+ z_{n+1/2}^i + K dx+ z_n^{i+1/2} - dS/dz(z_{n+1/2}^{i+1/2})
/// stacked [u-rows, phi-rows, w-rows, v-rows] (4N entries). The potential
/// constraint row subtracts the mean of the averaged u: on the periodic
/// domain the row sum of dx+ phi vanishes identically, so the constraint can
/// only hold for the mean-free part (equivalently, phi carries a linear
/// mass term that is kept out of the periodic unknown). Odd N required.
std::vector<double> preissmann_residual(const StateZ& z_next, const StateZ& z_curr,
                                        const Params& p, double dt);

struct PreissmannResult {
  StateZ z_next;
  int newton_iterations = 0;
};

/// One implicit box step, Newton from z_curr. Holds the constant dense
/// blocks (including alpha L A_x) so long runs pay the assembly once.
class PreissmannStepper {
 public:
  PreissmannStepper(const Grid& grid, const Params& p, double dt,
                    solvers::NewtonSettings settings = {});
  PreissmannResult step(const StateZ& z_curr) const;

  /// The Newton system: the raw residual with one redundant constraint row
  /// exchanged for the zero-mean gauge on w (the gauge shift
  /// (phi, w) -> (phi - dt c, w + c) is invisible to the raw residual), and,
  /// when beta = 0, the inert v rows exchanged for v = delta_x u.
  std::vector<double> pinned_residual(const std::vector<double>& z_next_flat,
                                      const StateZ& z_curr) const;
  solvers::Matrix pinned_jacobian(const std::vector<double>& z_next_flat,
                                  const StateZ& z_curr) const;

 private:
  Grid grid_;
  Params p_;
  double dt_;
  solvers::NewtonSettings settings_;
  std::vector<double> l_dense_;     // L as a dense circulant
  std::vector<double> l_ax_dense_;  // L * A_x, the dense Jacobian block
};

PreissmannResult preissmann_step(const StateZ& z_curr, const Params& p, double dt,
                                 const solvers::NewtonSettings& settings = {});

/// Thomee-Vasudeva Murthy step for the Benjamin-Ono form (even N):
///   dt+ u + f(u^{i+1/2}) - H dx+ dx- u^{i+1/2} = 0,
///   f(u)_n = (u_{n+1}+u_n+u_{n-1})(u_{n+1}-u_{n-1}) / (6 dx).
class TvmStepper {
 public:
  TvmStepper(const Grid& grid, double dt, solvers::NewtonSettings settings = {});
  /// prev_hint, when given, turns the Newton guess into the linear predictor
  /// 2 u - u_prev; that usually saves one factorization per step.
  Field step(const Field& u, const Field* prev_hint = nullptr) const;
  std::pair<Field, int> step_with_count(const Field& u, const Field* prev_hint = nullptr) const;

 private:
  Grid grid_;
  double dt_;
  solvers::NewtonSettings settings_;
  std::vector<double> hd2_;  // dense H * dx+ dx-
};

Field tvm_step(const Field& u, double dt, const solvers::NewtonSettings& settings = {});

enum class SchemeKind { euler_box, preissmann, tvm, heun, rk4 };

/// Time-marching state: one scheme, its current level, whatever history the
/// scheme needs (previous level for the leapfrog and the tvm predictor, the
/// extended state for the box scheme), and the clock. Construction performs
/// the scheme's bootstrap, so step_count() may already be 1.
class StepperState {
 public:
  StepperState(SchemeKind scheme, const Field& u0, const Params& p, double dt,
               solvers::NewtonSettings newton = {});

  void advance();
  const Field& current() const { return u_; }
  double time() const { return static_cast<double>(step_) * dt_; }
  long step_count() const { return step_; }
  SchemeKind scheme() const { return scheme_; }
  int last_newton_iterations() const { return last_newton_iterations_; }

 private:
  SchemeKind scheme_;
  Params p_;
  double dt_;
  long step_ = 0;
  Field u_;
  Field u_prev_;
  bool have_prev_ = false;
  StateZ z_;
  std::optional<PreissmannStepper> preissmann_;
  std::optional<TvmStepper> tvm_;
  int last_newton_iterations_ = 0;
};

}  // namespace benj::integrators
