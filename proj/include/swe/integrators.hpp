#pragma once

#include <memory>
#include <vector>

#include "swe/shallow_water.hpp"

namespace swe {

enum class Integrator { poisson, picard };

struct NewtonConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_iters = 30;
};

struct StepConfig {
  double dt = 0.01;
  Integrator integrator = Integrator::poisson;
  NewtonConfig newton;
  int picard_iters = 4;
  bool supg = false;
  double tau = 0.0;    // upwinding timescale; tau = 0 disables the extra terms
  double h_ref = 1.0;  // reference depth in the semi-implicit linear operator
};

struct StepResult {
  State state;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
};

// Chord average of the mass flux uD between two states, at quadrature points:
// u1 D1 / 3 + u0 D1 / 6 + u1 D0 / 6 + u0 D0 / 3.
VectorQuad average_flux(const Discretization& d, const Field& u0, const Field& u1,
                        const Field& d0, const Field& d1);

// Chord average of the depth functional derivative |u|^2/2 + gD:
// (|u0|^2 + u0.u1 + |u1|^2)/6 + g (D0 + D1)/2.
ScalarQuad average_kinetic(const Discretization& d, const Field& u0, const Field& u1,
                           const Field& d0, const Field& d1, double g);

// Upwind-shifted potential vorticity at quadrature points:
// q* = qbar - tau ((q1 - q0)/dt + F . grad qbar / Dbar), qbar and Dbar midpoints.
ScalarQuad supg_q_star(const Discretization& d, const Field& q0, const Field& q1,
                       const Field& d0, const Field& d1, const Field& flux,
                       double dt, double tau);

// One implicit step of the coupled (u, D, F, q) system. The energy-exact
// path solves it with Newton; the semi-implicit path runs a fixed number of
// corrections through a constant-coefficient rotating gravity-wave operator.
class Stepper {
 public:
  Stepper(const ShallowWater& sw, StepConfig cfg);

  const StepConfig& config() const { return cfg_; }

  StepResult step(const State& s) const;
  StepResult poisson_step(const State& s) const;
  StepResult picard_step(const State& s) const;

  // stacked unknown vector [u1; D1; F; q1] of the implicit system
  Vector pack(const Field& u1, const Field& d1, const Field& flux, const Field& q1) const;
  Vector residual(const State& s0, const Field& q0, const Vector& x) const;
  SpMat jacobian(const State& s0, const Field& q0, const Vector& x) const;
  Eigen::MatrixXd fd_jacobian(const State& s0, const Field& q0, const Vector& x) const;

  int system_size() const;

 private:
  struct Unknowns {
    Field u, D, F, q;
  };
  Unknowns unpack(const Vector& x) const;
  bool use_supg() const { return cfg_.supg && cfg_.tau > 0.0; }
  ScalarQuad q_star(const Field& q0, const Field& q1, const Field& d0, const Field& d1,
                    const Field& flux) const;
  Field solve_q_linear(const State& s0, const Field& q0, const Field& u1, const Field& d1,
                       const Field& flux) const;
  State finish(const State& s0, const Field& u1, const Field& d1, const Field& q1) const;

  const ShallowWater* sw_ = nullptr;
  StepConfig cfg_;
  std::shared_ptr<Factorized> wave_op_;  // factorized semi-implicit block operator
};

struct RunRecord {
  int step = 0;
  double time = 0;
  ConservedSet conserved;
  int iterations = 0;
  double residual = 0.0;
};

using Observer = std::function<void(const State&, int step)>;

// Repeated stepping with per-step conserved diagnostics; the record at
// index 0 is the initial state. Throws with the failing step index.
std::vector<RunRecord> run(const ShallowWater& sw, const Stepper& stepper, State state,
                           int n_steps, const Observer& observer = {});

}  // namespace swe
