#pragma once

#include "ssti/butcher.hpp"
#include "ssti/system.hpp"

namespace ssti {

/// a0 from the balance equation M a0 = f(v0, u0, t0).
VectorXd initial_acceleration(const SecondOrderSystem& sys, const VectorXd& u0,
                              const VectorXd& v0, double t0);

/// Full starting state at t0.
State initial_state(const SecondOrderSystem& sys, const VectorXd& u0,
                    const VectorXd& v0, double t0);

struct NewtonOptions {
    double eps = 1e-10;  // max-norm tolerance on the stage-acceleration update
    int max_iter = 30;
};

struct StepResult {
    State state;
    int iterations = 1;
    std::vector<double> delta_norms;  // per-iteration max-norm of the update
};

/// One step of a linear system. The effective mass
/// Mt = M + a4*dt*C + a2*dt^2*K is factorized at construction; reuse the
/// stepper when marching with a fixed step.
class LinearStepper {
  public:
    LinearStepper(const ButcherTable& tbl, const SecondOrderSystem& sys, double dt);

    State step(const State& s) const;

  private:
    const ButcherTable tbl_;
    const SecondOrderSystem& sys_;
    double dt_;
    bool diagonal_;
    VectorXd meff_inv_diag_;
    Eigen::LDLT<MatrixXd> meff_;
    bool has_C_ = false, has_K_ = false;
};

State step_linear(const ButcherTable& tbl, const SecondOrderSystem& sys,
                  const State& s, double dt);

/// One step of the nonlinear iterative procedure. Requires a2 == 0.
/// Tables with a4 == 0, or systems without velocity feedback, resolve the
/// stage in a single solve with no tangent assembly.
StepResult step_nonlinear(const ButcherTable& tbl, const SecondOrderSystem& sys,
                          const State& s, double dt,
                          const NewtonOptions& opts = {});

/// March with a uniform step from s0 to (approximately) t_end; dispatches to
/// the linear path when the system carries explicit (M, C, K, q).
Trajectory integrate(const ButcherTable& tbl, const SecondOrderSystem& sys,
                     const State& s0, double dt, double t_end,
                     const NewtonOptions& opts = {});

}  // namespace ssti
