#include "ssti/stepper.hpp"

#include <cmath>
#include <sstream>

namespace ssti {

// ---------------------------------------------------------------------------
// MassMatrix

MassMatrix MassMatrix::Identity(int dim) {
    return Diagonal(VectorXd::Ones(dim));
}

MassMatrix MassMatrix::Diagonal(VectorXd d) {
    MassMatrix m;
    m.dim_ = static_cast<int>(d.size());
    m.diagonal_ = true;
    for (int i = 0; i < d.size(); ++i)
        if (!(d[i] > 0.0))
            throw SingularMatrixError("mass matrix: nonpositive diagonal entry");
    m.dinv_ = d.cwiseInverse();
    m.d_ = std::move(d);
    return m;
}

MassMatrix MassMatrix::Dense(MatrixXd mat) {
    MassMatrix m;
    m.dim_ = static_cast<int>(mat.rows());
    m.diagonal_ = false;
    m.m_ = std::move(mat);
    m.ldlt_.compute(m.m_);
    if (m.ldlt_.info() != Eigen::Success || !m.ldlt_.isPositive())
        throw SingularMatrixError("mass matrix: not positive definite");
    return m;
}

VectorXd MassMatrix::apply(const VectorXd& x) const {
    return diagonal_ ? VectorXd(d_.cwiseProduct(x)) : VectorXd(m_ * x);
}

VectorXd MassMatrix::solve(const VectorXd& rhs) const {
    return diagonal_ ? VectorXd(dinv_.cwiseProduct(rhs)) : VectorXd(ldlt_.solve(rhs));
}

MatrixXd MassMatrix::dense() const {
    return diagonal_ ? MatrixXd(d_.asDiagonal()) : m_;
}

const VectorXd& MassMatrix::diag() const { return d_; }

// ---------------------------------------------------------------------------
// SecondOrderSystem

SecondOrderSystem SecondOrderSystem::Nonlinear(MassMatrix M, ForceFn f,
                                               TangentDampingFn tangent) {
    SecondOrderSystem s;
    s.M_ = std::move(M);
    s.force_ = std::move(f);
    s.tangent_ = std::move(tangent);
    return s;
}

SecondOrderSystem SecondOrderSystem::Linear(MassMatrix M, MatrixXd C, MatrixXd K,
                                            LoadFn load) {
    SecondOrderSystem s;
    const int n = M.dim();
    s.M_ = std::move(M);
    auto lp = std::make_shared<LinearParts>(
        LinearParts{std::move(C), std::move(K), std::move(load)});
    if (lp->C.size() == 0) lp->C = MatrixXd::Zero(n, n);
    if (lp->K.size() == 0) lp->K = MatrixXd::Zero(n, n);
    s.linear_ = lp;
    s.force_ = [lp](const VectorXd& u, const VectorXd& v, double t, VectorXd& out) {
        out = -(lp->K * u) - lp->C * v;
        if (lp->load) out += lp->load(t);
    };
    s.tangent_ = [lp](const VectorXd&, const VectorXd&, double, MatrixXd& out) {
        out = lp->C;
    };
    return s;
}

void SecondOrderSystem::force(const VectorXd& u, const VectorXd& v, double t,
                              VectorXd& out) const {
    force_(u, v, t, out);
}

VectorXd SecondOrderSystem::force(const VectorXd& u, const VectorXd& v,
                                  double t) const {
    VectorXd out(dim());
    force_(u, v, t, out);
    return out;
}

void SecondOrderSystem::tangent_damping(const VectorXd& u, const VectorXd& v,
                                        double t, MatrixXd& out) const {
    if (!tangent_) throw Error("system has no tangent damping");
    tangent_(u, v, t, out);
}

SecondOrderSystem sdof_system(double xi, double omega,
                              std::function<double(double)> forcing) {
    MatrixXd C(1, 1), K(1, 1);
    C << 2.0 * xi * omega;
    K << omega * omega;
    LoadFn load = nullptr;
    if (forcing)
        load = [f = std::move(forcing)](double t) {
            VectorXd q(1);
            q << f(t);
            return q;
        };
    return SecondOrderSystem::Linear(MassMatrix::Identity(1), std::move(C),
                                     std::move(K), std::move(load));
}

// ---------------------------------------------------------------------------
// Stepping

VectorXd initial_acceleration(const SecondOrderSystem& sys, const VectorXd& u0,
                              const VectorXd& v0, double t0) {
    return sys.mass().solve(sys.force(u0, v0, t0));
}

State initial_state(const SecondOrderSystem& sys, const VectorXd& u0,
                    const VectorXd& v0, double t0) {
    return State{t0, u0, v0, initial_acceleration(sys, u0, v0, t0)};
}

LinearStepper::LinearStepper(const ButcherTable& tbl, const SecondOrderSystem& sys,
                             double dt)
    : tbl_(tbl), sys_(sys), dt_(dt) {
    if (!sys.is_linear()) throw Error("LinearStepper: system lacks (M, C, K, q)");
    if (!(dt > 0.0)) throw Error("LinearStepper: dt must be positive");
    const auto& lp = sys.linear_parts();
    has_C_ = (lp.C.array() != 0.0).any();
    has_K_ = (lp.K.array() != 0.0).any();
    const double a2 = tbl.a(2), a4 = tbl.a(4);
    const bool mods = (a4 != 0.0 && has_C_) || (a2 != 0.0 && has_K_);
    if (sys.mass().diagonal() && !mods) {
        diagonal_ = true;
        meff_inv_diag_ = sys.mass().diag().cwiseInverse();
    } else {
        diagonal_ = false;
        MatrixXd meff = sys.mass().dense();
        if (a4 != 0.0) meff += a4 * dt * lp.C;
        if (a2 != 0.0) meff += a2 * dt * dt * lp.K;
        meff_.compute(meff);
        if (meff_.info() != Eigen::Success)
            throw SingularMatrixError("effective mass factorization failed");
        const auto& d = meff_.vectorD();
        for (int i = 0; i < d.size(); ++i)
            if (std::abs(d[i]) < 1e-300)
                throw SingularMatrixError("effective mass is singular");
    }
}

State LinearStepper::step(const State& s) const {
    const auto& lp = sys_.linear_parts();
    const double dt = dt_;
    const double ts = s.t + tbl_.p * dt;

    // Stage predictors with the a2/a4 terms moved into the effective mass.
    VectorXd us = s.u + tbl_.p * dt * s.v + dt * dt * tbl_.a(1) * s.a;
    VectorXd vs = s.v + dt * tbl_.a(3) * s.a;

    VectorXd rhs = VectorXd::Zero(sys_.dim());
    if (lp.load) rhs = lp.load(ts);
    if (has_C_) rhs.noalias() -= lp.C * vs;
    if (has_K_) rhs.noalias() -= lp.K * us;

    VectorXd as = diagonal_ ? VectorXd(meff_inv_diag_.cwiseProduct(rhs))
                            : VectorXd(meff_.solve(rhs));

    State out;
    out.t = s.t + dt;
    out.u = s.u + dt * s.v + dt * dt * (tbl_.a(5) * s.a + tbl_.a(6) * as);
    out.v = s.v + dt * (tbl_.a(7) * s.a + tbl_.a(8) * as);
    out.a = tbl_.a(9) * s.a + tbl_.a(10) * as;
    return out;
}

State step_linear(const ButcherTable& tbl, const SecondOrderSystem& sys,
                  const State& s, double dt) {
    return LinearStepper(tbl, sys, dt).step(s);
}

StepResult step_nonlinear(const ButcherTable& tbl, const SecondOrderSystem& sys,
                          const State& s, double dt, const NewtonOptions& opts) {
    if (tbl.a(2) != 0.0)
        throw Error("step_nonlinear: requires a2 == 0 (explicit family)");
    if (!(opts.eps > 0.0) || opts.max_iter < 1)
        throw Error("step_nonlinear: invalid Newton options");

    const double ts = s.t + tbl.p * dt;
    const VectorXd us = s.u + tbl.p * dt * s.v + dt * dt * tbl.a(1) * s.a;

    VectorXd as(sys.dim());
    int iters = 1;
    VectorXd f(sys.dim());
    std::vector<double> norms;

    if (tbl.a(4) == 0.0 || !sys.has_tangent_damping()) {
        // No velocity feedback into the solve: a single mass solve is exact.
        const VectorXd vs = s.v + dt * (tbl.a(3) + tbl.a(4)) * s.a;
        sys.force(us, vs, ts, f);
        as = sys.mass().solve(f);
    } else {
        as = s.a;  // predictor
        MatrixXd Ct(sys.dim(), sys.dim());
        VectorXd vs(sys.dim()), da(sys.dim());
        bool converged = false;
        for (int i = 1; i <= opts.max_iter; ++i) {
            iters = i;
            vs = s.v + dt * (tbl.a(3) * s.a + tbl.a(4) * as);
            sys.force(us, vs, ts, f);
            sys.tangent_damping(us, vs, ts, Ct);
            MatrixXd meff = sys.mass().dense() + tbl.a(4) * dt * Ct;
            Eigen::PartialPivLU<MatrixXd> lu(meff);
            da = lu.solve(f - sys.mass().apply(as));
            norms.push_back(da.lpNorm<Eigen::Infinity>());
            if (norms.back() < opts.eps) {
                converged = true;
                break;
            }
            as += da;
        }
        if (!converged) {
            std::ostringstream os;
            os << "Newton iteration on " << tbl.name << " stage did not reach "
               << opts.eps << " in " << opts.max_iter << " iterations";
            throw NonConvergenceError(os.str(), iters);
        }
    }

    State out;
    out.t = s.t + dt;
    out.u = s.u + dt * s.v + dt * dt * (tbl.a(5) * s.a + tbl.a(6) * as);
    out.v = s.v + dt * (tbl.a(7) * s.a + tbl.a(8) * as);
    out.a = tbl.a(9) * s.a + tbl.a(10) * as;
    return {std::move(out), iters, std::move(norms)};
}

Trajectory integrate(const ButcherTable& tbl, const SecondOrderSystem& sys,
                     const State& s0, double dt, double t_end,
                     const NewtonOptions& opts) {
    if (!(dt > 0.0)) throw Error("integrate: dt must be positive");
    if (!(t_end > s0.t)) throw Error("integrate: t_end must exceed the start time");

    const auto n_steps =
        static_cast<std::size_t>(std::llround((t_end - s0.t) / dt));
    Trajectory traj;
    traj.dt = dt;
    traj.states.reserve(n_steps + 1);
    traj.states.push_back(s0);

    if (sys.is_linear()) {
        LinearStepper stepper(tbl, sys, dt);
        for (std::size_t i = 0; i < n_steps; ++i) {
            traj.states.push_back(stepper.step(traj.states.back()));
            traj.states.back().t = s0.t + static_cast<double>(i + 1) * dt;
        }
    } else {
        for (std::size_t i = 0; i < n_steps; ++i) {
            try {
                auto r = step_nonlinear(tbl, sys, traj.states.back(), dt, opts);
                traj.states.push_back(std::move(r.state));
                traj.states.back().t = s0.t + static_cast<double>(i + 1) * dt;
            } catch (const NonConvergenceError& e) {
                throw IntegrationError(
                    std::string(e.what()) + " at step " + std::to_string(i), i);
            }
        }
    }
    return traj;
}

}  // namespace ssti
