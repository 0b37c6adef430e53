#include "ssti/rk4.hpp"

#include "ssti/stepper.hpp"

#include <cmath>

namespace ssti {

Trajectory rk4_reference(const SecondOrderSystem& sys, const State& s0, double dt,
                         double t_end, int store_every) {
    if (!(dt > 0.0)) throw Error("rk4_reference: dt must be positive");
    if (store_every < 1) throw Error("rk4_reference: store_every must be >= 1");
    const auto n_steps =
        static_cast<std::size_t>(std::llround((t_end - s0.t) / dt));

    Trajectory traj;
    traj.dt = dt * store_every;
    traj.states.reserve(n_steps / static_cast<std::size_t>(store_every) + 2);
    traj.states.push_back(initial_state(sys, s0.u, s0.v, s0.t));

    const int n = sys.dim();
    VectorXd u = s0.u, v = s0.v;
    VectorXd k1(n), k2(n), k3(n), k4(n);   // accelerations
    VectorXd f(n), ut(n), vt(n);

    auto accel = [&](const VectorXd& uu, const VectorXd& vv, double t, VectorXd& out) {
        sys.force(uu, vv, t, f);
        out = sys.mass().solve(f);
    };

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = s0.t + static_cast<double>(i) * dt;
        accel(u, v, t, k1);
        ut = u + 0.5 * dt * v;
        vt = v + 0.5 * dt * k1;
        accel(ut, vt, t + 0.5 * dt, k2);
        ut = u + 0.5 * dt * v + 0.25 * dt * dt * k1;
        vt = v + 0.5 * dt * k2;
        accel(ut, vt, t + 0.5 * dt, k3);
        ut = u + dt * v + 0.5 * dt * dt * k2;
        vt = v + dt * k3;
        accel(ut, vt, t + dt, k4);

        u += dt * v + dt * dt / 6.0 * (k1 + k2 + k3);
        v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if ((i + 1) % static_cast<std::size_t>(store_every) == 0 ||
            i + 1 == n_steps) {
            State s;
            s.t = s0.t + static_cast<double>(i + 1) * dt;
            s.u = u;
            s.v = v;
            s.a = initial_acceleration(sys, u, v, s.t);
            traj.states.push_back(std::move(s));
        }
    }
    return traj;
}

}  // namespace ssti
