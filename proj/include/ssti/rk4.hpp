#pragma once

#include "ssti/system.hpp"

namespace ssti {

/// Classical four-stage Runge-Kutta on the first-order form (u, v), used as
/// the reference/oracle integrator. Acceleration is recovered from the
/// balance equation at stored nodes only. store_every > 1 subsamples the
/// stored trajectory (the reported dt is store_every * dt).
Trajectory rk4_reference(const SecondOrderSystem& sys, const State& s0, double dt,
                         double t_end, int store_every = 1);

}  // namespace ssti
