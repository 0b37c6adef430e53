#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ssti {

/// Claimed convergence orders for (displacement, velocity, acceleration).
/// acc < 0 marks a scheme that does not expose an acceleration output.
struct AccuracyOrders {
    int disp = 1;
    int vel = 1;
    int acc = 1;
};

/// Parameter set of a self-starting single-solve scheme: the stage offset p
/// and the ten update weights alpha1..alpha10.
///
/// Stage:   u_s = u_n + p*dt*v_n + dt^2*(a1*acc_n + a2*acc_s)
///          v_s = v_n + dt*(a3*acc_n + a4*acc_s)
/// Update:  u_{n+1} = u_n + dt*v_n + dt^2*(a5*acc_n + a6*acc_s)
///          v_{n+1} = v_n + dt*(a7*acc_n + a8*acc_s)
///          acc_{n+1} = a9*acc_n + a10*acc_s
struct ButcherTable {
    std::string name;
    double p = 0.0;
    std::array<double, 10> alpha{};  // alpha[0] == alpha1
    std::optional<double> rho_b;
    std::optional<double> rho_s;

    bool accel_output = true;  // false: acceleration column is not a scheme output
    AccuracyOrders orders_undamped;
    AccuracyOrders orders_damped;

    double a(int i) const { return alpha[static_cast<std::size_t>(i - 1)]; }

    // Effective mass carries neither damping nor stiffness terms.
    bool fully_explicit() const { return a(2) == 0.0 && a(4) == 0.0; }
    // Stage acceleration feeds the stage velocity only.
    bool velocity_implicit() const { return a(2) == 0.0 && a(4) != 0.0; }

    bool claims_identical_second_order() const;
};

/// Residuals of the six identical-second-order identities:
///   a3+a4-p, a5+a6-1/2, a7+a8-1, a9+a10-1, a8-1/(2p), a10-1/p.
std::array<double, 6> identical_second_order_residuals(const ButcherTable& t);

/// Residuals of the four displacement/velocity second-order conditions.
/// Index 1 is the damping-coupled condition; schemes that are second order
/// only without physical damping fail that one alone.
std::array<double, 4> disp_vel_second_order_residuals(const ButcherTable& t);

/// Look up a registered scheme. Families parameterized by dissipation radii
/// accept rho_b (and rho_s where applicable); omitted parameters default to
/// the zero-dissipation member (rho_b = 1, rho_s = 0).
/// Throws std::invalid_argument for unknown names or out-of-range parameters.
ButcherTable table(std::string_view name,
                   std::optional<double> rho_b = std::nullopt,
                   std::optional<double> rho_s = std::nullopt);

/// The two parameter-free third-order schemes (which = 1 or 2).
/// 1: fully explicit; 2: implicit treatment of velocity.
ButcherTable new_algorithm(int which);

/// Most-dissipative member of a family (rho_b at the lower end of its range).
ButcherTable most_dissipative(std::string_view name);

/// Registered scheme identifiers, in registry order.
std::vector<std::string> registry_names();

}  // namespace ssti
