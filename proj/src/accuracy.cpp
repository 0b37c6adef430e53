#include "ssti/accuracy.hpp"

#include "ssti/spectral.hpp"
#include "ssti/stepper.hpp"
#include "ssti/system.hpp"

#include <cmath>
#include <limits>

namespace ssti::accuracy {

namespace {

constexpr double kRoundoffFloor = 1e-12;

// OLS slope of log(err) against log(dt), skipping round-off-floor points.
std::optional<double> loglog_slope(const std::vector<double>& dts,
                                   const std::vector<double>& errs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        if (!(errs[i] > kRoundoffFloor) || !std::isfinite(errs[i])) continue;
        const double x = std::log(dts[i]), y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return std::nullopt;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

double global_error(std::span<const double> numeric, std::span<const double> exact) {
    if (numeric.size() != exact.size() || numeric.empty())
        throw Error("global_error: length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i) {
        const double d = exact[i] - numeric[i];
        num += d * d;
        den += exact[i] * exact[i];
    }
    if (!(den > 0.0)) throw Error("global_error: exact solution has zero norm");
    return std::sqrt(num / den);
}

ConvergenceResult convergence_study(const ButcherTable& tbl,
                                    const problems::SdofCase& problem,
                                    const std::vector<double>& dts) {
    for (std::size_t i = 1; i < dts.size(); ++i)
        if (!(dts[i] < dts[i - 1]))
            throw Error("convergence_study: dts must be strictly decreasing");

    const auto sys = problems::to_system(problem);
    VectorXd u0(1), v0(1);
    u0 << problem.u0;
    v0 << problem.v0;
    const State s0 = initial_state(sys, u0, v0, 0.0);
    const bool with_accel = tbl.accel_output;

    ConvergenceResult res;
    res.dts = dts;
    for (double dt : dts) {
        const auto traj = integrate(tbl, sys, s0, dt, problem.T);
        const std::size_t n = traj.size() - 1;
        std::vector<double> nu(n), xu(n), nv(n), xv(n), na(n), xa(n);
        for (std::size_t i = 1; i <= n; ++i) {
            const auto& s = traj[i];
            nu[i - 1] = s.u[0];
            nv[i - 1] = s.v[0];
            na[i - 1] = s.a[0];
            xu[i - 1] = problem.exact_u(s.t);
            xv[i - 1] = problem.exact_v(s.t);
            xa[i - 1] = problem.exact_a(s.t);
        }
        const double eu = global_error(nu, xu);
        const double ev = global_error(nv, xv);
        res.errors_u.push_back(eu);
        res.errors_v.push_back(ev);
        if (with_accel) res.errors_a.push_back(global_error(na, xa));
        if (!(eu < 1e6) || !std::isfinite(eu)) res.diverged = true;
    }

    res.slope_u = loglog_slope(dts, res.errors_u).value_or(
        std::numeric_limits<double>::quiet_NaN());
    res.slope_v = loglog_slope(dts, res.errors_v).value_or(
        std::numeric_limits<double>::quiet_NaN());
    if (with_accel) res.slope_a = loglog_slope(dts, res.errors_a);
    return res;
}

std::vector<double> default_ladder(const ButcherTable& tbl,
                                   const problems::SdofCase& problem, int points) {
    const auto os = spectral::stability_limit(tbl, problem.xi);
    if (!os)
        throw Error(tbl.name + ": no stable step size at xi = " +
                    std::to_string(problem.xi));
    const double dt_stab = 0.8 * *os / problem.omega;
    double dt = std::min(problem.T / 20.0, dt_stab);
    // land on a power-of-two fraction of T/10 for reproducible ladders
    const double base = problem.T / 10.0;
    double step = base;
    while (step > dt) step *= 0.5;
    std::vector<double> dts(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) dts[static_cast<std::size_t>(k)] = step * std::pow(0.5, k);
    return dts;
}

LteResult lte_probe(const ButcherTable& tbl, const problems::SdofCase& problem,
                    const std::vector<double>& dts) {
    const auto sys = problems::to_system(problem);
    LteResult res;
    res.dts = dts;
    for (double dt : dts) {
        State s0;
        s0.t = 0.0;
        s0.u = VectorXd::Constant(1, problem.exact_u(0.0));
        s0.v = VectorXd::Constant(1, problem.exact_v(0.0));
        s0.a = VectorXd::Constant(1, problem.exact_a(0.0));
        const State s1 = step_linear(tbl, sys, s0, dt);
        res.errors_u.push_back(std::abs(s1.u[0] - problem.exact_u(dt)));
        res.errors_v.push_back(std::abs(s1.v[0] - problem.exact_v(dt)));
        res.errors_a.push_back(std::abs(s1.a[0] - problem.exact_a(dt)));
    }
    const auto fit = [&](const std::vector<double>& errs) {
        return loglog_slope(dts, errs);
    };
    res.order_u = fit(res.errors_u);
    res.order_v = fit(res.errors_v);
    res.order_a = tbl.accel_output ? fit(res.errors_a) : std::nullopt;
    return res;
}

}  // namespace ssti::accuracy
