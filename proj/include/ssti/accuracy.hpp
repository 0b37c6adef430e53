#pragma once

#include "ssti/butcher.hpp"
#include "ssti/problems.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ssti::accuracy {

/// Relative L2 error [sum (exact_i - numeric_i)^2 / sum exact_i^2]^(1/2).
double global_error(std::span<const double> numeric, std::span<const double> exact);

struct ConvergenceResult {
    std::vector<double> dts;  // strictly decreasing
    std::vector<double> errors_u, errors_v, errors_a;
    double slope_u = 0.0, slope_v = 0.0;
    std::optional<double> slope_a;  // absent for schemes without acceleration
    bool diverged = false;
};

/// Integrates the SDOF case over its standard duration for each step size and
/// fits per-variable log-log slopes of the global error.
ConvergenceResult convergence_study(const ButcherTable& tbl,
                                    const problems::SdofCase& problem,
                                    const std::vector<double>& dts);

/// Geometric step ladder with the largest step inside both the asymptotic
/// range (T/20) and 80% of the scheme's stability limit.
std::vector<double> default_ladder(const ButcherTable& tbl,
                                   const problems::SdofCase& problem,
                                   int points = 6);

struct LteResult {
    std::vector<double> dts;
    std::vector<double> errors_u, errors_v, errors_a;
    std::optional<double> order_u, order_v, order_a;  // one-step error slopes
};

/// One-step error scaling from exact initial data; local displacement order
/// exceeds the global order by one.
LteResult lte_probe(const ButcherTable& tbl, const problems::SdofCase& problem,
                    const std::vector<double>& dts);

}  // namespace ssti::accuracy
