#pragma once

#include "ssti/system.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ssti::problems {

// ---------------------------------------------------------------------------
// Analytic SDOF benchmark cases

enum class SdofKind { FreeUndamped, FreeDamped, ForcedUndamped, ForcedDamped };

/// Modal SDOF benchmark with closed-form solution.
struct SdofCase {
    std::string name;
    double xi = 0.0;
    double omega = 1.0;
    double u0 = 0.0, v0 = 0.0;
    double T = 10.0;  // standard test duration
    std::function<double(double)> forcing;  // null => free vibration
    std::function<double(double)> exact_u, exact_v, exact_a;
};

SdofCase sdof_case(SdofKind which);
SecondOrderSystem to_system(const SdofCase& c);

// ---------------------------------------------------------------------------
// Nonlinear benchmarks

/// x'' - mu (1 - x^2) x' + x = A sin(omega_p t)
SecondOrderSystem van_der_pol(double mu, double A, double omega_p);

/// Planar spring pendulum, coordinates (x, y) with gravity along +x.
/// m = 1 kg, g = 10 m/s^2, l0 = 1 m, k = 30 N/m; x(0) = 0, y(0) = 1.5 m,
/// released from rest.
SecondOrderSystem spring_pendulum();
State spring_pendulum_initial_state(const SecondOrderSystem& sys);
double spring_pendulum_energy(const State& s);

// ---------------------------------------------------------------------------
// FEM wave-propagation problems

struct StepLoad {};   // H(t >= 0)
struct BumpPulse {};  // 4 [1 - (2t-1)^2] H(1 - t)
using TimeShape = std::variant<StepLoad, BumpPulse>;
double time_shape_value(const TimeShape& shape, double t);

/// Regular-grid node bookkeeping for the membrane (dof = -1: constrained).
struct GridMeta {
    int nx = 0, ny = 0;  // element counts
    double dx = 0.0, dy = 0.0;
    std::vector<int> dof;  // (nx+1) * (ny+1) node -> dof map
    int dof_at(int i, int j) const { return dof[static_cast<std::size_t>(j * (nx + 1) + i)]; }
};

/// Assembled linear semidiscrete problem M u'' + K u = pattern * g(t).
struct FemProblem {
    MassMatrix M;
    MatrixXd K;
    VectorXd load_pattern;
    TimeShape shape;
    double c0 = 1.0;
    double dx = 0.0;
    double r = 0.0, zeta = 1.0, alpha_k = 0.0, alpha_m = 0.0;
    int midpoint_dof = -1;           // rod only
    std::optional<GridMeta> grid;    // membrane only
};

SecondOrderSystem to_system(const FemProblem& fp);

/// Fixed-free elastic rod under a suddenly applied end force, two-node linear
/// elements with mass weighting r (0: lumped, 1: consistent, 1/2: blended).
FemProblem rod_assembly(int n_elem, double r);

/// Center-loaded square membrane (side 15, c0 = 1), four-node rectangular
/// elements with modified quadrature points alpha_k / alpha_m and mass
/// weighting r. Full domain, outer boundary fixed.
FemProblem membrane_assembly(int n_side, double zeta, double r, double alpha_k,
                             double alpha_m);

/// Symmetric quarter of the same membrane (n_side_full must be even); the
/// corner node carries a quarter of the center load.
FemProblem membrane_quarter(int n_side_full, double zeta, double r,
                            double alpha_k, double alpha_m);

/// Largest natural frequency of (K, M).
double max_natural_frequency(const FemProblem& fp);

/// Exact solution of the semidiscrete system by modal superposition with
/// closed-form Duhamel integrals for the supported load shapes.
class ModalOracle {
  public:
    explicit ModalOracle(const FemProblem& fp);
    State evaluate(double t) const;

  private:
    TimeShape shape_;
    MatrixXd phi_;       // M-orthonormal mode shapes
    VectorXd omega_;     // natural frequencies
    VectorXd g_;         // modal loads
};

/// Radial sample rays through the membrane quarter grid.
enum class Ray { Axis, Diagonal };

/// (radius, value) samples of a nodal field along a ray from the center.
std::vector<std::pair<double, double>> radial_profile(const GridMeta& grid,
                                                      const VectorXd& field,
                                                      Ray ray);

/// L2 difference between the axis and diagonal profiles of a field,
/// compared on the axis radii by linear interpolation of the diagonal.
double profile_anisotropy(const GridMeta& grid, const VectorXd& field);

// ---------------------------------------------------------------------------
// Dissipation metrics

struct DissipationMetric {
    double overshoot = 0.0;         // max |x - plateau| in the window
    double total_variation = 0.0;   // sum |x_{i+1} - x_i| in the window
};

DissipationMetric dissipation_metric(const std::vector<double>& times,
                                     const std::vector<double>& values,
                                     double t_begin, double t_end,
                                     double plateau);

}  // namespace ssti::problems
