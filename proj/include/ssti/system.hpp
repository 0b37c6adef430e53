#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssti {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrixError : Error {
    using Error::Error;
};

/// Newton iteration on a step failed to reach tolerance.
struct NonConvergenceError : Error {
    NonConvergenceError(const std::string& msg, int iters)
        : Error(msg), iterations(iters) {}
    int iterations;
};

/// A step inside integrate() failed; carries the zero-based step index.
struct IntegrationError : Error {
    IntegrationError(const std::string& msg, std::size_t step)
        : Error(msg), step_index(step) {}
    std::size_t step_index;
};

/// (t, u, v, a) solution point.
struct State {
    double t = 0.0;
    VectorXd u, v, a;
};

/// Uniformly spaced time series of states.
struct Trajectory {
    double dt = 0.0;
    std::vector<State> states;

    std::size_t size() const { return states.size(); }
    const State& operator[](std::size_t i) const { return states[i]; }
    const State& back() const { return states.back(); }
};

/// Symmetric positive definite mass operator, diagonal or dense.
/// Dense matrices are factorized once at construction.
class MassMatrix {
  public:
    MassMatrix() = default;  // empty; assign from a factory before use
    static MassMatrix Identity(int dim);
    static MassMatrix Diagonal(VectorXd d);
    static MassMatrix Dense(MatrixXd m);

    int dim() const { return dim_; }
    bool diagonal() const { return diagonal_; }

    VectorXd apply(const VectorXd& x) const;
    VectorXd solve(const VectorXd& rhs) const;

    MatrixXd dense() const;           // materialized matrix
    const VectorXd& diag() const;     // valid only when diagonal()

  private:
    int dim_ = 0;
    bool diagonal_ = true;
    VectorXd d_, dinv_;
    MatrixXd m_;
    Eigen::LDLT<MatrixXd> ldlt_;
};

using ForceFn =
    std::function<void(const VectorXd& u, const VectorXd& v, double t, VectorXd& out)>;
using TangentDampingFn =
    std::function<void(const VectorXd& u, const VectorXd& v, double t, MatrixXd& out)>;
using LoadFn = std::function<VectorXd(double t)>;

/// Explicit (M, C, K, q) description of a linear system
/// M u'' + C u' + K u = q(t).
struct LinearParts {
    MatrixXd C, K;
    LoadFn load;  // null => zero external load
};

/// M u'' = f(u', u, t) with positive definite mass.
class SecondOrderSystem {
  public:
    static SecondOrderSystem Nonlinear(MassMatrix M, ForceFn f,
                                       TangentDampingFn tangent = nullptr);
    static SecondOrderSystem Linear(MassMatrix M, MatrixXd C, MatrixXd K,
                                    LoadFn load = nullptr);

    int dim() const { return M_.dim(); }
    const MassMatrix& mass() const { return M_; }
    void force(const VectorXd& u, const VectorXd& v, double t, VectorXd& out) const;
    VectorXd force(const VectorXd& u, const VectorXd& v, double t) const;

    bool has_tangent_damping() const { return static_cast<bool>(tangent_); }
    void tangent_damping(const VectorXd& u, const VectorXd& v, double t,
                         MatrixXd& out) const;

    bool is_linear() const { return linear_ != nullptr; }
    const LinearParts& linear_parts() const { return *linear_; }

  private:
    SecondOrderSystem() = default;
    MassMatrix M_;
    ForceFn force_;
    TangentDampingFn tangent_;
    std::shared_ptr<const LinearParts> linear_;
};

/// Modal SDOF system u'' + 2 xi w u' + w^2 u = f(t) as a 1-dof linear system.
SecondOrderSystem sdof_system(double xi, double omega,
                              std::function<double(double)> forcing = nullptr);

}  // namespace ssti
