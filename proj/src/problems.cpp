#include "ssti/problems.hpp"

#include "ssti/stepper.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace ssti::problems {

// ---------------------------------------------------------------------------
// SDOF cases

SdofCase sdof_case(SdofKind which) {
    SdofCase c;
    switch (which) {
        case SdofKind::FreeUndamped: {
            c.name = "free-undamped";
            c.xi = 0.0;
            c.omega = 2.0;
            c.u0 = 1.0;
            c.v0 = 0.0;
            c.T = 10.0;
            c.exact_u = [](double t) { return std::cos(2.0 * t); };
            c.exact_v = [](double t) { return -2.0 * std::sin(2.0 * t); };
            c.exact_a = [](double t) { return -4.0 * std::cos(2.0 * t); };
            break;
        }
        case SdofKind::FreeDamped: {
            c.name = "free-damped";
            c.xi = 0.2;
            c.omega = 2.0;
            c.u0 = 0.0;
            c.v0 = 12.0;
            c.T = 10.0;
            const double xw = c.xi * c.omega;                       // 0.4
            const double wd = c.omega * std::sqrt(1.0 - c.xi * c.xi);
            c.exact_u = [xw, wd](double t) {
                return 12.0 / wd * std::exp(-xw * t) * std::sin(wd * t);
            };
            c.exact_v = [xw, wd](double t) {
                return std::exp(-xw * t) *
                       (12.0 * std::cos(wd * t) - 12.0 * xw / wd * std::sin(wd * t));
            };
            const double w2 = c.omega * c.omega;
            auto u = c.exact_u;
            auto v = c.exact_v;
            c.exact_a = [xw, w2, u, v](double t) {
                return -2.0 * xw * v(t) - w2 * u(t);
            };
            break;
        }
        case SdofKind::ForcedUndamped: {
            c.name = "forced-undamped";
            c.xi = 0.0;
            c.omega = 1.0;
            c.u0 = -1.0 / 3.0;
            c.v0 = 0.0;
            c.T = 6.5;
            c.forcing = [](double t) { return std::cos(2.0 * t); };
            c.exact_u = [](double t) { return -std::cos(2.0 * t) / 3.0; };
            c.exact_v = [](double t) { return 2.0 / 3.0 * std::sin(2.0 * t); };
            c.exact_a = [](double t) { return 4.0 / 3.0 * std::cos(2.0 * t); };
            break;
        }
        case SdofKind::ForcedDamped: {
            c.name = "forced-damped";
            c.xi = 2.0 / std::sqrt(5.0);
            c.omega = std::sqrt(5.0);
            c.u0 = 57.0 / 65.0;
            c.v0 = 2.0 / 65.0;
            c.T = 5.6;
            c.forcing = [](double t) { return std::sin(2.0 * t); };
            c.exact_u = [](double t) {
                return std::exp(-2.0 * t) * (std::cos(t) + 2.0 * std::sin(t)) -
                       (8.0 * std::cos(2.0 * t) - std::sin(2.0 * t)) / 65.0;
            };
            c.exact_v = [](double t) {
                return -5.0 * std::exp(-2.0 * t) * std::sin(t) +
                       (16.0 * std::sin(2.0 * t) + 2.0 * std::cos(2.0 * t)) / 65.0;
            };
            auto u = c.exact_u;
            auto v = c.exact_v;
            c.exact_a = [u, v](double t) {
                return std::sin(2.0 * t) - 4.0 * v(t) - 5.0 * u(t);
            };
            break;
        }
    }
    return c;
}

SecondOrderSystem to_system(const SdofCase& c) {
    return sdof_system(c.xi, c.omega, c.forcing);
}

// ---------------------------------------------------------------------------
// Nonlinear benchmarks

SecondOrderSystem van_der_pol(double mu, double A, double omega_p) {
    auto force = [mu, A, omega_p](const VectorXd& u, const VectorXd& v, double t,
                                  VectorXd& out) {
        const double x = u[0];
        out.resize(1);
        out[0] = A * std::sin(omega_p * t) + mu * (1.0 - x * x) * v[0] - x;
    };
    auto tangent = [mu](const VectorXd& u, const VectorXd&, double, MatrixXd& out) {
        out.resize(1, 1);
        out(0, 0) = -mu * (1.0 - u[0] * u[0]);
    };
    return SecondOrderSystem::Nonlinear(MassMatrix::Identity(1), force, tangent);
}

namespace {
constexpr double kPendulumMass = 1.0;
constexpr double kPendulumGravity = 10.0;
constexpr double kPendulumRestLength = 1.0;
constexpr double kPendulumStiffness = 30.0;
}  // namespace

SecondOrderSystem spring_pendulum() {
    auto force = [](const VectorXd& u, const VectorXd&, double, VectorXd& out) {
        const double x = u[0], y = u[1];
        const double len = std::hypot(x, y);
        if (len <= 0.0) throw Error("spring pendulum: singular configuration l = 0");
        const double s = kPendulumStiffness * (1.0 - kPendulumRestLength / len);
        out.resize(2);
        out[0] = kPendulumMass * kPendulumGravity - s * x;
        out[1] = -s * y;
    };
    return SecondOrderSystem::Nonlinear(
        MassMatrix::Diagonal(VectorXd::Constant(2, kPendulumMass)), force);
}

State spring_pendulum_initial_state(const SecondOrderSystem& sys) {
    VectorXd u0(2), v0(2);
    u0 << 0.0, 1.5;
    v0.setZero();
    return initial_state(sys, u0, v0, 0.0);
}

double spring_pendulum_energy(const State& s) {
    const double len = std::hypot(s.u[0], s.u[1]);
    const double stretch = len - kPendulumRestLength;
    return 0.5 * kPendulumMass * s.v.squaredNorm() +
           0.5 * kPendulumStiffness * stretch * stretch -
           kPendulumMass * kPendulumGravity * s.u[0];
}

// ---------------------------------------------------------------------------
// FEM assemblies

double time_shape_value(const TimeShape& shape, double t) {
    if (std::holds_alternative<StepLoad>(shape)) return t >= 0.0 ? 1.0 : 0.0;
    if (t < 0.0 || t > 1.0) return 0.0;
    const double w = 2.0 * t - 1.0;
    return 4.0 * (1.0 - w * w);
}

SecondOrderSystem to_system(const FemProblem& fp) {
    const int n = fp.M.dim();
    VectorXd pattern = fp.load_pattern;
    TimeShape shape = fp.shape;
    LoadFn load = [pattern, shape](double t) {
        return VectorXd(pattern * time_shape_value(shape, t));
    };
    return SecondOrderSystem::Linear(fp.M, MatrixXd::Zero(n, n), fp.K,
                                     std::move(load));
}

FemProblem rod_assembly(int n_elem, double r) {
    if (n_elem < 2) throw Error("rod_assembly: n_elem must be >= 2");
    if (!(r >= 0.0 && r <= 1.0)) throw Error("rod_assembly: r must be in [0, 1]");

    constexpr double kArea = 1.0;
    constexpr double kYoung = 3e7;
    constexpr double kLength = 20.0;
    constexpr double kDensity = 7.4e-4;
    const double c0 = std::sqrt(kYoung / kDensity);
    const double dx = kLength / n_elem;
    const int n = n_elem;  // node 0 fixed; dofs are nodes 1..n_elem

    // Element mass (dx/6) [[3-r, r], [r, 3-r]]; stiffness c0^2/dx [[1,-1],[-1,1]].
    MatrixXd K = MatrixXd::Zero(n, n);
    MatrixXd Mfull = MatrixXd::Zero(n, n);
    const double md = dx / 6.0 * (3.0 - r);
    const double mo = dx / 6.0 * r;
    const double kk = c0 * c0 / dx;
    for (int e = 0; e < n_elem; ++e) {
        const int i = e - 1, j = e;  // global dofs of element nodes (i = -1: fixed)
        if (i >= 0) {
            Mfull(i, i) += md;
            K(i, i) += kk;
            Mfull(i, j) += mo;
            Mfull(j, i) += mo;
            K(i, j) -= kk;
            K(j, i) -= kk;
        } else {
            // fixed-end element contributes only to the free node
        }
        Mfull(j, j) += md;
        K(j, j) += kk;
    }

    FemProblem fp;
    fp.K = std::move(K);
    fp.M = (r == 0.0) ? MassMatrix::Diagonal(Mfull.diagonal())
                      : MassMatrix::Dense(Mfull);
    fp.load_pattern = VectorXd::Zero(n);
    fp.load_pattern[n - 1] = 100.0 / (kDensity * kArea);
    fp.shape = StepLoad{};
    fp.c0 = c0;
    fp.dx = dx;
    fp.r = r;
    fp.midpoint_dof = n_elem / 2 - 1;  // node at x = L/2
    return fp;
}

namespace {

// Reference-square shape values at (xi, eta), node order
// (-1,-1), (1,-1), (1,1), (-1,1).
Eigen::Vector4d quad_shape(double xi, double eta) {
    return 0.25 * Eigen::Vector4d{(1 - xi) * (1 - eta), (1 + xi) * (1 - eta),
                                  (1 + xi) * (1 + eta), (1 - xi) * (1 + eta)};
}

void quad_shape_grad(double xi, double eta, Eigen::Vector4d& dxi,
                     Eigen::Vector4d& deta) {
    dxi << -(1 - eta), (1 - eta), (1 + eta), -(1 + eta);
    deta << -(1 - xi), -(1 + xi), (1 + xi), (1 - xi);
    dxi *= 0.25;
    deta *= 0.25;
}

// Element matrices by 2x2 quadrature at +-alpha with unit weights.
void quad_element_matrices(double dx, double dy, double alpha_k, double alpha_m,
                           double r, Eigen::Matrix4d& me, Eigen::Matrix4d& ke) {
    const double jac = 0.25 * dx * dy;
    Eigen::Matrix4d mfull = Eigen::Matrix4d::Zero();
    ke.setZero();
    Eigen::Vector4d dxi, deta;
    for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) {
            const Eigen::Vector4d nm = quad_shape(sx * alpha_m, sy * alpha_m);
            mfull += nm * nm.transpose() * jac;
            quad_shape_grad(sx * alpha_k, sy * alpha_k, dxi, deta);
            const Eigen::Vector4d gx = dxi * (2.0 / dx);
            const Eigen::Vector4d gy = deta * (2.0 / dy);
            ke += (gx * gx.transpose() + gy * gy.transpose()) * jac;
        }
    }
    // r-blend between row-sum lumping and the quadrature mass
    Eigen::Matrix4d mlump = Eigen::Matrix4d::Zero();
    mlump.diagonal() = mfull.rowwise().sum();
    me = (1.0 - r) * mlump + r * mfull;
}

void check_membrane_params(double zeta, double r, double alpha_k, double alpha_m) {
    if (!(zeta > 0.0)) throw Error("membrane: zeta must be positive");
    if (!(alpha_k > 0.0 && alpha_k <= 1.0 && alpha_m > 0.0 && alpha_m <= 1.0))
        throw Error("membrane: quadrature points must lie in (0, 1]");
    if (!(r >= 0.0 && r <= 1.0)) throw Error("membrane: r must be in [0, 1]");
}

// Assemble an nx-by-ny regular grid; nodes satisfying `fixed` are eliminated,
// the load sits at node (li, lj).
FemProblem membrane_build(int nx, int ny, double dx, double zeta, double r,
                          double alpha_k, double alpha_m,
                          const std::function<bool(int, int)>& fixed, int li,
                          int lj, double load_scale) {
    const double dy = zeta * dx;

    GridMeta grid;
    grid.nx = nx;
    grid.ny = ny;
    grid.dx = dx;
    grid.dy = dy;
    grid.dof.assign(static_cast<std::size_t>((nx + 1) * (ny + 1)), -1);
    int ndof = 0;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            if (!fixed(i, j))
                grid.dof[static_cast<std::size_t>(j * (nx + 1) + i)] = ndof++;

    Eigen::Matrix4d me, ke;
    quad_element_matrices(dx, dy, alpha_k, alpha_m, r, me, ke);

    MatrixXd K = MatrixXd::Zero(ndof, ndof);
    MatrixXd M = MatrixXd::Zero(ndof, ndof);
    for (int ej = 0; ej < ny; ++ej)
        for (int ei = 0; ei < nx; ++ei) {
            const int nodes[4] = {grid.dof_at(ei, ej), grid.dof_at(ei + 1, ej),
                                  grid.dof_at(ei + 1, ej + 1), grid.dof_at(ei, ej + 1)};
            for (int a = 0; a < 4; ++a) {
                if (nodes[a] < 0) continue;
                for (int b = 0; b < 4; ++b) {
                    if (nodes[b] < 0) continue;
                    K(nodes[a], nodes[b]) += ke(a, b);
                    M(nodes[a], nodes[b]) += me(a, b);
                }
            }
        }

    FemProblem fp;
    fp.K = std::move(K);
    fp.M = (r == 0.0) ? MassMatrix::Diagonal(M.diagonal()) : MassMatrix::Dense(M);
    fp.load_pattern = VectorXd::Zero(ndof);
    const int center = grid.dof_at(li, lj);
    if (center < 0) throw Error("membrane: loaded node is constrained");
    fp.load_pattern[center] = load_scale;
    fp.shape = BumpPulse{};
    fp.c0 = 1.0;
    fp.dx = dx;
    fp.r = r;
    fp.zeta = zeta;
    fp.alpha_k = alpha_k;
    fp.alpha_m = alpha_m;
    fp.grid = std::move(grid);
    return fp;
}

}  // namespace

FemProblem membrane_assembly(int n_side, double zeta, double r, double alpha_k,
                             double alpha_m) {
    if (n_side < 8 || n_side % 2 != 0)
        throw Error("membrane_assembly: n_side must be even and >= 8");
    check_membrane_params(zeta, r, alpha_k, alpha_m);
    const int n = n_side;
    return membrane_build(
        n, n, 15.0 / n, zeta, r, alpha_k, alpha_m,
        [n](int i, int j) { return i == 0 || i == n || j == 0 || j == n; },
        n / 2, n / 2, 1.0);
}

FemProblem membrane_quarter(int n_side_full, double zeta, double r, double alpha_k,
                            double alpha_m) {
    if (n_side_full < 8 || n_side_full % 2 != 0)
        throw Error("membrane_quarter: n_side_full must be even and >= 8");
    check_membrane_params(zeta, r, alpha_k, alpha_m);
    const int n = n_side_full / 2;
    // symmetry (natural) boundary along x = 0 and y = 0, outer edges fixed,
    // a quarter of the center load at the corner node
    return membrane_build(
        n, n, 15.0 / n_side_full, zeta, r, alpha_k, alpha_m,
        [n](int i, int j) { return i == n || j == n; }, 0, 0, 0.25);
}

double max_natural_frequency(const FemProblem& fp) {
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(fp.K, fp.M.dense(),
                                                          Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw Error("max_natural_frequency: eigensolve failed");
    return std::sqrt(es.eigenvalues().maxCoeff());
}

// ---------------------------------------------------------------------------
// Modal oracle

ModalOracle::ModalOracle(const FemProblem& fp) : shape_(fp.shape) {
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(fp.K, fp.M.dense());
    if (es.info() != Eigen::Success) throw Error("modal oracle: eigensolve failed");
    const VectorXd w2 = es.eigenvalues();
    if (w2.minCoeff() < -1e-9 * std::abs(w2.maxCoeff()))
        throw Error("modal oracle: stiffness not positive semidefinite");
    phi_ = es.eigenvectors();  // M-orthonormal
    omega_ = w2.cwiseMax(0.0).cwiseSqrt();
    g_ = phi_.transpose() * fp.load_pattern;
    for (int i = 0; i < omega_.size(); ++i)
        if (omega_[i] <= 1e-12)
            throw Error("modal oracle: rigid-body mode present");
}

State ModalOracle::evaluate(double t) const {
    const auto n = omega_.size();
    VectorXd x(n), v(n), a(n);
    const bool step = std::holds_alternative<StepLoad>(shape_);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = omega_[i];
        const double g = g_[i];
        double xi_ = 0.0, vi = 0.0;
        if (step) {
            xi_ = g / (w * w) * (1.0 - std::cos(w * t));
            vi = g / w * std::sin(w * t);
        } else {
            const double w2 = w * w;
            const double A = -32.0 * g / (w2 * w2);
            const double B = -16.0 * g / (w2 * w);
            if (t <= 1.0) {
                xi_ = 16.0 * g / w2 * (t - t * t) + 32.0 * g / (w2 * w2) +
                      A * std::cos(w * t) + B * std::sin(w * t);
                vi = 16.0 * g / w2 * (1.0 - 2.0 * t) - A * w * std::sin(w * t) +
                     B * w * std::cos(w * t);
            } else {
                const double x1 = 32.0 * g / (w2 * w2) + A * std::cos(w) +
                                  B * std::sin(w);
                const double v1 = -16.0 * g / w2 - A * w * std::sin(w) +
                                  B * w * std::cos(w);
                const double s = t - 1.0;
                xi_ = x1 * std::cos(w * s) + v1 / w * std::sin(w * s);
                vi = -x1 * w * std::sin(w * s) + v1 * std::cos(w * s);
            }
        }
        x[i] = xi_;
        v[i] = vi;
        a[i] = g * time_shape_value(shape_, t) - w * w * xi_;
    }
    State s;
    s.t = t;
    s.u = phi_ * x;
    s.v = phi_ * v;
    s.a = phi_ * a;
    return s;
}

// ---------------------------------------------------------------------------
// Profiles and metrics

std::vector<std::pair<double, double>> radial_profile(const GridMeta& grid,
                                                      const VectorXd& field,
                                                      Ray ray) {
    std::vector<std::pair<double, double>> prof;
    const int n = (ray == Ray::Axis) ? grid.nx : std::min(grid.nx, grid.ny);
    for (int i = 0; i <= n; ++i) {
        const int dof =
            (ray == Ray::Axis) ? grid.dof_at(i, 0) : grid.dof_at(i, i);
        const double radius =
            (ray == Ray::Axis)
                ? i * grid.dx
                : i * std::hypot(grid.dx, grid.dy);
        if (dof >= 0)
            prof.emplace_back(radius, field[dof]);
        else
            prof.emplace_back(radius, 0.0);  // constrained node
    }
    return prof;
}

double profile_anisotropy(const GridMeta& grid, const VectorXd& field) {
    const auto axis = radial_profile(grid, field, Ray::Axis);
    const auto diag = radial_profile(grid, field, Ray::Diagonal);
    double sum = 0.0;
    int count = 0;
    for (const auto& [radius, value] : axis) {
        if (radius > diag.back().first) break;
        // linear interpolation of the diagonal profile at this radius
        std::size_t k = 1;
        while (k < diag.size() && diag[k].first < radius) ++k;
        if (k >= diag.size()) break;
        const double r0 = diag[k - 1].first, r1 = diag[k].first;
        const double f0 = diag[k - 1].second, f1 = diag[k].second;
        const double w = (r1 > r0) ? (radius - r0) / (r1 - r0) : 0.0;
        const double dv = f0 + w * (f1 - f0);
        sum += (value - dv) * (value - dv);
        ++count;
    }
    return count > 0 ? std::sqrt(sum / count) : 0.0;
}

DissipationMetric dissipation_metric(const std::vector<double>& times,
                                     const std::vector<double>& values,
                                     double t_begin, double t_end,
                                     double plateau) {
    if (times.size() != values.size() || times.empty())
        throw Error("dissipation_metric: size mismatch");
    if (!(t_end > t_begin)) throw Error("dissipation_metric: empty window");
    DissipationMetric m;
    bool any = false;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_begin || times[i] > t_end) continue;
        any = true;
        m.overshoot = std::max(m.overshoot, std::abs(values[i] - plateau));
        if (have_prev) m.total_variation += std::abs(values[i] - prev);
        prev = values[i];
        have_prev = true;
    }
    if (!any) throw Error("dissipation_metric: window outside trajectory span");
    return m;
}

}  // namespace ssti::problems
