#pragma once

#include "ssti/butcher.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace ssti::spectral {

/// Dimensionless modal test-system parameters: Omega = omega * dt,
/// physical damping ratio xi in [0, 1).
struct ModalParams {
    double xi = 0.0;
    double Omega = 0.0;
    std::optional<double> omega;  // set when dt must be separated from Omega
};

/// One (Omega, xi) sample of the scheme's modal behavior.
struct SpectralSample {
    double Omega = 0.0;
    double xi = 0.0;
    double rho = 0.0;
    std::optional<double> xibar;  // present only below the bifurcation point
    std::optional<double> pe;
    bool principal_complex = false;
};

/// Omega_s(xi) curve on a damping-ratio grid.
struct StabilityDomain {
    std::vector<double> xi_grid;
    std::vector<double> omega_s;  // NaN where no stable interval exists
};

/// Numerical amplification matrix on the modal system; omega = Omega/dt.
Eigen::Matrix3d amplification_matrix(const ButcherTable& tbl, const ModalParams& mp,
                                     double dt);

/// Forcing contribution of one step: (f(t_{n+p})/D) [dt^2 a6, dt a8, a10]^T.
Eigen::Vector3d load_operator(const ButcherTable& tbl, const ModalParams& mp,
                              double dt, double f_value);

/// Characteristic polynomial coefficients (A0, A1, A2, A3) with A3 = 1.
std::array<double, 4> characteristic_coeffs(const ButcherTable& tbl,
                                            const ModalParams& mp);

double spectral_radius(const ButcherTable& tbl, const ModalParams& mp);

/// Eigenvalues of the amplification matrix (canonical omega = 1 scaling).
std::array<std::complex<double>, 3> eigenvalues(const ButcherTable& tbl,
                                                const ModalParams& mp);

/// Principal complex-conjugate pair (the one with the largest modulus,
/// ties by largest |Im|); the member with positive imaginary part.
std::optional<std::complex<double>> principal_pair(const ButcherTable& tbl,
                                                   const ModalParams& mp);

/// Routh-Hurwitz coefficients (B0..B4); all nonnegative <=> spectrally stable.
std::array<double, 5> routh_hurwitz(const ButcherTable& tbl, const ModalParams& mp);

/// Largest Omega with B_j >= 0 throughout (0, Omega], bisected to tol.
/// Empty when no stable interval exists at this damping ratio.
std::optional<double> stability_limit(const ButcherTable& tbl, double xi,
                                      double tol = 1e-10);

struct DampingPeriod {
    double xibar = 0.0;  // numerical damping ratio
    double pe = 0.0;     // relative period error
};

/// Numerical damping ratio and period error from the principal pair; empty
/// when the pair has coalesced to real roots.
std::optional<DampingPeriod> damping_and_period_error(const ButcherTable& tbl,
                                                      const ModalParams& mp);

/// Smallest Omega in (0, Omega_s] where the principal pair coalesces to real
/// roots (characteristic-cubic discriminant sign change), bisected to tol.
std::optional<double> bifurcation_point(const ButcherTable& tbl, double xi,
                                        double tol = 1e-10);

/// Omega of maximum dissipation: the bifurcation point when one exists,
/// otherwise the argmin of the spectral radius over (0, Omega_s].
double max_dissipation_point(const ButcherTable& tbl, double xi);

struct LeadingTerms {
    double eps_order = 0.0;    // phase-rate error exponent
    double eps_coeff = 0.0;
    double delta_order = 0.0;  // amplitude-rate error exponent
    double delta_coeff = 0.0;
};

/// Leading-term fit of the principal-pair errors against the exact modal
/// propagator over a geometric dt ladder:
///   eps(dt)   = arg(lambda)/dt - omega sqrt(1-xi^2)   (phase rate)
///   delta(dt) = ln|lambda|/dt + xi omega              (amplitude rate)
/// Orders are log-log slopes; coefficients are Richardson-extrapolated.
LeadingTerms amplitude_phase_leading_terms(const ButcherTable& tbl, double xi,
                                           double omega);

SpectralSample sample(const ButcherTable& tbl, double Omega, double xi);

StabilityDomain stability_domain(const ButcherTable& tbl,
                                 const std::vector<double>& xi_grid,
                                 double tol = 1e-10);

}  // namespace ssti::spectral
