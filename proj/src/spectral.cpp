#include "ssti/spectral.hpp"

#include "ssti/system.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssti::spectral {

namespace {

double denominator(const ButcherTable& t, double Omega, double xi) {
    const double D = t.a(2) * Omega * Omega + 2.0 * t.a(4) * xi * Omega + 1.0;
    if (D == 0.0) throw SingularMatrixError(t.name + ": singular stage denominator");
    return D;
}

// Scan step used to bracket sign changes of min_j B_j and of the
// characteristic discriminant.
constexpr double kScanStep = 1e-3;
constexpr double kScanMax = 40.0;

double min_routh(const ButcherTable& tbl, double Omega, double xi) {
    const auto B = routh_hurwitz(tbl, {xi, Omega, std::nullopt});
    return *std::min_element(B.begin(), B.end());
}

// Discriminant of lambda^3 + b lambda^2 + c lambda + d; negative exactly when
// one real root and a complex pair exist.
double cubic_discriminant(double b, double c, double d) {
    return 18.0 * b * c * d - 4.0 * b * b * b * d + b * b * c * c -
           4.0 * c * c * c - 27.0 * d * d;
}

double discriminant(const ButcherTable& tbl, double Omega, double xi) {
    const auto A = characteristic_coeffs(tbl, {xi, Omega, std::nullopt});
    return cubic_discriminant(A[2], A[1], A[0]);
}

}  // namespace

Eigen::Matrix3d amplification_matrix(const ButcherTable& t, const ModalParams& mp,
                                     double dt) {
    const double O = mp.Omega, xi = mp.xi;
    const double w = O / dt;
    const double D = denominator(t, O, xi);
    const double a1 = t.a(1), a2 = t.a(2), a3 = t.a(3), a4 = t.a(4), a5 = t.a(5),
                 a6 = t.a(6), a7 = t.a(7), a8 = t.a(8), a9 = t.a(9), a10 = t.a(10);

    const double D12 = (a2 - t.p * a6) * O * O + 2.0 * (a4 - a6) * xi * O + 1.0;
    const double D22 = (a2 - t.p * a8) * O * O + 2.0 * (a4 - a8) * xi * O + 1.0;
    const double D13 =
        (a2 * a5 - a1 * a6) * O * O + 2.0 * (a4 * a5 - a3 * a6) * xi * O + a5;
    const double D23 =
        (a2 * a7 - a1 * a8) * O * O + 2.0 * (a4 * a7 - a3 * a8) * xi * O + a7;
    const double D33 =
        (a2 * a9 - a1 * a10) * O * O - 2.0 * (a10 * a3 - a4 * a9) * xi * O + a9;

    Eigen::Matrix3d M;
    M << 1.0 + (a2 - a6) * O * O + 2.0 * O * xi * a4, dt * D12, dt * dt * D13,
        -O * w * a8, D22, dt * D23,
        -w * w * a10, -w * a10 * (O * t.p + 2.0 * xi), D33;
    return M / D;
}

Eigen::Vector3d load_operator(const ButcherTable& t, const ModalParams& mp,
                              double dt, double f_value) {
    const double D = denominator(t, mp.Omega, mp.xi);
    Eigen::Vector3d L;
    L << dt * dt * t.a(6), dt * t.a(8), t.a(10);
    return (f_value / D) * L;
}

std::array<double, 4> characteristic_coeffs(const ButcherTable& t,
                                            const ModalParams& mp) {
    const double O = mp.Omega, xi = mp.xi;
    const double D = denominator(t, O, xi);
    const double p = t.p;
    const double a1 = t.a(1), a2 = t.a(2), a3 = t.a(3), a4 = t.a(4), a5 = t.a(5),
                 a6 = t.a(6), a7 = t.a(7), a8 = t.a(8), a9 = t.a(9), a10 = t.a(10);

    const double A2 =
        ((p * a8 + a1 * a10 + a6 - (a9 + 2.0) * a2) * O * O -
         2.0 * ((a9 + 2.0) * a4 - a10 * a3 - a8) * xi * O - a9 - 2.0) /
        D;
    const double A1 =
        (((2.0 * a2 - p * a8 - a6) * a9 + (a7 * p - 2.0 * a1 + a5) * a10 +
          (1.0 - p) * a8 + a2 - a6) *
             O * O +
         2.0 * ((2.0 * a4 - a8) * a9 + (a7 - 2.0 * a3) * a10 - a8 + a4) * xi * O +
         2.0 * a9 + 1.0) /
        D;
    const double A0 =
        ((((p - 1.0) * a8 - a2 + a6) * a9 - ((p - 1.0) * a7 - a1 + a5) * a10) * O *
             O -
         2.0 * xi * ((a4 - a8) * a9 + a10 * (a7 - a3)) * O - a9) /
        D;
    return {A0, A1, A2, 1.0};
}

std::array<std::complex<double>, 3> eigenvalues(const ButcherTable& tbl,
                                                const ModalParams& mp) {
    // Canonical omega = 1 scaling: moduli depend on (Omega, xi) only.
    const Eigen::Matrix3d M = amplification_matrix(tbl, mp, mp.Omega);
    Eigen::EigenSolver<Eigen::Matrix3d> es(M, /*computeEigenvectors=*/false);
    std::array<std::complex<double>, 3> lam;
    for (int i = 0; i < 3; ++i) lam[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    return lam;
}

double spectral_radius(const ButcherTable& tbl, const ModalParams& mp) {
    const auto lam = eigenvalues(tbl, mp);
    double rho = 0.0;
    for (const auto& l : lam) rho = std::max(rho, std::abs(l));
    return rho;
}

std::optional<std::complex<double>> principal_pair(const ButcherTable& tbl,
                                                   const ModalParams& mp) {
    const auto lam = eigenvalues(tbl, mp);
    std::optional<std::complex<double>> best;
    for (const auto& l : lam) {
        if (std::abs(l.imag()) <= 1e-12 * std::max(1.0, std::abs(l))) continue;
        if (!best || std::abs(l) > std::abs(*best) ||
            (std::abs(l) == std::abs(*best) &&
             std::abs(l.imag()) > std::abs(best->imag())))
            best = l;
    }
    if (best && best->imag() < 0.0) best = std::conj(*best);
    return best;
}

std::array<double, 5> routh_hurwitz(const ButcherTable& tbl, const ModalParams& mp) {
    const auto A = characteristic_coeffs(tbl, mp);
    const double A0 = A[0], A1 = A[1], A2 = A[2], A3 = A[3];
    const double B0 = A0 + A1 + A2 + A3;
    const double B1 = -3.0 * A0 - A1 + A2 + 3.0 * A3;
    const double B2 = 3.0 * A0 - A1 - A2 + 3.0 * A3;
    const double B3 = -A0 + A1 - A2 + A3;
    const double B4 = B1 * B2 - B0 * B3;
    return {B0, B1, B2, B3, B4};
}

std::optional<double> stability_limit(const ButcherTable& tbl, double xi,
                                      double tol) {
    if (!(tol > 0.0)) throw Error("stability_limit: tol must be positive");
    // B_j(0+) >= 0 is required for any stable interval; probe just inside.
    double lo = kScanStep;
    if (min_routh(tbl, lo, xi) < -1e-12) {
        // retry closer to zero before declaring an empty domain
        lo = 1e-6;
        if (min_routh(tbl, lo, xi) < -1e-12) return std::nullopt;
    }
    double hi = lo;
    bool bracketed = false;
    for (double O = lo + kScanStep; O <= kScanMax; O += kScanStep) {
        if (min_routh(tbl, O, xi) < 0.0) {
            hi = O;
            bracketed = true;
            break;
        }
        lo = O;
    }
    if (!bracketed) return kScanMax;  // effectively unconditional in range
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (min_routh(tbl, mid, xi) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::optional<DampingPeriod> damping_and_period_error(const ButcherTable& tbl,
                                                      const ModalParams& mp) {
    const auto lam = principal_pair(tbl, mp);
    if (!lam) return std::nullopt;
    const double a = std::log(std::abs(*lam));
    const double b = std::arg(*lam);  // in (0, pi) for the + member
    const double Obar = std::sqrt(a * a + b * b);
    const double xibar = -a / Obar;
    const double pe =
        mp.Omega * std::sqrt(1.0 - mp.xi * mp.xi) / b - 1.0;
    return DampingPeriod{xibar, pe};
}

std::optional<double> bifurcation_point(const ButcherTable& tbl, double xi,
                                        double tol) {
    if (!(tol > 0.0)) throw Error("bifurcation_point: tol must be positive");
    const auto os = stability_limit(tbl, xi);
    if (!os) return std::nullopt;
    const double upper = *os;
    double lo = std::min(kScanStep, upper * 0.5);
    if (discriminant(tbl, lo, xi) >= 0.0) return lo;  // real from the outset
    const int n = 4000;
    double prev = lo;
    for (int i = 1; i <= n; ++i) {
        const double O = lo + (upper - lo) * static_cast<double>(i) / n;
        if (discriminant(tbl, O, xi) >= 0.0) {
            double a = prev, b = O;
            while (b - a > tol) {
                const double mid = 0.5 * (a + b);
                if (discriminant(tbl, mid, xi) < 0.0)
                    a = mid;
                else
                    b = mid;
            }
            return 0.5 * (a + b);
        }
        prev = O;
    }
    return std::nullopt;  // no coalescence in (0, Omega_s]
}

double max_dissipation_point(const ButcherTable& tbl, double xi) {
    if (const auto ob = bifurcation_point(tbl, xi)) return *ob;
    const auto os = stability_limit(tbl, xi);
    if (!os) throw Error(tbl.name + ": no stable interval at this damping ratio");
    const double upper = *os;
    const int n = 2000;
    double best_O = upper, best_rho = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n; ++i) {
        const double O = upper * static_cast<double>(i) / n;
        const double r = spectral_radius(tbl, {xi, O, std::nullopt});
        if (r < best_rho) {
            best_rho = r;
            best_O = O;
        }
    }
    return best_O;
}

LeadingTerms amplitude_phase_leading_terms(const ButcherTable& tbl, double xi,
                                           double omega) {
    if (!(xi >= 0.0 && xi < 1.0)) throw Error("leading terms: xi must be in [0,1)");
    if (!(omega > 0.0)) throw Error("leading terms: omega must be positive");
    const int n_points = 8;
    const double dt0 = 0.2 / omega;

    std::vector<double> dts, eps, del;
    for (int k = 0; k < n_points; ++k) {
        const double dt = dt0 * std::pow(0.5, k);
        const auto lam = principal_pair(tbl, {xi, omega * dt, std::nullopt});
        if (!lam) continue;
        dts.push_back(dt);
        eps.push_back(std::arg(*lam) / dt - omega * std::sqrt(1.0 - xi * xi));
        del.push_back(std::log(std::abs(*lam)) / dt + xi * omega);
    }
    if (dts.size() < 4) throw Error("leading terms: principal pair unavailable");

    const auto fit = [](const std::vector<double>& ts, const std::vector<double>& es,
                        double floor_scale) {
        std::vector<double> t, e;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            // drop points below the round-off floor of the rate quantities
            if (std::abs(es[i]) > floor_scale / ts[i]) {
                t.push_back(ts[i]);
                e.push_back(es[i]);
            }
        }
        if (t.size() < 3) throw Error("leading terms: ladder fully below noise floor");
        // log-log least squares slope
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const auto m = static_cast<double>(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double x = std::log(t[i]), y = std::log(std::abs(e[i]));
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const int n_int = static_cast<int>(std::lround(slope));
        if (std::abs(slope - n_int) > 0.35)
            throw Error("leading terms: non-asymptotic fit");
        std::vector<double> k(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            k[i] = e[i] / std::pow(t[i], n_int);
        double c = k.back();
        if (k.size() >= 3) {
            const double d1 = k[k.size() - 2] - k[k.size() - 3];
            const double d2 = k[k.size() - 1] - k[k.size() - 2];
            double mexp = 1.0;
            if (d2 != 0.0 && d1 / d2 > 0.0)
                mexp = std::clamp(std::log2(d1 / d2), 0.5, 4.0);
            c = k.back() + (k.back() - k[k.size() - 2]) / (std::pow(2.0, mexp) - 1.0);
        }
        return std::pair<double, double>(slope, c);
    };

    const auto [eo, ec] = fit(dts, eps, 1e-13);
    const auto [dor, dc] = fit(dts, del, 1e-13);
    return {eo, ec, dor, dc};
}

SpectralSample sample(const ButcherTable& tbl, double Omega, double xi) {
    SpectralSample s;
    s.Omega = Omega;
    s.xi = xi;
    const ModalParams mp{xi, Omega, std::nullopt};
    s.rho = spectral_radius(tbl, mp);
    if (const auto dp = damping_and_period_error(tbl, mp)) {
        s.principal_complex = true;
        s.xibar = dp->xibar;
        s.pe = dp->pe;
    }
    return s;
}

StabilityDomain stability_domain(const ButcherTable& tbl,
                                 const std::vector<double>& xi_grid, double tol) {
    StabilityDomain d;
    d.xi_grid = xi_grid;
    d.omega_s.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        const auto os = stability_limit(tbl, xi, tol);
        d.omega_s.push_back(os ? *os : std::numeric_limits<double>::quiet_NaN());
    }
    return d;
}

}  // namespace ssti::spectral
