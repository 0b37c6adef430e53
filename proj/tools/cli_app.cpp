#include "cli_app.hpp"

#include "ssti/accuracy.hpp"
#include "ssti/butcher.hpp"
#include "ssti/problems.hpp"
#include "ssti/rk4.hpp"
#include "ssti/spectral.hpp"
#include "ssti/stepper.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace ssti::cli {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// "name", "name:rho_b" or "name:rho_b:rho_s".
ButcherTable parse_alg(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw Error("empty algorithm spec");
    std::optional<double> rb, rs;
    if (parts.size() >= 2) rb = std::stod(parts[1]);
    if (parts.size() >= 3) rs = std::stod(parts[2]);
    if (parts.size() > 3) throw Error("algorithm spec '" + spec + "' has too many fields");
    return table(parts[0], rb, rs);
}

std::string sanitize(std::string s) {
    for (auto& c : s)
        if (c == ':' || c == '/' || c == ' ') c = '_';
    return s;
}

fs::path output_root(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SSTI_OUT_ROOT"); env && *env) return env;
    return "out";
}

std::ofstream open_csv(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot open output file " + (dir / name).string());
    return f;
}

void write_gnuplot(const fs::path& dir, const std::string& name,
                   const std::string& body) {
    std::ofstream f(dir / name);
    f << "# gnuplot script (run: gnuplot " << name << ")\n"
      << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << body;
}

// ---------------------------------------------------------------------------

int cmd_spectra(const std::string& alg, const std::vector<double>& xis,
                int points, double omega_max, const fs::path& out) {
    const auto tbl = parse_alg(alg);
    auto f = open_csv(out, "spectra_" + sanitize(alg) + ".csv");
    f << "omega_dt,xi,rho,xibar,pe\n";
    for (double xi : xis) {
        double hi = omega_max;
        if (hi <= 0.0) {
            const auto os = spectral::stability_limit(tbl, xi);
            hi = os ? *os : 5.0;
        }
        for (int i = 1; i <= points; ++i) {
            const double Om = hi * static_cast<double>(i) / points;
            const auto s = spectral::sample(tbl, Om, xi);
            f << fmt(s.Omega) << ',' << fmt(s.xi) << ',' << fmt(s.rho) << ',';
            if (s.xibar) f << fmt(*s.xibar);
            f << ',';
            if (s.pe) f << fmt(*s.pe);
            f << '\n';
        }
    }
    write_gnuplot(out, "spectra_" + sanitize(alg) + ".gp",
                  "set xlabel 'omega*dt'\nplot 'spectra_" + sanitize(alg) +
                      ".csv' using 1:3 with lines title 'rho'\n");
    std::cout << "spectra: wrote " << (out / ("spectra_" + sanitize(alg) + ".csv"))
              << "\n";
    return 0;
}

int cmd_stability(const std::vector<std::string>& algs, double xi_max, int points,
                  const fs::path& out) {
    for (const auto& a : algs) {
        const auto tbl = parse_alg(a);
        std::vector<double> grid;
        for (int i = 0; i <= points; ++i)
            grid.push_back(xi_max * static_cast<double>(i) / points);
        const auto dom = spectral::stability_domain(tbl, grid);
        auto f = open_csv(out, "stability_" + sanitize(a) + ".csv");
        f << "xi,omega_s\n";
        for (std::size_t i = 0; i < dom.xi_grid.size(); ++i)
            f << fmt(dom.xi_grid[i]) << ',' << fmt(dom.omega_s[i]) << '\n';
        std::cout << "stability: wrote stability_" << sanitize(a) << ".csv\n";
    }
    write_gnuplot(out, "stability.gp",
                  "set xlabel 'xi'\nset ylabel 'Omega_s'\n"
                  "plot for [f in system('ls stability_*.csv')] f using 1:2 "
                  "with lines title f\n");
    return 0;
}

int cmd_converge(const std::string& problem, const std::vector<std::string>& algs,
                 int points, const fs::path& out) {
    problems::SdofKind kind;
    if (problem == "forced-undamped") kind = problems::SdofKind::ForcedUndamped;
    else if (problem == "forced-damped") kind = problems::SdofKind::ForcedDamped;
    else if (problem == "free-undamped") kind = problems::SdofKind::FreeUndamped;
    else if (problem == "free-damped") kind = problems::SdofKind::FreeDamped;
    else throw Error("unknown problem '" + problem + "'");
    const auto prob = problems::sdof_case(kind);

    std::cout << "convergence on " << prob.name << " (T = " << prob.T << ")\n";
    std::cout << "algorithm        slope_u   slope_v   slope_a\n";
    for (const auto& a : algs) {
        const auto tbl = parse_alg(a);
        const auto dts = accuracy::default_ladder(tbl, prob, points);
        const auto res = accuracy::convergence_study(tbl, prob, dts);
        auto f = open_csv(out,
                          "converge_" + problem + "_" + sanitize(a) + ".csv");
        f << "dt,err_u,err_v,err_a\n";
        for (std::size_t i = 0; i < res.dts.size(); ++i) {
            f << fmt(res.dts[i]) << ',' << fmt(res.errors_u[i]) << ','
              << fmt(res.errors_v[i]) << ',';
            if (!res.errors_a.empty()) f << fmt(res.errors_a[i]);
            f << '\n';
        }
        std::printf("%-16s %8.3f  %8.3f  ", tbl.name.c_str(), res.slope_u,
                    res.slope_v);
        if (res.slope_a) std::printf("%8.3f", *res.slope_a);
        else std::printf("     ---");
        if (res.diverged) std::printf("   [diverged]");
        std::printf("\n");
    }
    write_gnuplot(out, "converge_" + problem + ".gp",
                  "set logscale xy\nset xlabel 'dt'\nset ylabel 'global error'\n"
                  "plot for [f in system('ls converge_" + problem +
                      "_*.csv')] f using 1:2 with linespoints title f\n");
    return 0;
}

void write_trajectory(std::ofstream& f, const Trajectory& traj, int stride,
                      const std::vector<int>& nodes) {
    f << "t,node,u,v\n";
    for (std::size_t i = 0; i < traj.size(); i += static_cast<std::size_t>(stride)) {
        const auto& s = traj[i];
        for (int n : nodes)
            f << fmt(s.t) << ',' << n << ',' << fmt(s.u[n]) << ',' << fmt(s.v[n])
              << '\n';
    }
}

int cmd_simulate(const std::string& problem, const std::string& alg, double dt,
                 double T, double eps, int max_iter, double mu, double amp,
                 double omega_p, int stride, bool reference, const fs::path& out) {
    const auto tbl = parse_alg(alg);

    std::optional<problems::SdofKind> sdof_kind;
    if (problem.rfind("sdof:", 0) == 0) {
        const std::string c = problem.substr(5);
        if (c == "free-undamped") sdof_kind = problems::SdofKind::FreeUndamped;
        else if (c == "free-damped") sdof_kind = problems::SdofKind::FreeDamped;
        else if (c == "forced-undamped") sdof_kind = problems::SdofKind::ForcedUndamped;
        else if (c == "forced-damped") sdof_kind = problems::SdofKind::ForcedDamped;
        else throw Error("unknown SDOF case '" + c + "'");
    } else if (problem != "vdp" && problem != "pendulum") {
        throw Error("unknown problem '" + problem + "'");
    }

    SecondOrderSystem sys =
        sdof_kind ? problems::to_system(problems::sdof_case(*sdof_kind))
                  : (problem == "vdp" ? problems::van_der_pol(mu, amp, omega_p)
                                      : problems::spring_pendulum());

    State s0;
    if (problem == "pendulum") {
        s0 = problems::spring_pendulum_initial_state(sys);
    } else if (problem == "vdp") {
        s0 = initial_state(sys, VectorXd::Zero(1), VectorXd::Zero(1), 0.0);
    } else {
        const auto pc = problems::sdof_case(*sdof_kind);
        s0 = initial_state(sys, VectorXd::Constant(1, pc.u0),
                           VectorXd::Constant(1, pc.v0), 0.0);
    }

    NewtonOptions opts{eps, max_iter};
    const auto traj = integrate(tbl, sys, s0, dt, T, opts);
    std::vector<int> nodes(static_cast<std::size_t>(sys.dim()));
    for (int i = 0; i < sys.dim(); ++i) nodes[static_cast<std::size_t>(i)] = i;
    auto f = open_csv(out, "simulate_" + sanitize(problem) + "_" + sanitize(alg) + ".csv");
    write_trajectory(f, traj, stride, nodes);

    if (reference) {
        const auto ref = rk4_reference(sys, s0, dt / 100.0, T, 100 * stride);
        auto g = open_csv(out, "simulate_" + sanitize(problem) + "_rk4.csv");
        write_trajectory(g, ref, 1, nodes);
    }
    write_gnuplot(out, "simulate_" + sanitize(problem) + ".gp",
                  "set xlabel 't'\nplot 'simulate_" + sanitize(problem) + "_" +
                      sanitize(alg) + ".csv' using 1:3 with lines title 'u'\n");
    std::cout << "simulate: " << traj.size() << " stored states\n";
    return 0;
}

int cmd_wave1d(int n_elem, double r, const std::string& alg, double cfl,
               bool use_cfl, double t_mult, const fs::path& out) {
    const auto tbl = parse_alg(alg);
    const auto fp = problems::rod_assembly(n_elem, r);
    const double wmax = problems::max_natural_frequency(fp);
    double dt;
    if (use_cfl) {
        dt = cfl * fp.dx / fp.c0;
    } else {
        const double Ob = spectral::max_dissipation_point(tbl, 0.0);
        dt = Ob / wmax;
    }
    const double t_front = 10.0 / fp.c0;  // wave arrival at the midpoint
    const double T = t_mult * t_front;

    const auto sys = problems::to_system(fp);
    const State s0 = initial_state(sys, VectorXd::Zero(sys.dim()),
                                   VectorXd::Zero(sys.dim()), 0.0);
    const auto traj = integrate(tbl, sys, s0, dt, T);

    const int mid = fp.midpoint_dof;
    auto f = open_csv(out, "wave1d_" + sanitize(alg) + ".csv");
    write_trajectory(f, traj, 1, {mid});

    // metrics against the semidiscrete oracle plateau
    const problems::ModalOracle oracle(fp);
    auto g = open_csv(out, "wave1d_oracle.csv");
    g << "t,node,u,v\n";
    std::vector<double> times, values;
    double plateau_sum = 0.0;
    int plateau_count = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj[i].t;
        const auto ex = oracle.evaluate(t);
        g << fmt(t) << ',' << mid << ',' << fmt(ex.u[mid]) << ',' << fmt(ex.v[mid])
          << '\n';
        times.push_back(t);
        values.push_back(traj[i].v[mid]);
        if (t >= 1.1 * t_front && t <= 2.5 * t_front) {
            plateau_sum += ex.v[mid];
            ++plateau_count;
        }
    }
    if (plateau_count > 0) {
        const double plateau = plateau_sum / plateau_count;
        const auto m = problems::dissipation_metric(times, values, 1.1 * t_front,
                                                    2.5 * t_front, plateau);
        std::cout << tbl.name << ": dt = " << fmt(dt)
                  << ", post-front velocity TV = " << fmt(m.total_variation)
                  << ", overshoot = " << fmt(m.overshoot) << "\n";
    }
    write_gnuplot(out, "wave1d_" + sanitize(alg) + ".gp",
                  "set xlabel 't'\nplot 'wave1d_" + sanitize(alg) +
                      ".csv' using 1:4 with lines title 'v mid', "
                      "'wave1d_oracle.csv' using 1:4 with lines title 'oracle'\n");
    return 0;
}

int cmd_wave2d(int n_side, double r, double alpha_k, double alpha_m, double cfl,
               double t_end, const std::string& alg, const fs::path& out) {
    const auto tbl = parse_alg(alg);
    const auto fp = problems::membrane_quarter(n_side, 1.0, r, alpha_k, alpha_m);
    const double dt = cfl * fp.dx / fp.c0;

    const auto sys = problems::to_system(fp);
    const State s0 = initial_state(sys, VectorXd::Zero(sys.dim()),
                                   VectorXd::Zero(sys.dim()), 0.0);
    const auto traj = integrate(tbl, sys, s0, dt, t_end);
    const auto& last = traj.back();

    const auto& grid = *fp.grid;
    auto f = open_csv(out, "wave2d_" + sanitize(alg) + ".csv");
    f << "t,node,u,v\n";
    for (int d = 0; d < sys.dim(); ++d)
        f << fmt(last.t) << ',' << d << ',' << fmt(last.u[d]) << ','
          << fmt(last.v[d]) << '\n';

    auto g = open_csv(out, "wave2d_profiles_" + sanitize(alg) + ".csv");
    g << "ray,radius,u,v\n";
    for (auto ray : {problems::Ray::Axis, problems::Ray::Diagonal}) {
        const auto pu = problems::radial_profile(grid, last.u, ray);
        const auto pv = problems::radial_profile(grid, last.v, ray);
        for (std::size_t i = 0; i < pu.size(); ++i)
            g << (ray == problems::Ray::Axis ? "axis" : "diagonal") << ','
              << fmt(pu[i].first) << ',' << fmt(pu[i].second) << ','
              << fmt(pv[i].second) << '\n';
    }
    std::cout << tbl.name << ": displacement anisotropy = "
              << fmt(problems::profile_anisotropy(grid, last.u))
              << ", velocity anisotropy = "
              << fmt(problems::profile_anisotropy(grid, last.v)) << "\n";
    write_gnuplot(out, "wave2d_" + sanitize(alg) + ".gp",
                  "set xlabel 'radius'\nplot 'wave2d_profiles_" + sanitize(alg) +
                      ".csv' using 2:3 with linespoints title 'u'\n");
    return 0;
}

int cmd_audit(const std::string& alg) {
    const auto tbl = parse_alg(alg);
    std::cout << "algorithm: " << tbl.name << "\n";
    std::cout << "p = " << fmt(tbl.p) << "\nalpha =";
    for (double a : tbl.alpha) std::cout << ' ' << fmt(a);
    std::cout << "\nclassification: "
              << (tbl.fully_explicit()
                      ? "fully explicit"
                      : (tbl.velocity_implicit() ? "implicit treatment of velocity"
                                                 : "implicit"))
              << "\n";
    const auto res = identical_second_order_residuals(tbl);
    std::cout << "second-order identity residuals:";
    for (double x : res) std::cout << ' ' << fmt(x);
    std::cout << "\nclaimed orders (undamped u/v/a, damped u/v/a): "
              << tbl.orders_undamped.disp << ' ' << tbl.orders_undamped.vel << ' '
              << (tbl.accel_output ? std::to_string(tbl.orders_undamped.acc) : "---")
              << ", " << tbl.orders_damped.disp << ' ' << tbl.orders_damped.vel
              << ' '
              << (tbl.accel_output ? std::to_string(tbl.orders_damped.acc) : "---")
              << "\n";
    const auto os = spectral::stability_limit(tbl, 0.0);
    std::cout << "Omega_s(xi=0) = " << (os ? fmt(*os) : "none") << "\n";
    const auto ob =
        os ? spectral::bifurcation_point(tbl, 0.0) : std::optional<double>{};
    std::cout << "Omega_b(xi=0) = " << (ob ? fmt(*ob) : "none") << "\n";
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"self-starting single-solve time integration toolkit"};
    app.set_config("--config", "", "key-value config file (TOML); command-line "
                                   "flags override file values");
    app.require_subcommand(0, 1);

    std::string out_flag;
    app.add_option("-o,--out", out_flag,
                   "output directory (default: $SSTI_OUT_ROOT or ./out)");

    auto* sp = app.add_subcommand("spectra",
                                  "spectral radius / damping / period error curves");
    std::string sp_alg = "new2";
    std::vector<double> sp_xi{0.0};
    int sp_points = 400;
    double sp_omax = 0.0;
    sp->add_option("--alg", sp_alg, "algorithm spec name[:rho_b[:rho_s]]");
    sp->add_option("--xi", sp_xi, "damping ratios");
    sp->add_option("--points", sp_points, "samples per curve");
    sp->add_option("--omega-max", sp_omax, "upper Omega (0: stability limit)");

    auto* st = app.add_subcommand("stability", "conditional stability domains");
    std::vector<std::string> st_algs{"new1", "new2", "ne"};
    double st_ximax = 0.95;
    int st_points = 40;
    st->add_option("--algs", st_algs, "algorithms")->delimiter(',');
    st->add_option("--xi-max", st_ximax, "largest damping ratio");
    st->add_option("--points", st_points, "grid points");

    auto* cv = app.add_subcommand("converge", "convergence-rate study");
    std::string cv_problem = "forced-undamped";
    std::vector<std::string> cv_algs{"new1", "new2"};
    int cv_points = 6;
    cv->add_option("--problem", cv_problem,
                   "free-undamped|free-damped|forced-undamped|forced-damped");
    cv->add_option("--algs", cv_algs, "algorithms")->delimiter(',');
    cv->add_option("--points", cv_points, "ladder length");

    auto* si = app.add_subcommand("simulate", "time-domain simulation");
    std::string si_problem = "vdp", si_alg = "new2";
    double si_dt = 0.005, si_T = 30.0, si_eps = 1e-10;
    int si_maxit = 30, si_stride = 1;
    double si_mu = 5.0, si_amp = 5.0, si_omega_p = 2.5;
    bool si_ref = false;
    si->add_option("--problem", si_problem, "vdp|pendulum|sdof:<case>");
    si->add_option("--alg", si_alg, "algorithm");
    si->add_option("--dt", si_dt, "time step");
    si->add_option("--T", si_T, "end time");
    si->add_option("--eps", si_eps, "Newton tolerance");
    si->add_option("--max-iter", si_maxit, "Newton iteration cap");
    si->add_option("--stride", si_stride, "output thinning stride");
    si->add_option("--mu", si_mu, "Van der Pol mu");
    si->add_option("--amp", si_amp, "Van der Pol forcing amplitude");
    si->add_option("--omega-p", si_omega_p, "Van der Pol forcing frequency");
    si->add_flag("--reference", si_ref, "also write an RK4 reference run");

    auto* w1 = app.add_subcommand("wave1d", "rod impact wave test");
    int w1_nelem = 100;
    double w1_r = 0.5, w1_cfl = 0.5, w1_tmult = 3.0;
    std::string w1_alg = "new1", w1_rule = "bifurcation";
    w1->add_option("--n-elem", w1_nelem, "element count");
    w1->add_option("--r", w1_r, "mass weighting");
    w1->add_option("--alg", w1_alg, "algorithm");
    w1->add_option("--dt-rule", w1_rule, "bifurcation|cfl");
    w1->add_option("--cfl", w1_cfl, "CFL number (dt-rule = cfl)");
    w1->add_option("--t-mult", w1_tmult, "end time in front-arrival multiples");

    auto* w2 = app.add_subcommand("wave2d", "center-loaded membrane test");
    int w2_nside = 60;
    double w2_r = 0.5, w2_ak = 0.57735026918962576, w2_am = 0.57735026918962576,
           w2_cfl = 0.5, w2_tend = 6.25;
    std::string w2_alg = "new1";
    w2->add_option("--n-side", w2_nside, "full-domain elements per side (even)");
    w2->add_option("--r", w2_r, "mass weighting");
    w2->add_option("--alpha-k", w2_ak, "stiffness quadrature point");
    w2->add_option("--alpha-m", w2_am, "mass quadrature point");
    w2->add_option("--cfl", w2_cfl, "CFL number");
    w2->add_option("--t-end", w2_tend, "report time");
    w2->add_option("--alg", w2_alg, "algorithm");

    auto* au = app.add_subcommand(
        "audit", "table audit: order conditions, classification, stability");
    std::string au_alg = "ne";
    au->add_option("--alg", au_alg, "algorithm");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const fs::path out = output_root(out_flag);
    try {
        if (sp->parsed()) return cmd_spectra(sp_alg, sp_xi, sp_points, sp_omax, out);
        if (st->parsed()) return cmd_stability(st_algs, st_ximax, st_points, out);
        if (cv->parsed()) return cmd_converge(cv_problem, cv_algs, cv_points, out);
        if (si->parsed())
            return cmd_simulate(si_problem, si_alg, si_dt, si_T, si_eps, si_maxit,
                                si_mu, si_amp, si_omega_p, si_stride, si_ref, out);
        if (w1->parsed())
            return cmd_wave1d(w1_nelem, w1_r, w1_alg, w1_cfl, w1_rule == "cfl",
                              w1_tmult, out);
        if (w2->parsed())
            return cmd_wave2d(w2_nside, w2_r, w2_ak, w2_am, w2_cfl, w2_tend,
                              w2_alg, out);
        if (au->parsed()) return cmd_audit(au_alg);
        std::cout << app.help();
        return 0;
    } catch (const IntegrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ssti::cli
