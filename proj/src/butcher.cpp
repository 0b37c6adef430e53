#include "ssti/butcher.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ssti {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check_range(std::string_view name, double lo, double rb) {
    if (!(rb >= lo && rb <= 1.0)) {
        std::ostringstream os;
        os << name << ": rho_b = " << rb << " outside [" << lo << ", 1]";
        fail(os.str());
    }
}

void check_spurious(std::string_view name, double rb, double rs) {
    if (!(std::abs(rs) <= rb)) {
        std::ostringstream os;
        os << name << ": requires |rho_s| <= rho_b, got rho_s = " << rs
           << ", rho_b = " << rb;
        fail(os.str());
    }
}

void no_params(std::string_view name, const std::optional<double>& rb,
               const std::optional<double>& rs) {
    if (rb || rs) fail(std::string(name) + ": takes no dissipation parameters");
}

ButcherTable make(std::string name, double p, std::array<double, 10> al,
                  AccuracyOrders undamped, AccuracyOrders damped) {
    ButcherTable t;
    t.name = std::move(name);
    t.p = p;
    t.alpha = al;
    t.orders_undamped = undamped;
    t.orders_damped = damped;
    for (double x : al)
        if (!std::isfinite(x)) fail(t.name + ": non-finite table entry");
    if (!std::isfinite(p)) fail(t.name + ": non-finite stage offset");
    return t;
}

// p and beta shared by the GSSE/GSSI pair.
double gss_p(double rb, double rs) {
    return -(rb * rs - rs - 2.0) / ((rs + 1.0) * (rb + 1.0));
}

double gss_beta(double rb, double rs) {
    const double num = 2.0 * (1.0 - rb) * rb * rs * rs * rs +
                       (1.0 - rb) * (rb * rb + 6.0 * rb - 1.0) * rs * rs +
                       2.0 * (1.0 - 5.0 * rb) * rs + 2.0 * (1.0 - rb);
    const double d = rb * rs - rs - 2.0;
    return num / (2.0 * (rs + 1.0) * (rb + 1.0) * d * d);
}

ButcherTable make_gss(bool velocity_implicit, double rb, double rs) {
    const double p = gss_p(rb, rs);
    const double beta = gss_beta(rb, rs);
    std::array<double, 10> al{};
    al[0] = p * p / 2.0;
    al[1] = 0.0;
    al[2] = velocity_implicit ? p / 2.0 : p;
    al[3] = velocity_implicit ? p / 2.0 : 0.0;
    al[4] = 0.5 - beta;
    al[5] = beta;
    al[6] = 1.0 - 1.0 / (2.0 * p);
    al[7] = 1.0 / (2.0 * p);
    al[8] = 1.0 - 1.0 / p;
    al[9] = 1.0 / p;
    auto t = make(velocity_implicit ? "GSSI" : "GSSE", p, al, {2, 2, 2}, {2, 2, 2});
    t.rho_b = rb;
    t.rho_s = rs;
    return t;
}

// EWBZ-alpha / EG-alpha shared parameters.
double wbz_alpha_m(double rb, double rs) {
    return (2.0 * rb * rs + rb - 1.0) / ((rs + 1.0) * (rb + 1.0));
}

// Defining relations of the explicit GSSSS member, closed under the
// normalization W1 = 1, eta3 = 1 (the products are otherwise coupled).
ButcherTable make_egsssss(double rb, double r3b) {
    const double den = (1.0 + rb) * (1.0 + r3b);
    const double p = (2.0 + r3b - r3b * rb) / den;
    const double f2 = (5.0 + 3.0 * r3b + rb - r3b * rb) / (2.0 * den);
    if (std::abs(f2 - p - 0.5) > 1e-12)
        throw std::runtime_error("E-GSSSS: defining relations inconsistent");
    const double L6 = p;
    const double d2 = r3b * rb - r3b - 2.0;
    const double f3 =
        d2 * (2.0 * d2 - L6 * (r3b * rb - 3.0 * r3b - rb - 5.0)) /
            (2.0 * L6 * L6 * (1.0 + r3b) * (1.0 + r3b) * (1.0 + rb) * (1.0 + rb)) -
        (5.0 + 3.0 * rb + r3b * (1.0 - rb) * (4.0 + r3b + 2.0 * rb)) /
            (d2 * (1.0 + r3b) * (1.0 + rb) * (1.0 + rb));
    if (!std::isfinite(f3) || p <= 0.0)
        throw std::runtime_error("E-GSSSS: construction failed");
    const double a1 = p * p / 2.0;
    const double lam3 = f3 - a1;
    const double a6 = lam3 / L6;
    std::array<double, 10> al{};
    al[0] = a1;
    al[2] = p;
    al[4] = 0.5 - a6;
    al[5] = a6;
    al[6] = 1.0 - 1.0 / (2.0 * p);
    al[7] = 1.0 / (2.0 * p);
    al[8] = 1.0 - 1.0 / p;
    al[9] = 1.0 / p;
    auto t = make("E-GSSSS", p, al, {2, 2, 2}, {2, 2, 2});
    t.rho_b = rb;
    t.rho_s = r3b;
    const auto res = identical_second_order_residuals(t);
    for (double r : res)
        if (std::abs(r) > 1e-12)
            throw std::runtime_error("E-GSSSS: order conditions violated");
    return t;
}

}  // namespace

bool ButcherTable::claims_identical_second_order() const {
    if (!accel_output) return false;
    const auto ge2 = [](const AccuracyOrders& o) {
        return o.disp >= 2 && o.vel >= 2 && o.acc >= 2;
    };
    return ge2(orders_undamped) && ge2(orders_damped);
}

std::array<double, 6> identical_second_order_residuals(const ButcherTable& t) {
    const double p = t.p;
    return {t.a(3) + t.a(4) - p,
            t.a(5) + t.a(6) - 0.5,
            t.a(7) + t.a(8) - 1.0,
            t.a(9) + t.a(10) - 1.0,
            t.a(8) - 1.0 / (2.0 * p),
            t.a(10) - 1.0 / p};
}

std::array<double, 4> disp_vel_second_order_residuals(const ButcherTable& t) {
    const double p = t.p;
    const double a3 = t.a(3), a4 = t.a(4), a5 = t.a(5), a6 = t.a(6);
    const double a7 = t.a(7), a8 = t.a(8), a9 = t.a(9), a10 = t.a(10);
    return {1.0 - a7 * a10 + a8 * a9 - a8 - a9,
            (2.0 * a7 * a4 + 2.0 * a3 + a7) * a10 +
                (2.0 * (1.0 - a9) * a4 - a9 + 3.0) * a8 + 2.0 * a9 - 4.0,
            (p * a9 - p - 1.0) * a8 + (a6 - 1.0) * a9 - (p * a7 + a5) * a10 -
                a6 + 2.0,
            (2.0 * p - 1.0) * a9 - 2.0 * p - 2.0 * a8 + 3.0};
}

ButcherTable new_algorithm(int which) {
    if (which != 1 && which != 2) fail("new_algorithm: which must be 1 or 2");
    const double p = (3.0 + kSqrt3) / 6.0;
    std::array<double, 10> al{};
    al[0] = p * p / 2.0;
    al[1] = 0.0;
    if (which == 1) {
        al[2] = p;
        al[3] = 0.0;
    } else {
        al[2] = (12.0 * p * p - 6.0 * p + 1.0) / (12.0 * p);
        al[3] = (6.0 * p - 1.0) / (12.0 * p);
    }
    al[4] = (6.0 * p * p - 1.0) / (12.0 * p);
    al[5] = (-6.0 * p * p + 6.0 * p + 1.0) / (12.0 * p);
    al[6] = (2.0 * p - 1.0) / (2.0 * p);
    al[7] = 1.0 / (2.0 * p);
    al[8] = (p - 1.0) / p;
    al[9] = 1.0 / p;
    const AccuracyOrders undamped{3, 3, 2};
    const AccuracyOrders damped = (which == 1) ? AccuracyOrders{2, 2, 2}
                                               : AccuracyOrders{3, 3, 2};
    return make(which == 1 ? "New1" : "New2", p, al, undamped, damped);
}

ButcherTable table(std::string_view name, std::optional<double> rho_b,
                   std::optional<double> rho_s) {
    std::string id(name);
    for (auto& c : id) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    if (id == "new1") { no_params(name, rho_b, rho_s); return new_algorithm(1); }
    if (id == "new2") { no_params(name, rho_b, rho_s); return new_algorithm(2); }

    if (id == "ne") {
        no_params(name, rho_b, rho_s);
        return make("NE", 1.0,
                    {0.5, 0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.0, 1.0},
                    {2, 2, 2}, {2, 2, 2});
    }
    if (id == "nt") {
        no_params(name, rho_b, rho_s);
        return make("NT", 0.5,
                    {0.0, 0.0, 0.0, 0.5, 0.0, 0.5, 0.0, 1.0, 0.0, 1.0},
                    {2, 2, 1}, {2, 2, 1});
    }
    if (id == "tw") {
        if (rho_s) fail("TW: takes rho_b only");
        const double rb = rho_b.value_or(1.0);
        check_range("TW", 0.0, rb);
        const double g = 2.0 / (rb + 1.0);
        auto t = make("TW", 1.0, {g, 0.0, 1.0, 0.0, g, 0.0, 1.0, 0.0, 0.0, 1.0},
                      {1, 1, 1}, {1, 1, 1});
        t.rho_b = rb;
        return t;
    }
    if (id == "enb" || id == "en-beta") {
        if (rho_s) fail("EN-beta: takes rho_b only");
        const double rb = rho_b.value_or(1.0);
        check_range("EN-beta", 0.0, rb);
        const double g = (3.0 * rb - 1.0) / (2.0 * (rb + 1.0));
        const double h = (3.0 - rb) / (2.0 * (rb + 1.0));
        const double beta = 0.0;  // free Newmark-style weight; explicit member
        auto t = make("EN-beta", 0.0,
                      {0.0, 0.0, g, 0.0, 0.5 - beta, beta, g, h, 0.0, 1.0},
                      {1, 1, 1}, {1, 1, 1});
        t.rho_b = rb;
        return t;
    }
    if (id == "edv1" || id == "tsse") {
        if (rho_s) fail(std::string(name) + ": takes rho_b only");
        const double rb = rho_b.value_or(1.0);
        const bool edv = (id == "edv1");
        check_range(edv ? "EDV1" : "TSSE", 0.0, rb);
        const double a1 = (3.0 - rb) / (2.0 * (rb + 1.0));
        // Both carry the stage acceleration forward; EDV1 does not expose it.
        auto t = make(edv ? "EDV1" : "TSSE", 1.0,
                      {a1, 0.0, 0.0, 0.0, 0.0, 0.5, 1.0, 0.0, 0.0, 1.0},
                      edv ? AccuracyOrders{1, 1, -1} : AccuracyOrders{1, 1, 1},
                      edv ? AccuracyOrders{1, 1, -1} : AccuracyOrders{1, 1, 1});
        t.rho_b = rb;
        t.accel_output = !edv;
        return t;
    }
    if (id == "ehht" || id == "ehht-alpha") {
        if (rho_s) fail("EHHT-alpha: takes rho_b only");
        const double rb = rho_b.value_or(1.0);
        check_range("EHHT-alpha", 0.5, rb);
        const double q = rb + 1.0;
        auto t = make("EHHT-alpha", 2.0 * rb / q,
                      {(rb * rb + 2.0 * rb - 1.0) * rb / (q * q * q), 0.0,
                       rb * (3.0 * rb - 1.0) / (q * q), 0.0,
                       (rb * rb + 2.0 * rb - 1.0) / (2.0 * q * q),
                       1.0 / (q * q),
                       (3.0 * rb - 1.0) / (2.0 * q), (3.0 - rb) / (2.0 * q),
                       0.0, 1.0},
                      {2, 2, 1}, {1, 1, 1});
        t.rho_b = rb;
        return t;
    }
    if (id == "cl") {
        if (rho_s) fail("CL: takes rho_b only");
        const double rb = rho_b.value_or(1.0);
        check_range("CL", 0.5, rb);
        const double q = rb + 1.0;
        auto t = make("CL", 0.0,
                      {0.0, 0.0, 0.0, 0.0,
                       (rb * rb * rb - 5.0 * rb * rb - 3.0 * rb - 1.0) /
                           (2.0 * q * q * q),
                       (4.0 * rb * rb + 3.0 * rb + 1.0) / (q * q * q),
                       -0.5, 1.5, 0.0, 1.0},
                      {2, 2, 1}, {2, 2, 1});
        t.rho_b = rb;
        return t;
    }
    if (id == "icl") {
        if (rho_s) fail("ICL: takes rho_b only");
        const double rb = rho_b.value_or(1.0);
        check_range("ICL", 0.5, rb);
        const double q = rb + 1.0;
        auto t = make("ICL", 1.0,
                      {0.5, 0.0, 1.0, 0.0,
                       (3.0 * rb + 1.0) * (rb * rb + 1.0) / (2.0 * q * q * q),
                       rb * rb * (1.0 - rb) / (q * q * q),
                       0.5, 0.5, 0.0, 1.0},
                      {2, 2, 2}, {2, 2, 2});
        t.rho_b = rb;
        return t;
    }
    if (id == "ewbz" || id == "ewbz-alpha") {
        const double rb = rho_b.value_or(1.0);
        const double rs = rho_s.value_or(0.0);
        check_range("EWBZ-alpha", 0.0, rb);
        check_spurious("EWBZ-alpha", rb, rs);
        const double am = wbz_alpha_m(rb, rs);
        const double beta =
            ((rb - 1.0) * rs * rs + 2.0 * (rb * rb + rb - 2.0) * rs - 3.0 * rb - 5.0) /
            ((rb * rs - rs - 2.0) * (rs + 1.0) * (rb + 1.0) * (rb + 1.0));
        auto t = make("EWBZ-alpha", 0.0,
                      {0.0, 0.0, 0.0, 0.0,
                       (2.0 * beta + am - 1.0) / (2.0 * (am - 1.0)),
                       beta / (1.0 - am),
                       1.0 / (2.0 * (am - 1.0)),
                       (2.0 * am - 3.0) / (2.0 * (am - 1.0)),
                       am / (am - 1.0), 1.0 / (1.0 - am)},
                      {2, 2, 1}, {2, 2, 1});
        t.rho_b = rb;
        t.rho_s = rs;
        return t;
    }
    if (id == "ega" || id == "eg-alpha") {
        const double rb = rho_b.value_or(1.0);
        const double rs = rho_s.value_or(0.0);
        check_range("EG-alpha", 0.0, rb);
        check_spurious("EG-alpha", rb, rs);
        const double am = wbz_alpha_m(rb, rs);
        const double d1 = 3.0 * rb * rs + rb - rs - 3.0;
        const double d2 = rb * rs - rs - 2.0;
        const double beta =
            (std::pow(rb - 1.0, 3.0) * rs * rs +
             (rb * rb - rb * rb * rb + 13.0 * rb - 5.0) * rs + 2.0 * rb * rb - 10.0) /
            (2.0 * (rb + 1.0) * d1 * d2);
        const double p = 1.5 - am;
        auto t = make("EG-alpha", p,
                      {(0.5 - beta) * p, 0.0, p, 0.0,
                       (2.0 * beta + am - 1.0) / (2.0 * (am - 1.0)),
                       beta / (1.0 - am),
                       1.0, 0.0,
                       am / (am - 1.0), 1.0 / (1.0 - am)},
                      {2, 2, 1}, {2, 2, 1});
        t.rho_b = rb;
        t.rho_s = rs;
        return t;
    }
    if (id == "egsssss" || id == "egssss" || id == "e-gsssss" || id == "e-gssss") {
        const double rb = rho_b.value_or(1.0);
        const double r3b = rho_s.value_or(0.0);
        check_range("E-GSSSS", 0.0, rb);
        check_spurious("E-GSSSS", rb, r3b);
        return make_egsssss(rb, r3b);
    }
    if (id == "gsse" || id == "gssi") {
        const double rb = rho_b.value_or(1.0);
        const double rs = rho_s.value_or(0.0);
        check_range(id == "gsse" ? "GSSE" : "GSSI", 0.0, rb);
        check_spurious(id == "gsse" ? "GSSE" : "GSSI", rb, rs);
        return make_gss(id == "gssi", rb, rs);
    }

    fail("unknown algorithm '" + std::string(name) + "'");
}

ButcherTable most_dissipative(std::string_view name) {
    std::string id(name);
    for (auto& c : id) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (id == "new1" || id == "new2" || id == "ne" || id == "nt")
        return table(id);
    if (id == "cl" || id == "icl" || id == "ehht" || id == "ehht-alpha")
        return table(id, 0.5);
    return table(id, 0.0, 0.0);
}

std::vector<std::string> registry_names() {
    return {"ne",   "nt",   "tw",  "enb",  "edv1",   "tsse", "ehht", "cl",
            "icl",  "ewbz", "ega", "egsssss", "gsse", "gssi", "new1", "new2"};
}

}  // namespace ssti
