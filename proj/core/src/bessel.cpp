#include "mm/bessel.hpp"

#include "mm/errors.hpp"
#include "mm/special.hpp"

#include <cmath>
#include <functional>

namespace mm::special {

namespace {

// phase x*g(z) + pm*z with g in {cosh, sinh}
struct Phase {
    double x;
    double pm;
    bool use_cosh;

    double g(double z) const { return use_cosh ? std::cosh(z) : std::sinh(z); }
    double dg(double z) const { return use_cosh ? std::sinh(z) : std::cosh(z); }
    double phi(double z) const { return x * g(z) + pm * z; }
    double dphi(double z) const { return x * dg(z) + pm; }
};

// int_0^inf trig(phi(z)) dz for the phases above.  Direct panel quadrature up
// to one unit past the last stationary point, accelerated half-wave panels on
// the monotone remainder.
double phase_integral(const Phase& P, int trig, double abs_tol, double* err_out) {
    double zstar = 0.0;
    if (P.pm < 0.0) {
        double r = -P.pm / P.x;
        zstar = P.use_cosh ? std::asinh(r) : (r > 1.0 ? std::acosh(r) : 0.0);
    }
    const double b = zstar + 1.0;

    auto f = [&](double z) {
        double p = P.phi(z);
        return trig == 0 ? std::cos(p) : std::sin(p);
    };

    // total phase variation on [0,b]; phi' changes sign at most once
    double var = std::abs(P.phi(b) - P.phi(zstar)) + std::abs(P.phi(zstar) - P.phi(0.0));
    int n = static_cast<int>(var / 2.5) + 6;
    auto panels = [&](int count) {
        double acc = 0.0;
        double h = b / count;
        for (int i = 0; i < count; ++i) acc += quad::gl_panel(f, i * h, (i + 1) * h, 16);
        return acc;
    };
    double direct = panels(n);
    double direct_fine = panels((3 * n) / 2 + 1);
    double direct_err = std::abs(direct_fine - direct);
    if (direct_err > 0.25 * abs_tol) {
        direct = direct_fine;
        direct_fine = panels(3 * n);
        direct_err = std::abs(direct_fine - direct);
    }

    double tail = quad::oscillatory_tail([&](double z) { return P.phi(z); },
                                         [&](double z) { return P.dphi(z); }, b, trig,
                                         0.5 * abs_tol);
    if (err_out) *err_out = direct_err + 0.5 * abs_tol;
    return direct_fine + tail;
}

double kernel_integral(bool use_cosh, int trig, double t, double x, double abs_tol,
                       double* err_out) {
    if (!(x > 0.0)) throw std::domain_error("bessel kernel: x must be positive");
    double w = 2.0 * std::abs(t);
    double e1 = 0.0, e2 = 0.0;
    double plus = phase_integral({x, w, use_cosh}, trig, 0.5 * abs_tol, &e1);
    double minus = w == 0.0 ? plus : phase_integral({x, -w, use_cosh}, trig, 0.5 * abs_tol, &e2);
    if (err_out) *err_out = 0.5 * (e1 + e2);
    return 0.5 * (plus + minus);
}

} // namespace

double bessel_cc(double t, double x, double abs_tol, double* err_out) {
    return kernel_integral(true, 0, t, x, abs_tol, err_out);
}

double bessel_cs(double t, double x, double abs_tol, double* err_out) {
    return kernel_integral(true, 1, t, x, abs_tol, err_out);
}

double bessel_kbar(double t, double x, double abs_tol, double* err_out) {
    return kernel_integral(false, 0, t, x, abs_tol, err_out);
}

cplx bessel_J_series(double t, double x, double* err_out) {
    if (!(x > 0.0)) throw std::domain_error("bessel_J_series: x must be positive");
    if (x + pi * std::abs(t) > 690.0)
        throw accuracy_error("bessel_J_series: magnitude overflows double range", INFINITY);
    const double L = std::log(0.5 * x);
    const cplx two_it(0.0, 2.0 * t);
    cplx sum = 0.0;
    double max_abs = 0.0;
    double lg_k1 = 0.0; // ln k!
    int k = 0;
    for (; k <= 500; ++k) {
        cplx term = std::exp(cplx(2.0 * k * L - lg_k1, 0.0) + two_it * L -
                             ln_gamma(cplx(k + 1.0) + two_it));
        if (k & 1) term = -term;
        sum += term;
        double a = std::abs(term);
        max_abs = std::max(max_abs, a);
        if (a < 1e-17 * max_abs && 2.0 * k > x) break;
        lg_k1 += std::log(k + 1.0);
    }
    double est = 4e-16 * max_abs * std::sqrt(static_cast<double>(k + 1));
    if (err_out) *err_out = est;
    return sum;
}

cplx bessel_J_integral(double t, double x, double* err_out) {
    double e1 = 0.0, e2 = 0.0;
    double cs = bessel_cs(t, x, 1e-13, &e1);
    double cc = bessel_cc(t, x, 1e-13, &e2);
    double ch = std::cosh(pi * t), sh = std::sinh(pi * t);
    if (err_out) *err_out = (2.0 / pi) * (ch * (e1 + 1e-15) + std::abs(sh) * (e2 + 1e-15));
    return (2.0 / pi) * cplx(ch * cs, -sh * cc);
}

cplx bessel_J_imag_order(double t, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_J_imag_order: x must be positive");
    // target: 1e-9 absolute, relaxed to relative once |J| itself is large
    auto ok = [](cplx v, double est) { return est <= 1e-9 * std::max(1.0, std::abs(v)); };
    double est_s = INFINITY, est_i = INFINITY;
    cplx vs, vi;
    if (x <= 30.0) {
        vs = bessel_J_series(t, x, &est_s);
        if (ok(vs, est_s)) return vs;
    }
    vi = bessel_J_integral(t, x, &est_i);
    if (ok(vi, est_i)) return vi;
    if (est_s <= est_i) {
        throw accuracy_error("bessel_J_imag_order: cannot reach 1e-9 at this (t,x)", est_s);
    }
    throw accuracy_error("bessel_J_imag_order: cannot reach 1e-9 at this (t,x)", est_i);
}

cplx bessel_J_combined(double t, double x) {
    if (t == 0.0) return 0.0;
    double cc = bessel_cc(t, x);
    return cplx(0.0, -(4.0 / pi) * std::tanh(pi * t) * cc);
}

double bessel_K_imag_order(double t, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_K_imag_order: x must be positive");
    double est = 0.0;
    double kb = bessel_kbar(t, x, 1e-12, &est);
    double ch = std::cosh(pi * t);
    if (est / ch > 1e-9)
        throw accuracy_error("bessel_K_imag_order: accuracy not met", est / ch);
    return kb / ch;
}

double bessel_K_via_I(double t, double x, double* err_out) {
    if (!(x > 0.0)) throw std::domain_error("bessel_K_via_I: x must be positive");
    t = std::abs(t); // K_{2it} is even in t
    if (x > 60.0 || 2.0 * pi * t > 690.0)
        throw accuracy_error("bessel_K_via_I: series route out of range", INFINITY);
    const double L = std::log(0.5 * x);
    double est;
    double value;
    if (t == 0.0) {
        // K_0(x) = sum (x^2/4)^k / (k!)^2 (psi(k+1) - log(x/2)), psi(k+1) = -gamma + H_k
        const double euler_gamma = 0.57721566490153286060651209008240;
        double sum = 0.0, term = 1.0, harmonic = 0.0, max_abs = 1.0;
        for (int k = 0; k <= 400; ++k) {
            double contrib = term * (-euler_gamma + harmonic - L);
            sum += contrib;
            max_abs = std::max(max_abs, std::abs(contrib));
            if (std::abs(contrib) < 1e-18 * max_abs && 2.0 * k > x) break;
            term *= 0.25 * x * x / ((k + 1.0) * (k + 1.0));
            harmonic += 1.0 / (k + 1.0);
        }
        value = sum;
        est = 2e-16 * max_abs;
    } else {
        const cplx two_it(0.0, 2.0 * t);
        double im_sum = 0.0, max_abs = 0.0, lg_k1 = 0.0;
        for (int k = 0; k <= 400; ++k) {
            cplx term = std::exp(cplx(2.0 * k * L - lg_k1, 0.0) + two_it * L -
                                 ln_gamma(cplx(k + 1.0) + two_it));
            im_sum += term.imag();
            double a = std::abs(term);
            max_abs = std::max(max_abs, a);
            if (a < 1e-18 * max_abs && 2.0 * k > x) break;
            lg_k1 += std::log(k + 1.0);
        }
        double sh = std::sinh(2.0 * pi * t);
        value = -pi * im_sum / sh;
        est = pi * 4e-16 * max_abs / sh;
    }
    if (err_out) *err_out = est;
    return value;
}

} // namespace mm::special
