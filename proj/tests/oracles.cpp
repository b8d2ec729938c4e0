#include "oracles.hpp"

#include <cmath>

namespace oracle {

using mm::pi;

static const double lanczos_g = 7.0;
static const double lanczos_c[9] = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

cplx ln_gamma_lanczos(cplx z) {
    if (z.real() < 0.5) {
        // reflection
        return std::log(pi / std::sin(pi * z)) - ln_gamma_lanczos(1.0 - z);
    }
    z -= 1.0;
    cplx a = lanczos_c[0];
    for (int i = 1; i < 9; ++i) a += lanczos_c[i] / (z + static_cast<double>(i));
    cplx t = z + lanczos_g + 0.5;
    return 0.91893853320467274178 + (z + 0.5) * std::log(t) - t + std::log(a);
}

cplx gamma_lanczos(cplx z) { return std::exp(ln_gamma_lanczos(z)); }

double j0_series(double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 200; ++k) {
        term *= -0.25 * x * x / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) && 2 * k > x) break;
    }
    return sum;
}

double k0_series(double x) {
    const double euler_gamma = 0.57721566490153286060651209008240;
    double term = 1.0, harmonic = 0.0, sum = -(std::log(0.5 * x) + euler_gamma);
    for (int k = 1; k <= 200; ++k) {
        term *= 0.25 * x * x / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        sum += term * (harmonic - std::log(0.5 * x) - euler_gamma);
        if (term < 1e-18 && 2 * k > x) break;
    }
    return sum;
}

namespace {

// composite Simpson
template <class F>
double simpson(F&& f, double a, double b, int n) {
    if (n % 2) ++n;
    double h = (b - a) / n, acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

struct Ph {
    double x, pm;
    bool ch; // true: g = cosh, false: g = sinh
    double g(double z) const { return ch ? std::cosh(z) : std::sinh(z); }
    double g1(double z) const { return ch ? std::sinh(z) : std::cosh(z); }
    double phi(double z) const { return x * g(z) + pm * z; }
    double d1(double z) const { return x * g1(z) + pm; }
    double d2(double z) const { return x * g(z); }
    double d3(double z) const { return x * g1(z); }
};

// int_A^inf cos(phi) dz after integrating by parts twice (phi' > 0, growing)
double tail_cos(const Ph& P, double A) {
    auto w_over = [&](double z) { return P.d2(z) / (P.d1(z) * P.d1(z) * P.d1(z)); };
    auto dw_over = [&](double z) {
        double p1 = P.d1(z), p2 = P.d2(z), p3 = P.d3(z);
        return p3 / (p1 * p1 * p1) - 3.0 * p2 * p2 / (p1 * p1 * p1 * p1);
    };
    double boundary = -std::sin(P.phi(A)) / P.d1(A) + std::cos(P.phi(A)) * w_over(A);
    auto rest = [&](double z) { return std::cos(P.phi(z)) * dw_over(z); };
    return boundary + simpson(rest, A, A + 45.0, 200000);
}

double kernel(const Ph& base, double t) {
    auto P_of = [&](double s) {
        Ph P = base;
        P.pm = s * 2.0 * std::abs(t);
        double zs = 0.0;
        if (P.pm < 0.0) {
            double r = -P.pm / P.x;
            zs = P.ch ? std::asinh(r) : (r > 1.0 ? std::acosh(r) : 0.0);
        }
        double A = zs + 1.0;
        double var = std::abs(P.phi(A) - P.phi(zs)) + std::abs(P.phi(zs) - P.phi(0.0));
        int n = 4000 + static_cast<int>(400.0 * var);
        auto f = [&](double z) { return std::cos(P.phi(z)); };
        return simpson(f, 0.0, A, n) + tail_cos(P, A);
    };
    double plus = P_of(1.0);
    double minus = (t == 0.0) ? plus : P_of(-1.0);
    return 0.5 * (plus + minus);
}

} // namespace

double kernel_cos_cosh(double t, double x) { return kernel(Ph{x, 0.0, true}, t); }
double kernel_cos_sinh(double t, double x) { return kernel(Ph{x, 0.0, false}, t); }

} // namespace oracle
