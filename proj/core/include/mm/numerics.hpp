#ifndef MM_NUMERICS_HPP
#define MM_NUMERICS_HPP

#include <complex>
#include <functional>
#include <vector>

namespace mm {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

// e(x) = exp(2*pi*i*x), the additive character used throughout.
inline cplx e_of(double x) {
    double a = two_pi * x;
    return {std::cos(a), std::sin(a)};
}
inline cplx e_of(cplx x) { return std::exp(cplx(0.0, two_pi) * x); }

namespace quad {

struct GaussLegendre {
    std::vector<double> x, w; // nodes/weights on [-1, 1]
};

// Cached rule of size n (computed once by Newton iteration on P_n).
const GaussLegendre& gl(int n);

template <class F>
auto gl_panel(F&& f, double a, double b, int n) {
    const auto& r = gl(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto acc = f(mid + half * r.x[0]) * (half * r.w[0]);
    for (std::size_t i = 1; i < r.x.size(); ++i)
        acc += f(mid + half * r.x[i]) * (half * r.w[i]);
    return acc;
}

namespace detail {
inline double err_norm(double v) { return std::abs(v); }
inline double err_norm(cplx v) { return std::abs(v); }

template <class F, class R>
void adaptive_rec(F& f, double a, double b, double tol, int depth, R& total, double& err_acc) {
    R coarse = gl_panel(f, a, b, 16);
    R fine = gl_panel(f, a, 0.5 * (a + b), 16) + gl_panel(f, 0.5 * (a + b), b, 16);
    double err = err_norm(fine - coarse);
    if (err < tol || depth <= 0) {
        total += fine;
        err_acc += err;
        return;
    }
    adaptive_rec(f, a, 0.5 * (a + b), 0.5 * tol, depth - 1, total, err_acc);
    adaptive_rec(f, 0.5 * (a + b), b, 0.5 * tol, depth - 1, total, err_acc);
}
} // namespace detail

// Adaptive Gauss-Legendre on [a,b] to absolute tolerance abs_tol.
// err_out, when given, receives the accumulated local error estimate.
template <class F>
auto adaptive(F&& f, double a, double b, double abs_tol, int depth_max = 30,
              double* err_out = nullptr) {
    using R = decltype(f(a) * 1.0);
    R total = R{};
    double err = 0.0;
    if (a != b) detail::adaptive_rec(f, a, b, abs_tol, depth_max, total, err);
    if (err_out) *err_out = err;
    return total;
}

// Double-exponential (tanh-sinh) rule on a finite panel.  Robust for
// integrands with mild endpoint trouble; spectrally accurate for smooth ones.
template <class F>
auto tanh_sinh(F&& f, double a, double b, int level = 7) {
    using R = decltype(f(a) * 1.0);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const int n = 12 << (level - 3); // nodes per side, t in [-3, 3]
    const double h = 3.0 / n;
    R sum = R{};
    for (int k = -n; k <= n; ++k) {
        double t = k * h;
        double sh = 0.5 * pi * std::sinh(t);
        double x = std::tanh(sh);
        double ch = std::cosh(sh);
        double w = 0.5 * pi * std::cosh(t) / (ch * ch);
        double y = mid + half * x;
        if (y <= a || y >= b) continue;
        sum += f(y) * (w * half * h);
    }
    return sum;
}

// Iterated averaging (Euler-type) of the partial sums of a series whose
// terms eventually alternate; returns the accelerated limit.
double alternating_accel(const std::vector<double>& terms, double* err_out = nullptr);

// in-place radix-2 FFT, a.size() a power of two; sign -1 forward e^{-2pi i kn/N}
void fft_pow2(std::vector<cplx>& a, int sign);

// tail of  ∫_a^∞ trig(phi(z)) dz  where phi is smooth, strictly increasing, with
// phi' nondecreasing on [a, ∞) (caller splits at the last stationary point).
// trig: 0 = cos, 1 = sin.  Sums half-wave panels and accelerates.
double oscillatory_tail(const std::function<double(double)>& phi,
                        const std::function<double(double)>& dphi,
                        double a, int trig, double abs_tol);

} // namespace quad

// Natural cubic spline on an increasing grid.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> xs, std::vector<double> ys);
    double operator()(double x) const;
    double x_min() const { return xs_.front(); }
    double x_max() const { return xs_.back(); }

  private:
    std::vector<double> xs_, ys_, m_; // m_ = second derivatives
};

} // namespace mm

#endif
