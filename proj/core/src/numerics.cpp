#include "mm/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mm {
namespace quad {

static GaussLegendre make_gl(int n) {
    // Newton iteration on Legendre P_n, symmetric nodes.
    GaussLegendre r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p1 = 0, dp = 0;
        for (int it = 0; it < 100; ++it) {
            p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
            }
            dp = n * (x * p1 - p2) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

const GaussLegendre& gl(int n) {
    static std::map<int, GaussLegendre> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gl(n)).first;
    return it->second;
}

double alternating_accel(const std::vector<double>& terms, double* err_out) {
    if (terms.empty()) {
        if (err_out) *err_out = 0.0;
        return 0.0;
    }
    std::vector<double> s(terms.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        acc += terms[i];
        s[i] = acc;
    }
    double prev = s.back(), best = s.back();
    while (s.size() > 1) {
        for (std::size_t i = 0; i + 1 < s.size(); ++i) s[i] = 0.5 * (s[i] + s[i + 1]);
        s.pop_back();
        prev = best;
        best = s.back();
    }
    if (err_out) *err_out = std::abs(best - prev);
    return best;
}

double oscillatory_tail(const std::function<double(double)>& phi,
                        const std::function<double(double)>& dphi,
                        double a, int trig, double abs_tol) {
    auto f = [&](double z) {
        double p = phi(z);
        return trig == 0 ? std::cos(p) : std::sin(p);
    };
    // advance to the next phase level phi(a) + k*pi by Newton with bisection guard
    auto next_node = [&](double z0, double target) {
        double z = z0, lo = z0, hi = z0;
        double step = std::max(1e-3, (target - phi(z0)) / std::max(dphi(z0), 1e-30));
        hi = z0 + 2.0 * step;
        while (phi(hi) < target) {
            lo = hi;
            hi += 2.0 * (hi - z0) + 1e-3;
            if (hi > z0 + 1e6) throw std::runtime_error("oscillatory_tail: phase stalls");
        }
        z = 0.5 * (lo + hi);
        for (int it = 0; it < 80; ++it) {
            double g = phi(z) - target;
            if (g > 0) hi = z; else lo = z;
            double d = dphi(z);
            double zn = (d > 0) ? z - g / d : 0.5 * (lo + hi);
            if (!(zn > lo && zn < hi)) zn = 0.5 * (lo + hi);
            if (std::abs(zn - z) < 1e-14 * (1.0 + std::abs(z))) { z = zn; break; }
            z = zn;
        }
        return z;
    };

    const int max_panels = 168;
    std::vector<double> panels;
    panels.reserve(max_panels);
    double z_lo = a;
    double base = phi(a);
    double est_prev = 0.0, est = 0.0, err = 0.0;
    for (int k = 1; k <= max_panels; ++k) {
        double z_hi = next_node(z_lo, base + k * pi);
        panels.push_back(quad::gl_panel(f, z_lo, z_hi, 16));
        z_lo = z_hi;
        if (k >= 48 && k % 8 == 0) {
            est_prev = est;
            est = alternating_accel(panels, &err);
            if (k > 48 && std::abs(est - est_prev) < 0.25 * abs_tol && err < 0.25 * abs_tol)
                return est;
        }
    }
    return alternating_accel(panels, &err);
}

void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_pow2: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * two_pi / static_cast<double>(len);
        cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j], v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

} // namespace quad

CubicSpline::CubicSpline(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    const std::size_t n = xs_.size();
    if (n < 3 || ys_.size() != n) throw std::invalid_argument("CubicSpline: bad grid");
    m_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double sig = (xs_[i] - xs_[i - 1]) / (xs_[i + 1] - xs_[i - 1]);
        double p = sig * m_[i - 1] + 2.0;
        m_[i] = (sig - 1.0) / p;
        u[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]) -
               (ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1]);
        u[i] = (6.0 * u[i] / (xs_[i + 1] - xs_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t i = n - 1; i-- > 0;) m_[i] = m_[i] * m_[i + 1] + u[i];
}

double CubicSpline::operator()(double x) const {
    std::size_t lo = 0, hi = xs_.size() - 1;
    if (x <= xs_.front()) hi = 1;
    else if (x >= xs_.back()) lo = hi - 1;
    else {
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (xs_[mid] > x ? hi : lo) = mid;
        }
    }
    double h = xs_[hi] - xs_[lo];
    double a = (xs_[hi] - x) / h, b = (x - xs_[lo]) / h;
    return a * ys_[lo] + b * ys_[hi] +
           ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
}

} // namespace mm
