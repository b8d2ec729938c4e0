#include "mm/transforms.hpp"

#include "mm/arith.hpp"
#include "mm/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace mm::transforms {

using special::GammaKind;
using special::LanglandsParams;
using special::ln_gamma;

// ---------------------------------------------------------------------------
// test functions and Mellin machinery
// ---------------------------------------------------------------------------

TestFn bump_on(double X) {
    if (!(X > 0.0)) throw std::domain_error("bump_on: X must be positive");
    TestFn t;
    t.lo = X;
    t.hi = 2.0 * X;
    t.f = [X](double y) {
        double w = 2.0 * (y - 1.5 * X) / X;
        if (std::abs(w) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - w * w));
    };
    return t;
}

cplx mellin(const TestFn& psi, cplx w) {
    const double osc = std::abs(w.imag()) * std::log(psi.hi / psi.lo) / two_pi;
    int panels = std::max(10, static_cast<int>(3.0 * osc) + 2);
    auto integrand = [&](double y) { return psi(y) * std::exp((w - 1.0) * std::log(y)); };
    auto run = [&](int n) {
        cplx acc = 0.0;
        double h = (psi.hi - psi.lo) / n;
        for (int i = 0; i < n; ++i)
            acc += quad::gl_panel(integrand, psi.lo + i * h, psi.lo + (i + 1) * h, 16);
        return acc;
    };
    cplx a = run(panels), b = run((3 * panels) / 2 + 1);
    if (std::abs(a - b) > 1e-11 * (1.0 + std::abs(b))) {
        cplx cfine = run(3 * panels);
        if (std::abs(b - cfine) > 1e-10 * (1.0 + std::abs(cfine)))
            throw accuracy_error("mellin: panel refinement not converging",
                                 std::abs(b - cfine));
        return cfine;
    }
    return b;
}

double mellin_invert(const TestFn& psi, double y, double sigma, double height) {
    // fixed Mellin panelization reused across the line (same device as the
    // Psi tables); node cost is then a plain Fourier sum
    int panels = std::max(24, static_cast<int>(height * std::log(psi.hi / psi.lo) / 4.0) + 8);
    std::vector<double> ly, pw;
    const auto& r = quad::gl(16);
    double h = (psi.hi - psi.lo) / panels;
    for (int i = 0; i < panels; ++i) {
        double a = psi.lo + i * h, mid = a + 0.5 * h, half = 0.5 * h;
        for (std::size_t q = 0; q < r.x.size(); ++q) {
            double yy = mid + half * r.x[q];
            double v = psi(yy) * std::pow(yy, sigma - 1.0) * half * r.w[q];
            if (v != 0.0) {
                ly.push_back(std::log(yy));
                pw.push_back(v);
            }
        }
    }
    auto integrand = [&](double tau) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < ly.size(); ++i)
            acc += pw[i] * std::exp(cplx(0.0, tau * ly[i]));
        return (acc * std::exp(cplx(0.0, -tau * std::log(y)))).real() * std::pow(y, -sigma);
    };
    return quad::adaptive(integrand, -height, height, 1e-9) / two_pi;
}

// ---------------------------------------------------------------------------
// AFE transform tables
// ---------------------------------------------------------------------------

ContourSpec ContourSpec::for_afe(double y_max, double t, double sigma) {
    ContourSpec s;
    s.abscissa = sigma;
    s.height_cut = 12.0;
    double omega = std::abs(std::log(std::max(2.0, y_max))) +
                   3.0 * std::log(2.0 + std::abs(t)) + 4.0;
    s.nodes_per_unit = std::max(24, static_cast<int>(0.6 * omega) + 8);
    return s;
}

namespace {

bool near_gamma_pole(cplx z, double tol = 1e-6) {
    return z.real() < 0.25 && std::abs(z.imag()) < tol &&
           std::abs(z.real() - std::round(z.real())) < tol;
}

// log of gamma_kind(1/2 + u, t) / gamma_minus(1/2, t)
struct AfeRatio {
    double k; // -1 for minus kind, +1 for plus
    double t;
    std::array<cplx, 3> lam;
    cplx den_sum;

    AfeRatio(const special::GammaFactorKind& kind) {
        k = (kind.sign == GammaKind::minus) ? -1.0 : 1.0;
        t = kind.t;
        lam = {kind.params.alpha, kind.params.beta, kind.params.gamma};
        den_sum = 0.0;
        for (const cplx& l : lam) {
            for (double eps : {1.0, -1.0}) {
                cplx a = 0.5 * (0.5 - l + eps * cplx(0.0, t));
                if (near_gamma_pole(a))
                    throw pole_error("afe transform: gamma_-(1/2, t) at a pole");
                den_sum += ln_gamma(a);
            }
        }
    }

    cplx log_ratio(cplx u) const {
        cplx acc = -3.0 * u * 1.1447298858494001741434273513531 - den_sum;
        for (const cplx& l : lam) {
            for (double eps : {1.0, -1.0}) {
                cplx a = 0.5 * (0.5 + u + k * l + eps * cplx(0.0, t));
                if (near_gamma_pole(a))
                    throw pole_error("afe transform: contour passes through a gamma pole");
                acc += ln_gamma(a);
            }
        }
        return acc;
    }
};

} // namespace

AfeTransformTable::AfeTransformTable(const special::GammaFactorKind& kind, int u_power,
                                     int mollifier_A, ContourSpec spec)
    : spec_(spec) {
    if (!(spec.abscissa > 0.0) || !(spec.abscissa < 0.5 * mollifier_A))
        throw std::domain_error("AfeTransformTable: abscissa must lie in (0, A/2)");
    if (spec.height_cut < 10.0)
        throw std::domain_error("AfeTransformTable: height_cut below the 1e-12 threshold");
    AfeRatio ratio(kind);
    const int N = static_cast<int>(spec.height_cut * spec.nodes_per_unit);
    step_ = spec.height_cut / N;
    weights_.resize(2 * N + 1);
    for (int j = 0; j <= 2 * N; ++j) {
        cplx u(spec.abscissa, (j - N) * step_);
        cplx upow = (u_power == 1) ? u : u * u;
        cplx w = special::mollifier_F(u, mollifier_A) * std::exp(ratio.log_ratio(u)) / upow;
        w *= step_ / two_pi;
        if (j == 0 || j == 2 * N) w *= 0.5;
        weights_[j] = w;
    }
}

cplx AfeTransformTable::node(int j) const {
    const int N = (size() - 1) / 2;
    return cplx(spec_.abscissa, (j - N) * step_);
}

cplx AfeTransformTable::value(double y) const {
    const int N = (size() - 1) / 2;
    const double L = std::log(y);
    cplx z = std::exp(cplx(0.0, -step_ * L));
    cplx zj = std::exp(cplx(-spec_.abscissa * L, N * step_ * L));
    cplx acc = 0.0;
    for (const cplx& w : weights_) {
        acc += w * zj;
        zj *= z;
    }
    return acc;
}

cplx AfeTransformTable::value_coarse(double y) const {
    const int N = (size() - 1) / 2;
    const double L = std::log(y);
    cplx z = std::exp(cplx(0.0, -2.0 * step_ * L));
    cplx zj = std::exp(cplx(-spec_.abscissa * L, N * step_ * L));
    cplx acc = 0.0;
    for (int j = 0; j < size(); j += 2) {
        acc += weights_[j] * (2.0 * zj);
        zj *= z;
    }
    return acc;
}

namespace {

cplx afe_transform(double y, double t, GammaKind sign, const LanglandsParams& params,
                   const ContourSpec& spec, int u_power, int A, double tol) {
    if (!(y > 0.0)) throw std::domain_error("afe transform: y must be positive");
    special::GammaFactorKind kind{sign, t, params};
    AfeTransformTable table(kind, u_power, A, spec);
    cplx fine = table.value(y);
    cplx coarse = table.value_coarse(y);
    if (std::abs(fine - coarse) > tol * (1.0 + std::abs(fine)))
        throw accuracy_error("afe transform: node-doubling estimate above tolerance",
                             std::abs(fine - coarse));
    return fine;
}

} // namespace

cplx afe_transform_V(double y, double t, GammaKind sign, const LanglandsParams& params,
                     const ContourSpec& spec, int A, double tol) {
    return afe_transform(y, t, sign, params, spec, 1, A, tol);
}

cplx afe_transform_U(double y, double t, GammaKind sign, const LanglandsParams& params,
                     const ContourSpec& spec, int A, double tol) {
    return afe_transform(y, t, sign, params, spec, 2, A, tol);
}

// ---------------------------------------------------------------------------
// Psi transforms
// ---------------------------------------------------------------------------

double psi_sigma_floor(const LanglandsParams& p) {
    return std::max({-1.0 - p.alpha.real(), -1.0 - p.beta.real(), -1.0 - p.gamma.real()});
}

double psi_sigma_effective_floor(const LanglandsParams& p) {
    // Candidate poles of gamma_ell sit at s = -1 - lambda - ell - 2k.  A pole is
    // cancelled when some denominator argument (-s - lambda' + ell)/2 is a
    // nonpositive integer there.  The scan covers everything right of -0.95.
    const cplx lam[3] = {p.alpha, p.beta, p.gamma};
    double floor_eff = -0.95;
    for (int ell = 0; ell <= 1; ++ell) {
        for (const cplx& l : lam) {
            for (int k = 0;; ++k) {
                cplx s = -1.0 - l - static_cast<double>(ell + 2 * k);
                if (s.real() < -0.95) break;
                bool cancelled = false;
                for (const cplx& l2 : lam) {
                    cplx den = 0.5 * (-s - l2 + static_cast<double>(ell));
                    if (std::abs(den.imag()) < 1e-12 && den.real() < 0.25 &&
                        std::abs(den.real() - std::round(den.real())) < 1e-12)
                        cancelled = true;
                }
                if (!cancelled) floor_eff = std::max(floor_eff, s.real());
            }
        }
    }
    return floor_eff;
}

PsiTransform::PsiTransform(const LanglandsParams& params, int sign, const TestFn& psi,
                           double x_max, double sigma, double tol, bool strict_grid) {
    if (sigma <= psi_sigma_effective_floor(params) + 0.02)
        throw std::domain_error("PsiTransform: abscissa below the pole floor");
    sigma_ = sigma;
    const double edge_tol = std::clamp(tol * 1e-2, 1e-13, 1e-7);

    // Height: past both the stationary-phase region (~2pi (x y)^{1/3}) and the
    // point where the bump's subexponential Mellin decay (~e^{-0.57 sqrt(tau)})
    // beats the tau^{3 sigma + 3/2} growth of gamma^{pm}.  The decay height is
    // found by extension; it is capped where psi~ meets the double-precision
    // noise floor, which is why callers keep sigma small.
    double tau_star = two_pi * std::cbrt(std::max(1.0, x_max * psi.hi));
    double H = std::max(1.3 * tau_star + 120.0, 1500.0);

    for (int attempt = 0;; ++attempt) {
        double omega = std::log(std::max(2.0, x_max)) + 3.0 * std::log(2.0 + H / two_pi) +
                       std::abs(std::log(psi.hi)) + 4.0;
        // trapezoid resolution from the phase rate and the accuracy goal
        // (analyticity strip ~ 1/2); the stride-2 grid provides the check
        int npu = std::max(10, static_cast<int>((omega - 2.0 * std::log(edge_tol)) / two_pi) + 3);
        if (strict_grid) npu *= 2;
        const int N = static_cast<int>(H * npu);
        step_ = H / N;

        // psi~(-sigma - i tau_j) on the whole node grid by one FFT of
        // g(l) = psi(e^l) e^{-sigma l}:  psi~ = int g(l) e^{-i tau l} dl
        const double l0 = std::log(psi.lo);
        const double span = two_pi / step_;
        double dl_req = pi / (1.05 * H);
        std::size_t M = 1;
        while (span / static_cast<double>(M) > dl_req) M <<= 1;
        const double dl = span / static_cast<double>(M);
        std::vector<cplx> g(M, cplx(0.0));
        for (std::size_t m = 0; m < M; ++m) {
            double l = l0 + m * dl;
            if (l >= std::log(psi.hi)) break;
            double y = std::exp(l);
            g[m] = psi(y) * std::exp(-sigma * l);
        }
        quad::fft_pow2(g, -1); // g[q] = sum_m g_m e^{-2pi i q m / M}

        auto mellin_at = [&](long long j) {
            // tau_j = j * step; e^{-i tau_j l0} * dl * G[j mod M]
            long long q = ((j % static_cast<long long>(M)) + static_cast<long long>(M)) %
                          static_cast<long long>(M);
            return dl * g[static_cast<std::size_t>(q)] *
                   std::exp(cplx(0.0, -static_cast<double>(j) * step_ * l0));
        };

        std::vector<cplx> w(2 * N + 1);
        double peak = 0.0;
        for (int j = 0; j <= 2 * N; ++j) {
            double tau = (j - N) * step_;
            cplx s(sigma, tau);
            // identity-side combination gamma_0 -+ i gamma_1 (the odd part of
            // the additive-twist functional equation carries the i; it drops
            // out whenever the two signs appear symmetrically, e.g. c <= 2)
            cplx gam;
            if (sign == 0) gam = special::voronoi_gamma_ell(s, 0, params);
            else
                gam = special::voronoi_gamma_ell(s, 0, params) -
                      static_cast<double>(sign) * cplx(0.0, 1.0) *
                          special::voronoi_gamma_ell(s, 1, params);
            w[j] = gam * mellin_at(j - N) * (step_ / two_pi);
            peak = std::max(peak, std::abs(w[j]));
        }
        double edge = std::max(std::abs(w.front()), std::abs(w.back()));
        if (edge <= edge_tol * peak || peak == 0.0) {
            // trim the negligible flanks; keep the window symmetric so the
            // coarse (stride 2) grid stays aligned
            const double trim = std::max(1e-18, edge_tol * 1e-5);
            int lo = 0, hi = 2 * N;
            while (lo < N && std::abs(w[lo]) < trim * peak &&
                   std::abs(w[2 * N - lo]) < trim * peak)
                ++lo;
            lo = (lo / 2) * 2; // even offset keeps parity of the coarse grid
            hi = 2 * N - lo;
            tau_lo_ = (lo - N) * step_;
            weights_.assign(w.begin() + lo, w.begin() + hi + 1);
            break;
        }
        if (attempt >= 4)
            throw accuracy_error("PsiTransform: height cut still insufficient (abscissa "
                                 "likely too high for the psi~ noise floor)",
                                 edge / peak);
        H *= 1.6;
    }
}

cplx PsiTransform::value(double x) const {
    const double L = std::log(x);
    const double zr = std::cos(step_ * L), zi = -std::sin(step_ * L);
    double ar = 0.0, ai = 0.0, jr = 0.0, ji = 0.0;
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        if ((j & 4095u) == 0) {
            cplx anchor = std::exp(cplx(-sigma_ * L, -(tau_lo_ + j * step_) * L));
            jr = anchor.real();
            ji = anchor.imag();
        }
        const cplx& w = weights_[j];
        ar += w.real() * jr - w.imag() * ji;
        ai += w.real() * ji + w.imag() * jr;
        double nr = jr * zr - ji * zi;
        ji = jr * zi + ji * zr;
        jr = nr;
    }
    return {ar, ai};
}

void PsiTransform::value_batch(const double* xs, int count, cplx* out) const {
    constexpr int kLanes = 8;
    for (int base = 0; base < count; base += kLanes) {
        int lanes = std::min(kLanes, count - base);
        double L[kLanes], zr[kLanes], zi[kLanes], jr[kLanes], ji[kLanes];
        double ar[kLanes] = {0}, ai[kLanes] = {0};
        for (int l = 0; l < lanes; ++l) {
            L[l] = std::log(xs[base + l]);
            zr[l] = std::cos(step_ * L[l]);
            zi[l] = -std::sin(step_ * L[l]);
        }
        for (std::size_t j = 0; j < weights_.size(); ++j) {
            if ((j & 4095u) == 0) {
                for (int l = 0; l < lanes; ++l) {
                    cplx anchor =
                        std::exp(cplx(-sigma_ * L[l], -(tau_lo_ + j * step_) * L[l]));
                    jr[l] = anchor.real();
                    ji[l] = anchor.imag();
                }
            }
            const double wr = weights_[j].real(), wi = weights_[j].imag();
            for (int l = 0; l < lanes; ++l) {
                ar[l] += wr * jr[l] - wi * ji[l];
                ai[l] += wr * ji[l] + wi * jr[l];
                double nr = jr[l] * zr[l] - ji[l] * zi[l];
                ji[l] = jr[l] * zi[l] + ji[l] * zr[l];
                jr[l] = nr;
            }
        }
        for (int l = 0; l < lanes; ++l) out[base + l] = cplx(ar[l], ai[l]);
    }
}

cplx PsiTransform::value_coarse(double x) const {
    const double L = std::log(x);
    cplx z = std::exp(cplx(0.0, -2.0 * step_ * L));
    cplx zj = std::exp(cplx(-sigma_ * L, -tau_lo_ * L));
    cplx acc = 0.0;
    for (std::size_t j = 0; j < weights_.size(); j += 2) {
        acc += weights_[j] * (2.0 * zj);
        zj *= z;
    }
    return acc;
}

cplx voronoi_psi_exact(double x, const LanglandsParams& params, const TestFn& psi, int sign,
                       double sigma, double tol) {
    if (!(x > 0.0)) throw std::domain_error("voronoi_psi_exact: x must be positive");
    PsiTransform tr(params, sign, psi, x, sigma, tol, /*strict_grid=*/true);
    cplx fine = tr.value(x), coarse = tr.value_coarse(x);
    if (std::abs(fine - coarse) > tol * (1.0 + std::abs(fine)))
        throw accuracy_error("voronoi_psi_exact: node-doubling estimate above tolerance",
                             std::abs(fine - coarse));
    return fine;
}

// ---------------------------------------------------------------------------
// oscillatory quadrature and stationary phase
// ---------------------------------------------------------------------------

cplx oscillatory_quadrature(const std::function<double(double)>& phase,
                            const std::function<double(double)>& amplitude, double a,
                            double b, double abs_tol) {
    auto f = [&](double y) { return amplitude(y) * e_of(phase(y)); };
    return quad::adaptive(f, a, b, abs_tol);
}

OscIntegralResult stationary_phase(const PhaseFn& phase,
                                   const std::function<double(double)>& amplitude,
                                   double a, double b, double tol, double degenerate_tol) {
    OscIntegralResult res;
    const int grid = 1024;
    const double h = (b - a) / grid;

    // scan phi' for sign changes; also collect amplitude statistics
    double min_abs_d1 = INFINITY, max_amp = 0.0, tv_amp = 0.0;
    double prev_d1 = phase.d1(a), prev_amp = amplitude(a);
    for (int i = 1; i <= grid; ++i) {
        double y = a + i * h;
        double d1 = phase.d1(y), amp = amplitude(y);
        min_abs_d1 = std::min(min_abs_d1, std::abs(d1));
        max_amp = std::max(max_amp, std::abs(amp));
        tv_amp += std::abs(amp - prev_amp);
        if ((prev_d1 < 0.0) != (d1 < 0.0) && (prev_d1 != 0.0 || d1 != 0.0)) {
            double lo = y - h, hi = y;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                ((phase.d1(mid) < 0.0) == (phase.d1(lo) < 0.0) ? lo : hi) = mid;
            }
            res.stationary_points.push_back(0.5 * (lo + hi));
        }
        prev_d1 = d1;
        prev_amp = amp;
    }

    if (res.stationary_points.empty()) {
        // first derivative test bound
        double bound = (max_amp + tv_amp) / (two_pi * std::max(min_abs_d1, 1e-300));
        if (bound < tol) {
            res.method = OscIntegralResult::Method::no_stationary_negligible;
            res.value = 0.0;
            res.error_estimate = bound;
            return res;
        }
        res.method = OscIntegralResult::Method::direct_quadrature;
        res.value = oscillatory_quadrature(phase.f, amplitude, a, b, 0.1 * tol);
        res.error_estimate = 0.2 * tol + max_amp * 1e-12;
        return res;
    }

    res.method = OscIntegralResult::Method::stationary_phase;
    // curvature scale over the support, for a scale-free degeneracy test
    double d2_scale = 0.0;
    for (int i = 0; i <= 64; ++i)
        d2_scale = std::max(d2_scale, std::abs(phase.d2(a + (b - a) * i / 64.0)));
    cplx main = 0.0;
    double err = 0.0;
    for (double y0 : res.stationary_points) {
        double d2 = phase.d2(y0);
        if (std::abs(d2) < degenerate_tol * d2_scale)
            throw std::domain_error("stationary_phase: degenerate stationary point");
        double sgn = d2 > 0.0 ? 1.0 : -1.0;
        cplx term = amplitude(y0) * e_of(phase.f(y0) + sgn / 8.0) / std::sqrt(std::abs(d2));
        main += term;
        // heuristic second-order error: scales like the inverse phase curvature
        double width = std::min(y0 - a, b - y0);
        double lam = std::abs(d2) * width * width;
        err += std::abs(term) * 2.5 / std::sqrt(1.0 + lam);
    }
    // boundary (first derivative test) contribution
    double d1a = std::abs(phase.d1(a)), d1b = std::abs(phase.d1(b));
    double d1min = std::max(std::min(d1a, d1b), 1e-300);
    err += (std::abs(amplitude(a)) + std::abs(amplitude(b))) / (two_pi * d1min);
    res.value = main;
    res.error_estimate = err;
    return res;
}

// ---------------------------------------------------------------------------
// calibration of the Psi asymptotic constants
// ---------------------------------------------------------------------------

namespace {

// I_j^{pm}(x) = int psi(y) e(pm 3 (xy)^{1/3}) (xy)^{-j/3} dy
cplx psi_model_integral(const TestFn& psi, double x, int j, int pm, double abs_tol) {
    auto phase = [&](double y) { return pm * 3.0 * std::cbrt(x * y); };
    auto amp = [&](double y) { return psi(y) * std::pow(x * y, -j / 3.0); };
    return oscillatory_quadrature(phase, amp, psi.lo, psi.hi, abs_tol);
}

// solve the 4x4 (or 2x2) hermitian normal equations by Gaussian elimination
std::vector<cplx> solve_dense(std::vector<std::vector<cplx>> A, std::vector<cplx> rhs) {
    const int n = static_cast<int>(rhs.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[piv], A[col]);
        std::swap(rhs[piv], rhs[col]);
        if (std::abs(A[col][col]) < 1e-300)
            throw std::runtime_error("calibration: singular normal equations");
        for (int r = col + 1; r < n; ++r) {
            cplx f = A[r][col] / A[col][col];
            for (int cc = col; cc < n; ++cc) A[r][cc] -= f * A[col][cc];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<cplx> x(n);
    for (int r = n - 1; r >= 0; --r) {
        cplx acc = rhs[r];
        for (int cc = r + 1; cc < n; ++cc) acc -= A[r][cc] * x[cc];
        x[r] = acc / A[r][r];
    }
    return x;
}

} // namespace

PsiCalibration calibrate_psi_constants(const LanglandsParams& params, int sign,
                                       const TestFn& psi, double xX_lo, double xX_hi,
                                       int grid) {
    const double X = psi.lo;
    const double x_hi = xX_hi / X;
    double sigma = std::max(-0.55, psi_sigma_effective_floor(params) + 0.3);
    PsiTransform tr(params, sign, psi, x_hi, sigma, 1e-9);

    PsiCalibration cal;
    cal.params = params;
    cal.sign = sign;
    cal.K = 2;

    std::vector<double> xs(grid);
    std::vector<cplx> exact(grid);
    for (int i = 0; i < grid; ++i) {
        double xX = xX_lo * std::pow(xX_hi / xX_lo, i / (grid - 1.0));
        xs[i] = xX / X;
        exact[i] = tr.value(xs[i]);
    }
    // design matrix: columns x*I_1^+, x*I_1^-, x*I_2^+, x*I_2^-
    const int cols = 4;
    std::vector<std::vector<cplx>> M(grid, std::vector<cplx>(cols));
    for (int i = 0; i < grid; ++i) {
        double scale = std::abs(exact[i]) * 1e-9 + 1e-30;
        M[i][0] = xs[i] * psi_model_integral(psi, xs[i], 1, +1, scale);
        M[i][1] = xs[i] * psi_model_integral(psi, xs[i], 1, -1, scale);
        M[i][2] = xs[i] * psi_model_integral(psi, xs[i], 2, +1, scale);
        M[i][3] = xs[i] * psi_model_integral(psi, xs[i], 2, -1, scale);
    }
    // weighted least squares: rows scaled by 1/|exact| so every decade counts
    std::vector<std::vector<cplx>> N(cols, std::vector<cplx>(cols, 0.0));
    std::vector<cplx> rhs(cols, 0.0);
    for (int i = 0; i < grid; ++i) {
        double wr = 1.0 / (std::abs(exact[i]) + 1e-30);
        for (int r = 0; r < cols; ++r) {
            rhs[r] += std::conj(M[i][r]) * exact[i] * (wr * wr);
            for (int cc = 0; cc < cols; ++cc)
                N[r][cc] += std::conj(M[i][r]) * M[i][cc] * (wr * wr);
        }
    }
    auto sol = solve_dense(std::move(N), std::move(rhs));
    cal.c = {sol[0], sol[2]};
    cal.d = {sol[1], sol[3]};

    double rss = 0.0;
    for (int i = 0; i < grid; ++i) {
        cplx model = sol[0] * M[i][0] + sol[1] * M[i][1] + sol[2] * M[i][2] + sol[3] * M[i][3];
        rss += std::norm((model - exact[i]) / (std::abs(exact[i]) + 1e-30));
    }
    cal.residual = std::sqrt(rss / grid);
    return cal;
}

cplx voronoi_psi_asymptotic(double x, const TestFn& psi, const PsiCalibration& cal, int K) {
    if (K < 1 || K > cal.K)
        throw calibration_error("voronoi_psi_asymptotic: constants not fitted to this K");
    if (!(x * psi.lo >= 10.0))
        throw std::domain_error("voronoi_psi_asymptotic: requires x*X >= 10");
    cplx acc = 0.0;
    for (int j = 1; j <= K; ++j) {
        double tol = 1e-12 * (std::abs(cal.c[j - 1]) + std::abs(cal.d[j - 1]) + 1.0);
        acc += cal.c[j - 1] * psi_model_integral(psi, x, j, +1, tol);
        acc += cal.d[j - 1] * psi_model_integral(psi, x, j, -1, tol);
    }
    return x * acc;
}

std::string PsiCalibration::to_json() const {
    nlohmann::json j;
    j["version"] = 1;
    j["params"] = {{"alpha", {params.alpha.real(), params.alpha.imag()}},
                   {"beta", {params.beta.real(), params.beta.imag()}},
                   {"gamma", {params.gamma.real(), params.gamma.imag()}}};
    j["sign"] = sign;
    j["K"] = K;
    j["c"] = {{c[0].real(), c[0].imag()}, {c[1].real(), c[1].imag()}};
    j["d"] = {{d[0].real(), d[0].imag()}, {d[1].real(), d[1].imag()}};
    j["residual"] = residual;
    return j.dump();
}

PsiCalibration PsiCalibration::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    PsiCalibration cal;
    auto rd = [&](const nlohmann::json& v) { return cplx(v[0].get<double>(), v[1].get<double>()); };
    cal.params = LanglandsParams(rd(j["params"]["alpha"]), rd(j["params"]["beta"]),
                                 rd(j["params"]["gamma"]));
    cal.sign = j["sign"].get<int>();
    cal.K = j["K"].get<int>();
    cal.c = {rd(j["c"][0]), rd(j["c"][1])};
    cal.d = {rd(j["d"][0]), rd(j["d"][1])};
    cal.residual = j["residual"].get<double>();
    return cal;
}

// ---------------------------------------------------------------------------
// Voronoi identity check
// ---------------------------------------------------------------------------

namespace {

// twisted Eisenstein series  E(s; theta, c0) = sum_n A(n,1) e(n theta / c0) n^{-s}
// through its Hurwitz-zeta factorization; evaluatable off the poles.
cplx eisenstein_twisted_series(const LanglandsParams& par, long long theta, long long c0,
                               cplx s) {
    cplx acc = 0.0;
    const cplx expo[3] = {s + par.alpha, s + par.beta, s + par.gamma};
    std::vector<std::vector<cplx>> hz(3, std::vector<cplx>(c0));
    for (int i = 0; i < 3; ++i)
        for (long long u = 1; u <= c0; ++u)
            hz[i][u - 1] = arith::hurwitz_zeta(expo[i], static_cast<double>(u) / c0);
    for (long long u = 1; u <= c0; ++u)
        for (long long v = 1; v <= c0; ++v)
            for (long long w = 1; w <= c0; ++w) {
                long long r = (u * v % c0) * w % c0 * (theta % c0) % c0;
                acc += e_of(static_cast<double>(r) / c0) * hz[0][u - 1] * hz[1][v - 1] *
                       hz[2][w - 1];
            }
    return acc * std::exp(-3.0 * s * std::log(static_cast<double>(c0)));
}

// residue terms sum_{poles} Res_s [ D_m(s) psi~(s) ] for the Eisenstein corpus
cplx eisenstein_polar_term(const gl3::GL3Coefficients& f, long long m, long long d,
                           long long c, const TestFn& psi) {
    const auto& par = f.params();
    // distinct pole locations s = 1 - alpha_i, clustered
    std::vector<cplx> poles = {1.0 - par.alpha, 1.0 - par.beta, 1.0 - par.gamma};
    std::vector<cplx> centers;
    for (const cplx& p : poles) {
        bool merged = false;
        for (const cplx& q : centers)
            if (std::abs(p - q) < 0.45) merged = true;
        if (!merged) centers.push_back(p);
    }
    cplx total = 0.0;
    const int nodes = 64;
    const double rad = 0.2;
    for (const cplx& s0 : centers) {
        cplx ring = 0.0;
        for (int k = 0; k < nodes; ++k) {
            double th = two_pi * k / nodes;
            cplx z(rad * std::cos(th), rad * std::sin(th));
            cplx s = s0 + z;
            cplx D = 0.0;
            for (long long dd : arith::divisors(m)) {
                int mu = arith::mobius(dd);
                if (mu == 0) continue;
                cplx a1 = f.coefficient(1, m / dd);
                long long theta = (dd % c) * (d % c) % c;
                D += static_cast<double>(mu) * a1 *
                     std::exp(-s * std::log(static_cast<double>(dd))) *
                     eisenstein_twisted_series(par, theta, c, s);
            }
            // Res = (1/2pi i) oint D(s) psi~(s) ds; trapezoid in the angle
            ring += D * mellin(psi, s) * z;
        }
        total += ring / static_cast<double>(nodes);
    }
    return total;
}

} // namespace

VoronoiCheckResult voronoi_identity_check(const gl3::GL3Coefficients& f, long long m,
                                          long long c, long long d, const TestFn& psi,
                                          long long truncation, double tol) {
    if (m < 1 || c < 1) throw std::domain_error("voronoi_identity_check: m, c must be >= 1");
    if (arith::gcd_ll(c, d) != 1)
        throw std::domain_error("voronoi_identity_check: (c, d) must be coprime");
    if (truncation < 1) throw std::domain_error("voronoi_identity_check: empty truncation");

    VoronoiCheckResult out;
    out.truncation = truncation;

    // lhs: finite sum over the support of psi
    const long long dmodc = ((d % c) + c) % c;
    for (long long n = static_cast<long long>(std::floor(psi.lo)) + 1;
         n < psi.hi; ++n) {
        double pv = psi(static_cast<double>(n));
        if (pv == 0.0) continue;
        long long r = (n % c) * dmodc % c;
        out.lhs += f.coefficient(n, m) * e_of(static_cast<double>(r) / c) * pv;
    }

    const long long dbar = (c == 1) ? 0 : arith::mod_inverse(d, c);
    const double sigma = std::max(-0.55, psi_sigma_effective_floor(f.params()) + 0.3);

    // dual side; convergence is tracked through checkpointed partial sums and
    // the reported tail bound is the usual a-posteriori movement estimate
    const double target_abs = tol * std::max(1.0, std::abs(out.lhs));
    cplx dual = 0.0;
    double tail = 0.0;
    for (int sign : {+1, -1}) {
        double x_max = 0.0;
        for (long long n1 : arith::divisors(c * m))
            x_max = std::max(x_max, (truncation + 1.0) * n1 * n1 /
                                        (std::pow(static_cast<double>(c), 3) * m));
        PsiTransform tr(f.params(), sign, psi, x_max, sigma, 0.1 * tol);

        for (long long n1 : arith::divisors(c * m)) {
            const long long q = m * c / n1;
            arith::KloostermanModulus S(q);
            const double x_den = std::pow(static_cast<double>(c), 3) * m;
            const long long W = std::max<long long>(200, truncation / 16);
            cplx block = 0.0;
            std::vector<cplx> checkpoints;
            int quiet = 0;
            constexpr long long kChunk = 64;
            double xs[kChunk];
            cplx psi_vals[kChunk];
            bool settled = false;
            for (long long n2 = 1; n2 <= truncation && !settled;) {
                long long chunk = std::min<long long>(kChunk, truncation - n2 + 1);
                for (long long i = 0; i < chunk; ++i)
                    xs[i] = static_cast<double>(n2 + i) * n1 * n1 / x_den;
                tr.value_batch(xs, static_cast<int>(chunk), psi_vals);
                for (long long i = 0; i < chunk; ++i) {
                    long long nn = n2 + i;
                    double kl = S.sum(m * dbar % q, sign * nn);
                    if (kl != 0.0)
                        block += f.coefficient(n1, nn) / static_cast<double>(n1 * nn) *
                                 kl * psi_vals[i];
                    if (nn % W == 0) {
                        checkpoints.push_back(block);
                        std::size_t k = checkpoints.size();
                        if (k >= 2) {
                            double move =
                                std::abs(checkpoints[k - 1] - checkpoints[k - 2]) * c;
                            quiet = (move < 0.02 * target_abs) ? quiet + 1 : 0;
                            if (quiet >= 3) {
                                settled = true;
                                break;
                            }
                        }
                    }
                }
                n2 += chunk;
            }
            dual += static_cast<double>(c) * block;

            double move = 0.0;
            std::size_t k = checkpoints.size();
            for (std::size_t i = 1; i <= 3 && i < k; ++i)
                move = std::max(move, std::abs(block - checkpoints[k - 1 - i]) *
                                          static_cast<double>(c));
            if (k < 2) move = std::abs(block) * c; // no convergence evidence at all
            tail += 2.5 * move;
        }
    }
    out.tail_bound = tail;

    if (f.is_eisenstein()) out.polar = eisenstein_polar_term(f, m, d, c, psi);
    out.rhs = out.polar + dual;

    // hard failure only when the truncation is catastrophically short; the
    // bound itself is always reported for the caller's contract check
    if (tail > 200.0 * std::max(tol * std::abs(out.lhs), tol))
        throw truncation_error("voronoi_identity_check: tail bound exceeds tolerance", tail);
    return out;
}

} // namespace mm::transforms
