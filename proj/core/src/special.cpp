#include "mm/special.hpp"

#include "mm/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mm::special {

LanglandsParams::LanglandsParams(cplx a, cplx b, cplx c) : alpha(a), beta(b), gamma(c) {
    if (std::abs(a + b + c) > 1e-12)
        throw validation_error("LanglandsParams: alpha+beta+gamma != 0");
}

LanglandsParams LanglandsParams::unitary(double t1, double t2) {
    return LanglandsParams(cplx(0, t1), cplx(0, t2), cplx(0, -(t1 + t2)));
}

bool LanglandsParams::conjugation_closed(double tol) const {
    const cplx v[3] = {alpha, beta, gamma};
    cplx w[3] = {-std::conj(alpha), -std::conj(beta), -std::conj(gamma)};
    // match multisets greedily (3 elements)
    bool used[3] = {false, false, false};
    for (const auto& x : v) {
        bool found = false;
        for (int j = 0; j < 3; ++j) {
            if (!used[j] && std::abs(x - w[j]) <= tol) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

double LanglandsParams::max_abs_re() const {
    return std::max({std::abs(alpha.real()), std::abs(beta.real()), std::abs(gamma.real())});
}

// ---------------------------------------------------------------------------
// ln_gamma: Stirling series  (z-1/2)log z - z + log(2 pi)/2 + sum c_n z^(1-2n)
// with c_n = B_{2n} / (2n (2n-1)).  Push |z| >= 10.5 by the recurrence first;
// truncation error there is below 1e-22.
// ---------------------------------------------------------------------------

static const double stirling_c[] = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0,
    8553103.0 / 3900.0,
};

static bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

static cplx ln_gamma_stirling(cplx z) {
    const double half_log_two_pi = 0.91893853320467274178032973640562;
    cplx lz = std::log(z);
    cplx acc = (z - 0.5) * lz - z + half_log_two_pi;
    cplx zi2 = 1.0 / (z * z);
    cplx zp = 1.0 / z;
    for (double c : stirling_c) {
        acc += c * zp;
        zp *= zi2;
    }
    return acc;
}

static cplx ln_gamma_right(cplx z) {
    // Re z >= 0: recurrence push to |z| >= 10.5, then Stirling.
    cplx shift = 0.0;
    while (std::abs(z) < 10.5) {
        shift -= std::log(z);
        z += 1.0;
    }
    return ln_gamma_stirling(z) + shift;
}

cplx ln_gamma(cplx z) {
    if (is_nonpositive_integer(z))
        throw pole_error("ln_gamma: pole at nonpositive integer");
    if (z.imag() < 0.0) return std::conj(ln_gamma(std::conj(z)));
    if (z.real() >= 0.0) return ln_gamma_right(z);

    // reflection: ln Gamma(z) = log pi - log sin(pi z) - ln Gamma(1 - z)
    const double log_pi = 1.1447298858494001741434273513531;
    cplx log_sin;
    if (z.imag() > 6.0) {
        // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}), e^{2 pi i z} small
        cplx log_i_half(-0.69314718055994530941723212145818, 0.5 * pi);
        log_sin = log_i_half - cplx(0, pi) * z + std::log(1.0 - std::exp(cplx(0, two_pi) * z));
    } else {
        log_sin = std::log(std::sin(pi * z));
    }
    return log_pi - log_sin - ln_gamma_right(1.0 - z);
}

cplx mollifier_F(cplx u, int A) {
    if (A <= 0) throw std::invalid_argument("mollifier_F: A must be a positive integer");
    cplx c = std::cos(pi * u / static_cast<double>(A));
    if (std::abs(c) < 1e-12)
        throw pole_error("mollifier_F: evaluation point too close to a pole of F");
    return std::exp(-3.0 * A * std::log(c));
}

cplx gamma_ratio_afe(cplx u, const GammaFactorKind& kind) {
    const double k = (kind.sign == GammaKind::minus) ? -1.0 : 1.0;
    const cplx it(0.0, kind.t);
    const cplx lambdas[3] = {kind.params.alpha, kind.params.beta, kind.params.gamma};
    cplx acc = -3.0 * u * 1.1447298858494001741434273513531; // pi^{-3u}
    for (const cplx& lam : lambdas) {
        for (double eps : {1.0, -1.0}) {
            cplx num = 0.5 * (0.5 + u + k * lam + eps * it);
            cplx den = 0.5 * (0.5 - lam + eps * it);
            if (is_nonpositive_integer(num) || is_nonpositive_integer(den))
                throw pole_error("gamma_ratio_afe: gamma argument at a pole");
            acc += ln_gamma(num) - ln_gamma(den);
        }
    }
    return std::exp(acc);
}

cplx gamma_ratio_afe(cplx u, double t, GammaKind sign, const LanglandsParams& params) {
    return gamma_ratio_afe(u, GammaFactorKind{sign, t, params});
}

cplx voronoi_gamma_ell(cplx s, int ell, const LanglandsParams& params) {
    if (ell != 0 && ell != 1) throw std::invalid_argument("voronoi_gamma_ell: ell must be 0 or 1");
    const cplx lambdas[3] = {params.alpha, params.beta, params.gamma};
    const double log_pi = 1.1447298858494001741434273513531;
    cplx acc = (-3.0 * s - 1.5) * log_pi - 0.69314718055994530941723212145818; // pi^{-3s-3/2}/2
    bool zero_factor = false;
    for (const cplx& lam : lambdas) {
        cplx num = 0.5 * (1.0 + s + lam + static_cast<double>(ell));
        if (is_nonpositive_integer(num))
            throw pole_error("voronoi_gamma_ell: numerator gamma pole");
        cplx den = 0.5 * (-s - lam + static_cast<double>(ell));
        if (is_nonpositive_integer(den)) {
            zero_factor = true; // 1/Gamma(pole) = 0
            continue;
        }
        acc += ln_gamma(num) - ln_gamma(den);
    }
    if (zero_factor) return 0.0;
    return std::exp(acc);
}

cplx voronoi_gamma_pm(cplx s, int sign, const LanglandsParams& params) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("voronoi_gamma_pm: sign must be +-1");
    cplx g0 = voronoi_gamma_ell(s, 0, params);
    cplx g1 = voronoi_gamma_ell(s, 1, params);
    return sign > 0 ? g0 - g1 : g0 + g1;
}

} // namespace mm::special
