#ifndef MM_SPECIAL_HPP
#define MM_SPECIAL_HPP

#include "mm/numerics.hpp"

namespace mm::special {

// Archimedean parameters (alpha, beta, gamma) of a GL(3) form, alpha+beta+gamma = 0.
struct LanglandsParams {
    cplx alpha{0.0}, beta{0.0}, gamma{0.0};

    LanglandsParams() = default;
    LanglandsParams(cplx a, cplx b, cplx c);

    // tempered/unitary triple (i*t1, i*t2, -i*(t1+t2))
    static LanglandsParams unitary(double t1, double t2);

    // multiset {a,b,c} equals {-conj a, -conj b, -conj c} up to tol
    bool conjugation_closed(double tol = 1e-10) const;

    double max_abs_re() const;
};

// Principal-branch complex log-gamma.  Stirling series with recurrence push
// for Re z >= 0, reflection formula for Re z < 0.  The imaginary part is
// continuous within each half plane; exponentials of values and of
// differences are branch-insensitive.
cplx ln_gamma(cplx z);

// F(u) = cos(pi*u/A)^(-3A), the mollifier of the approximate functional
// equation.  Even in u, F(0) = 1, poles at u = A(2k+1)/2.
cplx mollifier_F(cplx u, int A);

enum class GammaKind { minus, plus };

// Selects gamma_-(s,t) or gamma_+(s,t) of the AFE together with its data.
struct GammaFactorKind {
    GammaKind sign = GammaKind::minus;
    double t = 0.0;
    LanglandsParams params;
};

// gamma_{kind}(1/2 + u, t) / gamma_{minus}(1/2, t), computed through
// ln_gamma differences.  At u = 0 with kind = minus the six log-gamma
// differences cancel term by term, so the result is exactly 1.0.
cplx gamma_ratio_afe(cplx u, const GammaFactorKind& kind);
cplx gamma_ratio_afe(cplx u, double t, GammaKind sign, const LanglandsParams& params);

// gamma_ell(s) of the GL(3) Voronoi formula, ell in {0,1}:
//   pi^(-3s-3/2)/2 * prod Gamma((1+s+lambda+ell)/2) / prod Gamma((-s-lambda+ell)/2)
// A pole of a denominator gamma gives a zero factor; numerator poles throw.
cplx voronoi_gamma_ell(cplx s, int ell, const LanglandsParams& params);

// gamma^{+}(s) = gamma_0 - gamma_1,  gamma^{-}(s) = gamma_0 + gamma_1.
cplx voronoi_gamma_pm(cplx s, int sign, const LanglandsParams& params);

} // namespace mm::special

#endif
