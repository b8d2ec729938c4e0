#include "mm/arith.hpp"
#include "mm/errors.hpp"

#include <cmath>

namespace mm::arith {

// B_{2k}, k = 1..20
static const double bern2k[20] = {
    0.16666666666666666667, -0.033333333333333333333, 0.023809523809523809524,
    -0.033333333333333333333, 0.075757575757575757576, -0.25311355311355311355,
    1.1666666666666666667, -7.0921568627450980392, 54.971177944862155388,
    -529.12424242424242424, 6192.1231884057971014, -86580.253113553113553,
    1425517.1666666666667, -27298231.067816091954, 601580873.90064236838,
    -15116315767.092156863, 429614643061.16666667, -13711655205088.332772,
    488332318973593.16667, -19296579341940068.149};

cplx hurwitz_zeta(cplx s, double a) {
    if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta: a must be positive");
    if (std::abs(s - 1.0) < 1e-12) throw pole_error("hurwitz_zeta: pole at s = 1");
    double im = std::abs(s.imag());
    if (im > 2e4) throw range_error("hurwitz_zeta: |Im s| too large for Euler-Maclaurin setup");

    const int N = 24 + static_cast<int>(0.6 * im);
    cplx sum = 0.0;
    for (int n = 0; n < N; ++n) sum += std::exp(-s * std::log(n + a));

    const double Na = N + a;
    const cplx lNa = std::log(Na);
    sum += std::exp((1.0 - s) * lNa) / (s - 1.0);
    sum += 0.5 * std::exp(-s * lNa);

    // sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * (N+a)^{-s-2k+1}
    cplx rising = s;                       // s ... (s+2k-2), updated per k
    double fact = 2.0;                     // (2k)!
    cplx powNa = std::exp((-s - 1.0) * lNa); // (N+a)^{-s-2k+1}
    const double inv_Na2 = 1.0 / (Na * Na);
    for (int k = 1; k <= 20; ++k) {
        sum += bern2k[k - 1] / fact * rising * powNa;
        rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
        powNa *= inv_Na2;
    }
    return sum;
}

cplx riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

} // namespace mm::arith
