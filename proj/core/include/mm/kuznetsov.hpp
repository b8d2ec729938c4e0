#ifndef MM_KUZNETSOV_HPP
#define MM_KUZNETSOV_HPP

#include "mm/maass_io.hpp"
#include "mm/numerics.hpp"
#include "mm/special.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mm::kuznetsov {

using Parity = gl3::MaassFormRecord::Parity;

// H = (2/pi) int_0^inf h(t) tanh(pi t) t dt  (the odd-form normalization
// (1/pi) int_R coincides for even h)
double transform_H(const std::function<double(double)>& h, double t_max,
                   double tol = 1e-10);

// Bessel transforms of an even test function h:
//   H+(x) = 2i int_R J_{2it}(x) h(t) t / cosh(pi t) dt
//   H-(x) = (4/pi) int_R K_{2it}(x) sinh(pi t) h(t) t dt
// evaluated through G(z) = int_0^inf tanh(pi t) h(t) t cos(2tz) dt:
//   H+(x) = (8/pi) int_0^inf G(z) cos(x cosh z) dz,
//   H-(x) = (8/pi) int_0^inf G(z) cos(x sinh z) dz.
// G is tabulated once as a smooth envelope against e^{2 i c z} (c = osc_center,
// the center of h's support, e.g. T for k(t;T,M)).
class HTransformEngine {
  public:
    HTransformEngine(std::function<double(double)> h, double t_max, double osc_center,
                     double env_scale);

    double hplus(double x) const;
    double hminus(double x) const;
    double zeta_max() const { return zeta_max_; }

  private:
    double kernel_integral(double x, bool use_cosh) const;
    double center_;
    double zeta_max_ = 0.0;
    double peak_ = 0.0;
    CubicSpline env_re_, env_im_;
};

// slow reference routes through the kernel integrals (per (t,x) quadrature)
double transform_Hplus_direct(const std::function<double(double)>& h, double t_max,
                              double x);
double transform_Hminus_direct(const std::function<double(double)>& h, double t_max,
                               double x);

// Fourier-transform form of the leading (T-part) reduction of H+:
//   H^{+,1}(x) = 4T int khat*(xi) cos(x cosh(xi pi / M)) e(-T xi / M) dxi,
//   k*(u) = e^{-u^2} V(y, M u + T).
struct HplusFourierResult {
    cplx value = 0.0;
    double reference = 0.0;  // full H+ with h(t) = k(t;T,M) Re V(y,t)
    double discrepancy = 0.0; // |value - reference|, carries the dropped Mu-part
    double stationary_xi = 0.0; // location of the phase-derivative minimum
};
HplusFourierResult hplus_fourier_form(double x, double T, double M, double afe_y,
                                      const special::LanglandsParams& params,
                                      int mollifier_A = 16);

struct GeometricSide {
    double diagonal = 0.0;
    double kloosterman_plus = 0.0;
    double kloosterman_minus = 0.0; // unsigned sum; the parity sign is applied
                                    // when the identity is assembled
    double tail_estimate = 0.0;
    long long c_truncation = 0;
};

GeometricSide geometric_side(long long m, long long n,
                             const std::function<double(double)>& h, double t_max,
                             double osc_center, double env_scale, long long c_max);

struct SpectralSide {
    double cusp = 0.0;
    double eisenstein = 0.0; // absent (0) for the odd formula
};

SpectralSide spectral_side(long long m, long long n,
                           const std::function<double(double)>& h, double t_max,
                           Parity parity, const std::vector<gl3::MaassFormRecord>& forms);

struct TraceFormulaReport {
    Parity parity = Parity::even;
    double spectral_total = 0.0;
    double eisenstein_total = 0.0;
    double diagonal_term = 0.0;
    double kloosterman_plus = 0.0;
    double kloosterman_minus = 0.0;
    long long c_truncation = 0;
    double residual = 0.0;
    double tail_estimate = 0.0;
    double assumed_complete_to = 0.0;
    std::string to_json(const std::string& corpus_tag = "") const;
};

// full identity with h = k(t; T, M) = e^{-(t-T)^2/M^2} + e^{-(t+T)^2/M^2}
TraceFormulaReport kuznetsov_check(long long m, long long n, double T, double M,
                                   Parity parity,
                                   const std::vector<gl3::MaassFormRecord>& forms,
                                   long long c_max);

// Gaussian spectral weight k(t; T, M)
double spectral_weight_k(double t, double T, double M);

} // namespace mm::kuznetsov

#endif
