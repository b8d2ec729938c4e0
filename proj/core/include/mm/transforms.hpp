#ifndef MM_TRANSFORMS_HPP
#define MM_TRANSFORMS_HPP

#include "mm/gl3.hpp"
#include "mm/numerics.hpp"
#include "mm/special.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace mm::transforms {

// Vertical-line quadrature layout: trapezoid on Re u = abscissa, truncated at
// |Im u| = height_cut, nodes_per_unit points per unit height.  Correctness is
// checked by node-doubling (the evaluators carry a coarse grid).
struct ContourSpec {
    double abscissa = 0.7;
    double height_cut = 12.0;
    int nodes_per_unit = 24;

    // resolution adequate for y-arguments up to y_max and spectral parameter t
    static ContourSpec for_afe(double y_max, double t, double sigma = 0.7);
};

// test function with compact support [lo, hi]
struct TestFn {
    std::function<double(double)> f;
    double lo = 1.0, hi = 2.0;
    double operator()(double y) const { return (y > lo && y < hi) ? f(y) : 0.0; }
};

// C-infinity bump exp(1 - 1/(1 - w^2)), w = 2(y - 1.5X)/X, supported on [X, 2X]
TestFn bump_on(double X);

// Mellin transform  psi~(w) = int psi(y) y^{w-1} dy  (adaptive, relative 1e-12)
cplx mellin(const TestFn& psi, cplx w);

// numerical Mellin inversion at y (vertical line at Re w = sigma); used by the
// round-trip test
double mellin_invert(const TestFn& psi, double y, double sigma, double height);

// --------------------------------------------------------------------------
// AFE transforms V (du/u) and U (du/u^2):
//   (1/2pi i) int y^{-u} F(u) gamma_kind(1/2+u,t)/gamma_-(1/2,t) du/u^pow
// --------------------------------------------------------------------------

class AfeTransformTable {
  public:
    AfeTransformTable(const special::GammaFactorKind& kind, int u_power, int mollifier_A,
                      ContourSpec spec);

    cplx value(double y) const;        // fine grid
    cplx value_coarse(double y) const; // half resolution, for error control
    double abscissa() const { return spec_.abscissa; }
    const ContourSpec& spec() const { return spec_; }

    // raw nodes/weights (weight includes F(u)/u^pow and the quadrature step):
    // value(y) = sum_j weight[j] * y^{-u_j}
    int size() const { return static_cast<int>(weights_.size()); }
    cplx node(int j) const;
    const std::vector<cplx>& weights() const { return weights_; }

  private:
    ContourSpec spec_;
    double step_;
    std::vector<cplx> weights_;
};

cplx afe_transform_V(double y, double t, special::GammaKind sign,
                     const special::LanglandsParams& params, const ContourSpec& spec,
                     int mollifier_A = 16, double tol = 1e-9);
cplx afe_transform_U(double y, double t, special::GammaKind sign,
                     const special::LanglandsParams& params, const ContourSpec& spec,
                     int mollifier_A = 16, double tol = 1e-9);

// --------------------------------------------------------------------------
// Voronoi transforms Psi^{pm}(x) = (1/2pi i) int x^{-s} gamma^{pm}(s) psi~(-s) ds
// --------------------------------------------------------------------------

class PsiTransform {
  public:
    // gamma combination: +1 / -1 for gamma^{pm}, 0 for the gamma_0-only transform
    // strict_grid doubles the trapezoid resolution so that the stride-2
    // comparison grid itself meets the tolerance (used by the one-shot op)
    PsiTransform(const special::LanglandsParams& params, int sign, const TestFn& psi,
                 double x_max, double sigma, double tol = 1e-10, bool strict_grid = false);

    cplx value(double x) const;
    cplx value_coarse(double x) const;
    // evaluate at a block of arguments; one pass over the weights
    void value_batch(const double* xs, int count, cplx* out) const;
    double sigma() const { return sigma_; }

  private:
    double sigma_;
    double step_;
    double tau_lo_ = 0.0; // height of the first stored node
    std::vector<cplx> weights_;
};

// generic contour legality: sigma > max(-1 - Re alpha_i)
double psi_sigma_floor(const special::LanglandsParams& params);
// actual pole floor after Gamma-denominator cancellations (can sit far below
// the generic bound for integral parameter triples)
double psi_sigma_effective_floor(const special::LanglandsParams& params);

cplx voronoi_psi_exact(double x, const special::LanglandsParams& params, const TestFn& psi,
                       int sign, double sigma, double tol = 1e-9);

// calibrated constants of the leading oscillatory model
//   Psi(x) ~ x * sum_{j<=K} [c_j e(3(xy)^{1/3}) + d_j e(-3(xy)^{1/3})] (xy)^{-j/3}
struct PsiCalibration {
    special::LanglandsParams params;
    int sign = 1;
    int K = 2;
    std::array<cplx, 2> c{cplx(0.0), cplx(0.0)};
    std::array<cplx, 2> d{cplx(0.0), cplx(0.0)};
    double residual = 0.0; // rms relative fit residual
    std::string to_json() const;
    static PsiCalibration from_json(const std::string&);
};

// least-squares fit of the model against exact Psi values over a log-spaced
// x-grid with x*X in [xX_lo, xX_hi]
PsiCalibration calibrate_psi_constants(const special::LanglandsParams& params, int sign,
                                       const TestFn& psi, double xX_lo = 1e3,
                                       double xX_hi = 1e6, int grid = 12);

// the oscillatory-model value with given constants (j <= K terms)
cplx voronoi_psi_asymptotic(double x, const TestFn& psi, const PsiCalibration& cal, int K);

// --------------------------------------------------------------------------
// Voronoi summation identity check
// --------------------------------------------------------------------------

struct VoronoiCheckResult {
    cplx lhs = 0.0;
    cplx rhs = 0.0;   // polar + dual sums
    cplx polar = 0.0; // Eisenstein main terms (zero for cusp corpora)
    double tail_bound = 0.0;
    long long truncation = 0;
};

VoronoiCheckResult voronoi_identity_check(const gl3::GL3Coefficients& f, long long m,
                                          long long c, long long d, const TestFn& psi,
                                          long long truncation, double tol = 1e-5);

// --------------------------------------------------------------------------
// stationary phase
// --------------------------------------------------------------------------

struct PhaseFn {
    std::function<double(double)> f, d1, d2;
};

struct OscIntegralResult {
    enum class Method { direct_quadrature, stationary_phase, no_stationary_negligible };
    cplx value = 0.0;
    double error_estimate = 0.0;
    std::vector<double> stationary_points;
    Method method = Method::direct_quadrature;
};

// int_a^b amplitude(y) e(phase(y)) dy by direct adaptive panels
cplx oscillatory_quadrature(const std::function<double(double)>& phase,
                            const std::function<double(double)>& amplitude, double a,
                            double b, double abs_tol);

// first/second-derivative-test evaluation; throws on |phase''(y0)| < degenerate_tol
OscIntegralResult stationary_phase(const PhaseFn& phase,
                                   const std::function<double(double)>& amplitude,
                                   double a, double b, double tol,
                                   double degenerate_tol = 1e-8);

} // namespace mm::transforms

#endif
