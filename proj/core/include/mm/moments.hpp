#ifndef MM_MOMENTS_HPP
#define MM_MOMENTS_HPP

#include "mm/gl3.hpp"
#include "mm/maass_io.hpp"
#include "mm/numerics.hpp"

#include <map>
#include <string>
#include <vector>

namespace mm::moments {

// Gaussian spectral window k(t; T, M) = e^{-(t-T)^2/M^2} + e^{-(t+T)^2/M^2}
struct SpectralWeight {
    double T = 100.0;
    double M = 20.0;
    // advisory band T^{3/8} < M <= T (the theorems' admissible range, eps = 0)
    bool band_ok() const;
};

// int k(t) tanh(pi t) t (log|t|)^{0,1} dt; one-sided by default, the
// derivative-moment normalization integrates over the whole line (x2)
double weight_integral(double T, double M, bool log_factor, bool two_sided = false);

struct DiagonalResult {
    double route_a = 0.0; // truncated double sum through the AFE transform
    double route_b = 0.0; // closed main term L(1) (A p - 1) / (p^{3/2} pi) * I
    double gap = 0.0;
    long long m_truncation = 0;
    std::map<std::string, double> pieces;
};

// diagonal sum D of the value moment; hecke_side selects the direct form
// (coefficients A(1,m), L(1, dual)) or the dual one (A(m,1), L(1, f))
DiagonalResult diagonal_term(const gl3::GL3Coefficients& f, long long p, double T,
                             double M, bool dual_side = false, long long m_cut = 0);

struct DerivativeDiagonalResult {
    double route_a = 0.0;     // truncated sum through the U transform
    double main_log = 0.0;    // 3 L (Ap-1)/(2 p^{3/2} pi) * int k tanh t log|t|
    double main_const = 0.0;  // constant term with the residue-derived constant
    double main_const_quoted = 0.0; // same with K = 2L' - 3L log 2pi - L log p
    double gap = 0.0;         // |route_a - (main_log + main_const)|
    long long m_truncation = 0;
    std::map<std::string, double> pieces;
};

DerivativeDiagonalResult derivative_diagonal_term(const gl3::GL3Coefficients& f,
                                                  long long p, double T, double M,
                                                  bool dual_side = false,
                                                  long long m_cut = 0);

struct MomentPrediction {
    double main = 0.0;
    double secondary = 0.0; // log-free term of the derivative moment
    double error_budget = 0.0;
    std::map<std::string, double> pieces;
    std::string to_json(double T, double M, long long p) const;
};

MomentPrediction predict_moment(const gl3::GL3Coefficients& f, long long p, double T,
                                double M, bool derivative);

struct EmpiricalResult {
    double value = 0.0;
    double cusp_part = 0.0;
    double eisenstein_part = 0.0;
    long long afe_cut = 0; // m^2 n truncation actually used
    bool corpus_limited = false;
};

// diagnostic spectral moment through the AFE double sums; desk-scale only
EmpiricalResult empirical_moment(const gl3::GL3Coefficients& f, long long p, double T,
                                 double M, const std::vector<gl3::MaassFormRecord>& forms,
                                 bool derivative, bool strict = false);

} // namespace mm::moments

#endif
