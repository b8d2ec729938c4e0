#ifndef MM_GL3_HPP
#define MM_GL3_HPP

#include "mm/numerics.hpp"
#include "mm/special.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace mm::gl3 {

// Local Satake data at one prime: (alpha_p, beta_p, gamma_p), product 1.
struct SatakeLocal {
    long long p = 2;
    std::array<cplx, 3> alpha{cplx(1.0), cplx(1.0), cplx(1.0)};
    SatakeLocal() = default;
    SatakeLocal(long long p_, std::array<cplx, 3> a);
};

// Fourier-coefficient engine A(m,n).  Local values are Schur polynomials
// s_{(j+k,k,0)} of the Satake triple, assembled by multiplicativity; the dual
// form swaps the two indices.  Normalization A(1,1) = 1.
class GL3Coefficients {
  public:
    // symmetric-square lift of the discriminant form: local data from exact
    // tau(n), archimedean parameters (11, 0, -11)
    static GL3Coefficients sym2_delta(long long coeff_limit = 22000);

    // generic symmetric-square lift from a GL(2) Hecke eigenvalue rule
    static GL3Coefficients sym2_from_lambda(std::function<double(long long)> lambda_p,
                                            long long prime_limit, std::string id,
                                            const special::LanglandsParams& params);

    // minimal-parabolic Eisenstein coefficient system: Satake (p^-a, p^-b, p^-c)
    static GL3Coefficients eisenstein(const special::LanglandsParams& params);

    // degenerate table A(m,n) = delta_{(m,n),(1,1)} (test corpus)
    static GL3Coefficients delta_normalized();

    cplx coefficient(long long m, long long n) const;
    GL3Coefficients dual() const;

    const std::string& id() const { return id_; }
    const special::LanglandsParams& params() const { return params_; }
    bool self_dual() const { return self_dual_; }
    bool is_eisenstein() const { return eisenstein_; }
    long long prime_limit() const { return prime_limit_; }

  private:
    GL3Coefficients() = default;
    // h_0..h_len of the complete homogeneous basis at prime p
    const std::vector<cplx>& h_seq(long long p, int len) const;
    cplx local_coefficient(long long p, int j, int k) const;

    std::string id_;
    special::LanglandsParams params_;
    bool self_dual_ = false;
    bool eisenstein_ = false;
    bool dual_view_ = false;
    bool delta_table_ = false;
    long long prime_limit_ = 0;
    std::function<std::array<cplx, 3>(long long)> local_rule_;
    mutable std::unordered_map<long long, std::vector<cplx>> h_cache_;
};

// lhs = A(p, mp), rhs = A(p,1)A(1,pm) - A(1,m)
std::pair<cplx, cplx> hecke_shift_identity(const GL3Coefficients& f, long long p,
                                           long long m);

// sum over m^2 n <= N of |A(m,n)|^2
double rankin_selberg_partial(const GL3Coefficients& f, long long N);

struct LValueResult {
    double value = 0.0;
    double tail = 0.0;     // heuristic tail estimate
    bool converged = true; // doubling-stability flag
};

// sum_{m <= truncation} A(m,1) (-log m)^order / m  — L(1,f) or L'(1,f)
LValueResult l_value_at_one(const GL3Coefficients& f, int derivative_order,
                            long long truncation);

// exact normalized Ramanujan tau: lambda_Delta(n) = tau(n) / n^{11/2}, n <= N
const std::vector<double>& tau_lambda_table(long long N);

} // namespace mm::gl3

#endif
