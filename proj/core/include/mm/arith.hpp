#ifndef MM_ARITH_HPP
#define MM_ARITH_HPP

#include "mm/numerics.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace mm::arith {

// --- zeta machinery (Euler-Maclaurin, 20 correction terms) ---------------

// Hurwitz zeta(s, a) for a > 0, s != 1; supports |Im s| up to ~1e4.
cplx hurwitz_zeta(cplx s, double a);
cplx riemann_zeta(cplx s);

// --- integer utilities ----------------------------------------------------

long long gcd_ll(long long a, long long b);
// inverse of a modulo m (m >= 1, gcd(a,m) = 1)
long long mod_inverse(long long a, long long m);
int mobius(long long n);
long long divisor_count(long long n);
std::vector<long long> divisors(long long n);

// --- Kloosterman sums -----------------------------------------------------

inline constexpr long long kloosterman_c_cap = 10'000'000;

struct KloostermanKey {
    long long a = 0, b = 0, c = 1;
    KloostermanKey(long long a_, long long b_, long long c_); // reduces a,b mod c
};

// S(a,b;c) = sum_{d dbar = 1 mod c} e((da + dbar b)/c), exact O(c) enumeration.
double kloosterman(const KloostermanKey& key);
double kloosterman(long long a, long long b, long long c);

// Per-modulus evaluator: unit/inverse/root-of-unity tables are built once and
// shared across many (a,b) pairs for the same c.
class KloostermanModulus {
  public:
    explicit KloostermanModulus(long long c);
    long long modulus() const { return c_; }
    double sum(long long a, long long b) const;

  private:
    long long c_;
    std::vector<int64_t> units_, inverses_;
    std::vector<double> cosv_, sinv_;
};

// Ramanujan sum S(0,a;c) = sum_{d | (a,c)} d mu(c/d), exact integer.
long long ramanujan_sum(long long a, long long c);

// Both sides of the twisted-sum rearrangement
//   sum_{d (c)} e(p dbar / c) S(m dbar, sign n2; m c / n1)
//     = sum_{u (mc/n1)} e(sign n2 ubar / (mc/n1)) S(0, p + u n1; c).
// Requires n1 | c m.  The two complex values agree to quadrature accuracy.
std::pair<cplx, cplx> twisted_kloosterman_reduction(long long m, long long c, long long n1,
                                                    long long n2, long long p, int sign);

// --- Eisenstein divisor data ----------------------------------------------

// eta(n, s) = sum_{ad = n} (a/d)^{s - 1/2}
cplx eta(long long n, cplx s);

// phi(s) = sqrt(pi) Gamma(s - 1/2)/Gamma(s) zeta(2s-1)/zeta(2s)
cplx eisenstein_phi(cplx s);

// phi(n, s) = pi^s Gamma(s)^{-1} zeta(2s)^{-1} |n|^{-1/2} eta(n, s)
cplx eisenstein_phi_n(long long n, cplx s);

// omega(t) = 4 pi |phi(1, 1/2 + it)|^2 / cosh(pi t); omega(0) = 0 (limit).
double omega_weight(double t);

} // namespace mm::arith

#endif
