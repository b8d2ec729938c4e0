#include "mm/arith.hpp"

#include "mm/errors.hpp"
#include "mm/special.hpp"

#include <cmath>
#include <numeric>

namespace mm::arith {

long long gcd_ll(long long a, long long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

long long mod_inverse(long long a, long long m) {
    if (m == 1) return 0;
    a %= m;
    if (a < 0) a += m;
    long long r0 = m, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        long long q = r0 / r1;
        long long r2 = r0 - q * r1;
        long long s2 = s0 - q * s1;
        r0 = r1, r1 = r2, s0 = s1, s1 = s2;
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: arguments not coprime");
    return s0 < 0 ? s0 + m : s0;
}

int mobius(long long n) {
    if (n <= 0) throw std::domain_error("mobius: n must be positive");
    int mu = 1;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

long long divisor_count(long long n) {
    long long d = 1;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) n /= p, ++e;
            d *= e + 1;
        }
    }
    if (n > 1) d *= 2;
    return d;
}

std::vector<long long> divisors(long long n) {
    std::vector<long long> small, large;
    for (long long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
    return small;
}

KloostermanKey::KloostermanKey(long long a_, long long b_, long long c_) : a(a_), b(b_), c(c_) {
    if (c < 1) throw std::domain_error("KloostermanKey: c must be >= 1");
    if (c > kloosterman_c_cap)
        throw range_error("KloostermanKey: modulus above supported cap 1e7");
    a %= c;
    if (a < 0) a += c;
    b %= c;
    if (b < 0) b += c;
}

double kloosterman(long long a, long long b, long long c) {
    return kloosterman(KloostermanKey(a, b, c));
}

double kloosterman(const KloostermanKey& key) {
    const long long c = key.c;
    if (c == 1) return 1.0;
    const double w = two_pi / static_cast<double>(c);
    double re = 0.0, im = 0.0;
    for (long long d = 1; d < c; ++d) {
        if (gcd_ll(d, c) != 1) continue;
        long long dbar = mod_inverse(d, c);
        long long r = ((d * key.a) % c + (dbar * key.b) % c) % c;
        re += std::cos(w * r);
        im += std::sin(w * r);
    }
    if (std::abs(im) > 1e-9 * (1.0 + std::abs(re)))
        throw accuracy_error("kloosterman: imaginary residue above tolerance", std::abs(im));
    return re;
}

KloostermanModulus::KloostermanModulus(long long c) : c_(c) {
    if (c < 1) throw std::domain_error("KloostermanModulus: c must be >= 1");
    if (c > 2'000'000) throw range_error("KloostermanModulus: table route capped at 2e6");
    units_.reserve(c > 1 ? c / 2 : 1);
    inverses_.reserve(units_.capacity());
    if (c == 1) {
        units_.push_back(0);
        inverses_.push_back(0);
    } else {
        for (long long d = 1; d < c; ++d) {
            if (gcd_ll(d, c) != 1) continue;
            units_.push_back(d);
            inverses_.push_back(mod_inverse(d, c));
        }
    }
    cosv_.resize(c);
    sinv_.resize(c);
    const double w = two_pi / static_cast<double>(c);
    for (long long r = 0; r < c; ++r) {
        cosv_[r] = std::cos(w * r);
        sinv_[r] = std::sin(w * r);
    }
}

double KloostermanModulus::sum(long long a, long long b) const {
    const long long c = c_;
    if (c == 1) return 1.0;
    a %= c;
    if (a < 0) a += c;
    b %= c;
    if (b < 0) b += c;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < units_.size(); ++i) {
        long long r = (units_[i] * a + inverses_[i] * b) % c;
        re += cosv_[r];
        im += sinv_[r];
    }
    if (std::abs(im) > 1e-9 * (1.0 + std::abs(re)))
        throw accuracy_error("KloostermanModulus: imaginary residue above tolerance",
                             std::abs(im));
    return re;
}

long long ramanujan_sum(long long a, long long c) {
    if (c < 1) throw std::domain_error("ramanujan_sum: c must be >= 1");
    if (a < 0) a = -a;
    long long g = (a == 0) ? c : gcd_ll(a, c);
    long long total = 0;
    for (long long d : divisors(g)) total += d * mobius(c / d);
    return total;
}

std::pair<cplx, cplx> twisted_kloosterman_reduction(long long m, long long c, long long n1,
                                                    long long n2, long long p, int sign) {
    if (m < 1 || c < 1 || n1 < 1 || n2 < 1 || p < 1)
        throw std::domain_error("twisted_kloosterman_reduction: arguments must be positive");
    if (sign != 1 && sign != -1)
        throw std::domain_error("twisted_kloosterman_reduction: sign must be +-1");
    if ((c * m) % n1 != 0)
        throw divisibility_error("twisted_kloosterman_reduction: n1 does not divide c*m");
    const long long q = m * c / n1;

    cplx lhs = 0.0;
    {
        KloostermanModulus Sq(q);
        if (c == 1) {
            lhs = Sq.sum(0, sign * n2); // d = dbar = 0
        } else {
            for (long long d = 1; d < c; ++d) {
                if (gcd_ll(d, c) != 1) continue;
                long long dbar = mod_inverse(d, c);
                long long r = (p % c) * dbar % c;
                lhs += e_of(static_cast<double>(r) / c) * Sq.sum((m % q) * dbar, sign * n2);
            }
        }
    }

    cplx rhs = 0.0;
    {
        KloostermanModulus Sc(c);
        if (q == 1) {
            rhs = Sc.sum(0, p); // u = ubar = 0
        } else {
            for (long long u = 1; u < q; ++u) {
                if (gcd_ll(u, q) != 1) continue;
                long long ubar = mod_inverse(u, q);
                long long r = (((sign * n2 % q) * ubar) % q + q) % q;
                rhs += e_of(static_cast<double>(r) / q) * Sc.sum(0, p + u * n1);
            }
        }
    }
    return {lhs, rhs};
}

cplx eta(long long n, cplx s) {
    if (n < 1) throw std::domain_error("eta: n must be >= 1");
    cplx acc = 0.0;
    for (long long a : divisors(n)) {
        long long d = n / a;
        acc += std::exp((s - 0.5) * std::log(static_cast<double>(a) / d));
    }
    return acc;
}

cplx eisenstein_phi(cplx s) {
    using special::ln_gamma;
    const double half_log_pi = 0.57236494292470008707171367567653;
    cplx num = riemann_zeta(2.0 * s - 1.0);
    cplx den = riemann_zeta(2.0 * s);
    return std::exp(half_log_pi + ln_gamma(s - 0.5) - ln_gamma(s)) * num / den;
}

cplx eisenstein_phi_n(long long n, cplx s) {
    using special::ln_gamma;
    const double log_pi = 1.1447298858494001741434273513531;
    cplx pref = std::exp(s * log_pi - ln_gamma(s)) / riemann_zeta(2.0 * s);
    return pref * eta(n, s) / std::sqrt(static_cast<double>(n));
}

double omega_weight(double t) {
    if (std::abs(t) < 1e-12) return 0.0;
    cplx ph = eisenstein_phi_n(1, cplx(0.5, t));
    return 4.0 * pi * std::norm(ph) / std::cosh(pi * t);
}

} // namespace mm::arith
