#include "mm/gl3.hpp"

#include "mm/arith.hpp"
#include "mm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>

namespace mm::gl3 {

SatakeLocal::SatakeLocal(long long p_, std::array<cplx, 3> a) : p(p_), alpha(a) {
    if (std::abs(alpha[0] * alpha[1] * alpha[2] - 1.0) > 1e-12)
        throw validation_error("SatakeLocal: product of Satake parameters must be 1");
}

// ---------------------------------------------------------------------------
// tau(n) by eta(q)^24: pentagonal-number series for eta, then three squarings
// and one product, all in __int128 (|tau(n)| <= d(n) n^{11/2} stays far below
// the 1.7e38 cap for n <= ~3e4).
// ---------------------------------------------------------------------------

namespace {

using i128 = __int128_t;

std::vector<i128> series_mul(const std::vector<i128>& a, const std::vector<i128>& b,
                             std::size_t n) {
    std::vector<i128> out(n, 0);
    for (std::size_t i = 0; i < n && i < a.size(); ++i) {
        if (a[i] == 0) continue;
        i128 ai = a[i];
        std::size_t jmax = std::min(b.size(), n - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (b[j] != 0) out[i + j] += ai * b[j];
        }
    }
    return out;
}

std::vector<double> build_tau_lambda(std::size_t N) {
    // eta(q) = sum_k (-1)^k q^{k(3k-1)/2}
    std::vector<i128> eta(N, 0);
    for (long long k = 0;; ++k) {
        long long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
        if (g1 >= static_cast<long long>(N) && g2 >= static_cast<long long>(N)) break;
        i128 sgn = (k % 2 == 0) ? 1 : -1;
        if (g1 < static_cast<long long>(N)) eta[g1] += sgn;
        if (k > 0 && g2 < static_cast<long long>(N)) eta[g2] += sgn;
    }
    auto e2 = series_mul(eta, eta, N);
    auto e4 = series_mul(e2, e2, N);
    auto e8 = series_mul(e4, e4, N);
    auto e16 = series_mul(e8, e8, N);
    auto e24 = series_mul(e16, e8, N);
    std::vector<double> lam(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        double tau = static_cast<double>(e24[n - 1]); // tau(n) = [q^{n-1}] eta^24
        lam[n] = tau / std::pow(static_cast<double>(n), 5.5);
    }
    return lam;
}

} // namespace

static std::string tau_cache_path(long long N) {
    const char* dir = std::getenv("MM_CACHE_DIR");
    std::string base = dir ? dir : ".mm_cache";
    std::filesystem::create_directories(base);
    return base + "/tau_lambda_" + std::to_string(N) + ".bin";
}

const std::vector<double>& tau_lambda_table(long long N) {
    static std::map<long long, std::vector<double>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    // reuse any table at least as long as requested
    for (auto& [len, tab] : cache)
        if (len >= N) return tab;
    // disk-backed: the eta^24 convolution is seconds of work at larger N
    std::vector<double> tab;
    std::string path = tau_cache_path(N);
    std::ifstream in(path, std::ios::binary);
    if (in) {
        tab.resize(static_cast<std::size_t>(N) + 1);
        in.read(reinterpret_cast<char*>(tab.data()),
                static_cast<std::streamsize>(tab.size() * sizeof(double)));
        if (!in || tab[1] != 1.0) tab.clear();
    }
    if (tab.empty()) {
        tab = build_tau_lambda(static_cast<std::size_t>(N));
        std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            out.write(reinterpret_cast<const char*>(tab.data()),
                      static_cast<std::streamsize>(tab.size() * sizeof(double)));
        }
        std::filesystem::rename(tmp, path);
    }
    auto it = cache.emplace(N, std::move(tab)).first;
    return it->second;
}

// ---------------------------------------------------------------------------
// GL3Coefficients
// ---------------------------------------------------------------------------

GL3Coefficients GL3Coefficients::sym2_delta(long long coeff_limit) {
    const auto& lam = tau_lambda_table(coeff_limit);
    GL3Coefficients f;
    f.id_ = "sym2_delta";
    f.params_ = special::LanglandsParams(cplx(11.0), cplx(0.0), cplx(-11.0));
    f.self_dual_ = true;
    f.prime_limit_ = coeff_limit;
    f.local_rule_ = [&lam, coeff_limit](long long p) -> std::array<cplx, 3> {
        if (p > coeff_limit)
            throw corpus_error("sym2_delta: prime " + std::to_string(p) +
                               " beyond coefficient table");
        double c = 0.5 * lam[p]; // cos(theta_p), |lam| < 2 by Deligne
        cplx a(c, std::sqrt(std::max(0.0, 1.0 - c * c)));
        cplx a2 = a * a;
        return {a2, cplx(1.0), std::conj(a2)};
    };
    return f;
}

GL3Coefficients GL3Coefficients::sym2_from_lambda(std::function<double(long long)> lambda_p,
                                                  long long prime_limit, std::string id,
                                                  const special::LanglandsParams& params) {
    GL3Coefficients f;
    f.id_ = std::move(id);
    f.params_ = params;
    f.self_dual_ = true;
    f.prime_limit_ = prime_limit;
    f.local_rule_ = [lambda_p, prime_limit](long long p) -> std::array<cplx, 3> {
        if (p > prime_limit) throw corpus_error("sym2 corpus: prime beyond table");
        double l = lambda_p(p);
        if (std::abs(l) >= 2.0)
            throw validation_error("sym2 corpus: |lambda(p)| >= 2 breaks the unitary lift");
        double c = 0.5 * l;
        cplx a(c, std::sqrt(1.0 - c * c));
        cplx a2 = a * a;
        return {a2, cplx(1.0), std::conj(a2)};
    };
    return f;
}

GL3Coefficients GL3Coefficients::eisenstein(const special::LanglandsParams& params) {
    GL3Coefficients f;
    f.id_ = "eisenstein";
    f.params_ = params;
    f.eisenstein_ = true;
    f.prime_limit_ = std::numeric_limits<long long>::max();
    // self-dual iff the parameter multiset is stable under negation
    {
        const cplx v[3] = {params.alpha, params.beta, params.gamma};
        bool used[3] = {false, false, false};
        bool ok = true;
        for (const auto& x : v) {
            bool found = false;
            for (int j = 0; j < 3; ++j) {
                if (!used[j] && std::abs(x + v[j]) < 1e-12) {
                    used[j] = found = true;
                    break;
                }
            }
            ok = ok && found;
        }
        f.self_dual_ = ok;
    }
    cplx a = params.alpha, b = params.beta, c = params.gamma;
    f.local_rule_ = [a, b, c](long long p) -> std::array<cplx, 3> {
        double lp = std::log(static_cast<double>(p));
        return {std::exp(-a * lp), std::exp(-b * lp), std::exp(-c * lp)};
    };
    return f;
}

GL3Coefficients GL3Coefficients::delta_normalized() {
    GL3Coefficients f;
    f.id_ = "delta_table";
    f.delta_table_ = true;
    f.self_dual_ = true;
    f.prime_limit_ = std::numeric_limits<long long>::max();
    return f;
}

const std::vector<cplx>& GL3Coefficients::h_seq(long long p, int len) const {
    auto it = h_cache_.find(p);
    if (it == h_cache_.end() || static_cast<int>(it->second.size()) < len + 1) {
        auto triple = local_rule_(p);
        cplx e1 = triple[0] + triple[1] + triple[2];
        cplx e2 = triple[0] * triple[1] + triple[0] * triple[2] + triple[1] * triple[2];
        cplx e3 = triple[0] * triple[1] * triple[2]; // = 1 up to rounding
        int want = std::max(len + 1, 8);
        std::vector<cplx> h(want + 1);
        h[0] = 1.0;
        for (int k = 1; k <= want; ++k) {
            cplx v = e1 * h[k - 1];
            if (k >= 2) v -= e2 * h[k - 2];
            if (k >= 3) v += e3 * h[k - 3];
            h[k] = v;
        }
        it = h_cache_.insert_or_assign(p, std::move(h)).first;
    }
    return it->second;
}

cplx GL3Coefficients::local_coefficient(long long p, int j, int k) const {
    // s_{(j+k, k, 0)} = h_{j+k} h_k - h_{j+k+1} h_{k-1}
    if (j + k > 64) throw range_error("GL3Coefficients: prime exponent above 64");
    const auto& h = h_seq(p, j + k + 1);
    cplx v = h[j + k] * h[k];
    if (k >= 1) v -= h[j + k + 1] * h[k - 1];
    return v;
}

cplx GL3Coefficients::coefficient(long long m, long long n) const {
    if (m < 1 || n < 1) throw std::domain_error("GL3Coefficients: indices must be positive");
    if (dual_view_) std::swap(m, n);
    if (delta_table_) return (m == 1 && n == 1) ? 1.0 : 0.0;
    cplx acc = 1.0;
    long long r = m, s = n;
    for (long long p = 2; p * p <= r || p * p <= s; ++p) {
        if (r % p != 0 && s % p != 0) continue;
        int j = 0, k = 0;
        while (r % p == 0) r /= p, ++j;
        while (s % p == 0) s /= p, ++k;
        acc *= local_coefficient(p, j, k);
    }
    // leftover cofactors are 1 or prime
    if (r > 1 && r == s) {
        acc *= local_coefficient(r, 1, 1);
    } else {
        if (r > 1) acc *= local_coefficient(r, 1, 0);
        if (s > 1) acc *= local_coefficient(s, 0, 1);
    }
    return acc;
}

GL3Coefficients GL3Coefficients::dual() const {
    GL3Coefficients f = *this;
    f.dual_view_ = !f.dual_view_;
    f.id_ = f.dual_view_ ? id_ + "_dual" : id_.substr(0, id_.size() - 5);
    // dual form's archimedean parameters are the negatives
    f.params_ = special::LanglandsParams(-params_.alpha, -params_.beta, -params_.gamma);
    return f;
}

std::pair<cplx, cplx> hecke_shift_identity(const GL3Coefficients& f, long long p,
                                           long long m) {
    cplx lhs = f.coefficient(p, m * p);
    cplx rhs = f.coefficient(p, 1) * f.coefficient(1, p * m) - f.coefficient(1, m);
    return {lhs, rhs};
}

double rankin_selberg_partial(const GL3Coefficients& f, long long N) {
    double acc = 0.0;
    for (long long m = 1; m * m <= N; ++m)
        for (long long n = 1; m * m * n <= N; ++n) acc += std::norm(f.coefficient(m, n));
    return acc;
}

LValueResult l_value_at_one(const GL3Coefficients& f, int derivative_order,
                            long long truncation) {
    if (truncation < 100)
        throw std::domain_error("l_value_at_one: truncation must be at least 100");
    if (derivative_order != 0 && derivative_order != 1)
        throw std::domain_error("l_value_at_one: derivative_order must be 0 or 1");
    auto partial = [&](long long X) {
        double acc = 0.0;
        for (long long m = 1; m <= X; ++m) {
            double w = (derivative_order == 0) ? 1.0 : -std::log(static_cast<double>(m));
            acc += f.coefficient(m, 1).real() * w / static_cast<double>(m);
        }
        return acc;
    };
    double s4 = partial(truncation / 4);
    double s2 = partial(truncation / 2);
    double s1 = partial(truncation);
    double m1 = std::abs(s1 - s2), m2 = std::abs(s2 - s4);
    LValueResult r;
    r.value = s1;
    r.tail = 2.0 * std::max(m1, m2) + 1e-12;
    r.converged = m1 <= 1.6 * m2 + 0.25 * r.tail;
    return r;
}

} // namespace mm::gl3
