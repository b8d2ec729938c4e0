#include "mm/moments.hpp"

#include "mm/arith.hpp"
#include "mm/errors.hpp"
#include "mm/kuznetsov.hpp"
#include "mm/special.hpp"
#include "mm/transforms.hpp"

#include "json.hpp"

#include <cmath>

namespace mm::moments {

using special::GammaKind;
using special::LanglandsParams;

bool SpectralWeight::band_ok() const {
    return M > std::pow(T, 3.0 / 8.0) && M <= T;
}

double weight_integral(double T, double M, bool log_factor, bool two_sided) {
    if (!(T > 0.0) || !(M > 0.0))
        throw std::domain_error("weight_integral: T, M must be positive");
    auto f = [&](double t) {
        double v = kuznetsov::spectral_weight_k(t, T, M) * std::tanh(pi * t) * t;
        return log_factor ? v * std::log(std::abs(t) + 1e-300) : v;
    };
    double hi = T + 12.0 * M;
    double v = quad::adaptive(f, 0.0, hi, 1e-10 * T * M);
    return two_sided ? 2.0 * v : v;
}

namespace {

bool is_prime(long long p) {
    if (p < 2) return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// truncation for the diagonal m-sums: V decays once m^2 p >> t^3, and the
// Rankin-Selberg cancellation of A(1,m)/m keeps the cut's tail at the few
// permille level from ~2e4 on
long long default_m_cut(long long p, double T, double M) {
    double t_hi = T + 3.0 * M;
    double by_decay = std::sqrt(30.0 * t_hi * t_hi * t_hi / p);
    return std::llround(std::clamp(by_decay, 4000.0, 20000.0));
}

// S_kappa = sum_m coeff(m)/m * H^{(pow)}_{.,p}
//         = (2/pi) int_0^inf k tanh(pi t) t (1/2pi i) int p^{-kappa u}
//              D(1 + 2u) F(u) G(u,t) du/u^pow dt
// with D the truncated Dirichlet series of the coefficients.  The contour
// nodes are shared across t; the Dirichlet factor is hoisted out of the
// t-quadrature.
double diagonal_hsum(const std::vector<cplx>& coeff, long long p, int kappa, int u_pow,
                     double T, double M, const LanglandsParams& par, int A = 16) {
    const double sigma = 0.7, H = 12.0;
    const double t_hi = T + 9.0 * M, t_lo = std::max(0.0, T - 9.0 * M);
    double y_max = std::pow(static_cast<double>(coeff.size()), 2.0) *
                   std::pow(static_cast<double>(p), kappa);
    double omega = std::log(std::max(2.0, y_max)) + 3.0 * std::log(2.0 + t_hi) + 4.0;
    int npu = std::max(24, static_cast<int>(0.6 * omega) + 8);
    const int N = static_cast<int>(H * npu);
    const double step = H / N;

    // t-independent node data: u_j and p^{-kappa u} D(1+2u) F(u)/u^pow
    std::vector<cplx> u(2 * N + 1), base(2 * N + 1);
    for (int j = 0; j <= 2 * N; ++j) {
        u[j] = cplx(sigma, (j - N) * step);
        cplx dir = 0.0;
        for (std::size_t m = 1; m < coeff.size(); ++m) {
            if (coeff[m] == 0.0) continue;
            dir += coeff[m] * std::exp(-(1.0 + 2.0 * u[j]) * std::log(double(m)));
        }
        cplx upow = (u_pow == 1) ? u[j] : u[j] * u[j];
        base[j] = std::exp(-static_cast<double>(kappa) * u[j] *
                           std::log(static_cast<double>(p))) *
                  special::mollifier_F(u[j], A) * dir / upow * (step / two_pi);
        if (j == 0 || j == 2 * N) base[j] *= 0.5;
    }

    const cplx lams[3] = {par.alpha, par.beta, par.gamma};
    auto inner = [&](double t) {
        cplx den = 0.0;
        for (const cplx& l : lams)
            for (double eps : {1.0, -1.0})
                den += special::ln_gamma(0.5 * (0.5 - l + eps * cplx(0.0, t)));
        cplx acc = 0.0;
        const double log_pi_c = 1.1447298858494001741434273513531;
        for (int j = 0; j <= 2 * N; ++j) {
            cplx num = 0.0;
            for (const cplx& l : lams)
                for (double eps : {1.0, -1.0})
                    num += special::ln_gamma(0.5 * (0.5 + u[j] - l + eps * cplx(0.0, t)));
            acc += base[j] * std::exp(num - den - 3.0 * u[j] * log_pi_c);
        }
        return acc.real(); // integrand of a real transform; contour symmetric
    };

    auto f = [&](double t) {
        return kuznetsov::spectral_weight_k(t, T, M) * std::tanh(pi * t) * t * inner(t);
    };
    const int panels = 14;
    auto run = [&](int n) {
        double acc = 0.0, hseg = (t_hi - t_lo) / n;
        for (int i = 0; i < n; ++i)
            acc += quad::gl_panel(f, t_lo + i * hseg, t_lo + (i + 1) * hseg, 16);
        return acc;
    };
    double a = run(panels), b = run(panels + 7);
    if (std::abs(a - b) > 1e-6 * (1.0 + std::abs(b)))
        throw accuracy_error("diagonal_hsum: t-quadrature not settling", std::abs(a - b));
    return 2.0 / pi * b;
}

std::vector<cplx> dirichlet_coefficients(const gl3::GL3Coefficients& f, bool dual_side,
                                         long long m_cut) {
    std::vector<cplx> c(static_cast<std::size_t>(m_cut) + 1, cplx(0.0));
    for (long long m = 1; m <= m_cut; ++m)
        c[static_cast<std::size_t>(m)] =
            dual_side ? f.coefficient(m, 1) : f.coefficient(1, m);
    return c;
}

} // namespace

DiagonalResult diagonal_term(const gl3::GL3Coefficients& f, long long p, double T,
                             double M, bool dual_side, long long m_cut) {
    if (!is_prime(p)) throw std::domain_error("diagonal_term: p must be prime");
    if (m_cut <= 0) m_cut = default_m_cut(p, T, M);
    DiagonalResult out;
    out.m_truncation = m_cut;

    auto coeff = dirichlet_coefficients(f, dual_side, m_cut);
    const auto& par = f.params();
    double s1 = diagonal_hsum(coeff, p, 1, 1, T, M, par);
    double s2 = diagonal_hsum(coeff, p, 3, 1, T, M, par);
    cplx a_p1 = dual_side ? f.coefficient(1, p) : f.coefficient(p, 1);
    double ap = a_p1.real();
    double sp = std::sqrt(static_cast<double>(p));
    out.route_a = 0.5 * ap / sp * s1 - 0.5 / (p * sp) * s2;

    auto l_dual = gl3::l_value_at_one(dual_side ? f : f.dual(), 0, m_cut);
    double I0 = weight_integral(T, M, false);
    out.route_b = l_dual.value * (ap * p - 1.0) / (p * sp * pi) * I0;
    out.gap = std::abs(out.route_a - out.route_b);
    out.pieces = {{"hsum_kappa1", s1},
                  {"hsum_kappa3", s2},
                  {"A_p_1", ap},
                  {"L1_dual", l_dual.value},
                  {"L1_dual_tail", l_dual.tail},
                  {"weight_integral", I0}};
    return out;
}

DerivativeDiagonalResult derivative_diagonal_term(const gl3::GL3Coefficients& f,
                                                  long long p, double T, double M,
                                                  bool dual_side, long long m_cut) {
    if (!is_prime(p)) throw std::domain_error("derivative_diagonal_term: p must be prime");
    if (m_cut <= 0) m_cut = default_m_cut(p, T, M);
    DerivativeDiagonalResult out;
    out.m_truncation = m_cut;

    auto coeff = dirichlet_coefficients(f, dual_side, m_cut);
    const auto& par = f.params();
    // the derivative moment's H uses (1/pi) int_R = (2/pi) int_0^inf
    double s1 = diagonal_hsum(coeff, p, 1, 2, T, M, par);
    double s2 = diagonal_hsum(coeff, p, 3, 2, T, M, par);
    cplx a_p1 = dual_side ? f.coefficient(1, p) : f.coefficient(p, 1);
    double ap = a_p1.real();
    double sp = std::sqrt(static_cast<double>(p));
    out.route_a = 0.5 * ap / sp * s1 - 0.5 / (p * sp) * s2;

    auto l0 = gl3::l_value_at_one(dual_side ? f : f.dual(), 0, m_cut);
    auto l1 = gl3::l_value_at_one(dual_side ? f : f.dual(), 1, m_cut);
    double Ilog = weight_integral(T, M, true, true);
    double I0 = weight_integral(T, M, false, true);
    const double l2pi = std::log(two_pi), lp = std::log(static_cast<double>(p));

    double pref = (ap * p - 1.0) / (2.0 * p * sp * pi);
    out.main_log = 3.0 * l0.value * pref * Ilog;
    // quoted constant K = 2L' - 3L log 2pi - L log p applied to (A p - 1)
    double Kq = 2.0 * l1.value - 3.0 * l0.value * l2pi - l0.value * lp;
    out.main_const_quoted = Kq * pref * I0;
    // residue-derived constant: the H_{mp,p} sum carries p^{-3u}, so its
    // order-2 residue picks up 3 log p rather than log p
    double K1 = 2.0 * l1.value - 3.0 * l0.value * l2pi - l0.value * lp;
    double K3 = 2.0 * l1.value - 3.0 * l0.value * l2pi - 3.0 * l0.value * lp;
    out.main_const = (ap * p * K1 - K3) / (2.0 * p * sp * pi) * I0;
    out.gap = std::abs(out.route_a - (out.main_log + out.main_const));
    out.pieces = {{"hsum_kappa1", s1},        {"hsum_kappa3", s2},
                  {"L1_dual", l0.value},      {"L1p_dual", l1.value},
                  {"weight_integral_log", Ilog}, {"weight_integral", I0},
                  {"K_quoted", Kq},           {"K_kappa3", K3}};
    return out;
}

MomentPrediction predict_moment(const gl3::GL3Coefficients& f, long long p, double T,
                                double M, bool derivative) {
    if (p != 1 && !is_prime(p)) throw std::domain_error("predict_moment: p must be 1 or prime");
    MomentPrediction out;
    long long trunc = 10000;
    auto l0d = gl3::l_value_at_one(f.dual(), 0, trunc);
    auto l0 = f.self_dual() ? l0d : gl3::l_value_at_one(f, 0, trunc);

    if (!derivative) {
        double I0 = weight_integral(T, M, false);
        double direct, dual;
        if (p == 1) {
            // untwisted analogue: main = (L(1,dual) + L(1,f))/pi * I0
            direct = l0d.value / pi * I0;
            dual = l0.value / pi * I0;
        } else {
            double ap = f.coefficient(p, 1).real(), a1p = f.coefficient(1, p).real();
            double denom = std::pow(static_cast<double>(p), 1.5) * pi;
            direct = l0d.value * (ap * p - 1.0) / denom * I0;
            dual = l0.value * (a1p * p - 1.0) / denom * I0;
        }
        out.main = direct + dual;
        out.pieces = {{"direct", direct}, {"dual", dual}, {"weight_integral", I0}};
    } else {
        auto l1d = gl3::l_value_at_one(f.dual(), 1, trunc);
        auto l1 = f.self_dual() ? l1d : gl3::l_value_at_one(f, 1, trunc);
        double Ilog = weight_integral(T, M, true, true);
        double I0t = weight_integral(T, M, false, true);
        const double l2pi = std::log(two_pi);
        double lp = (p == 1) ? 0.0 : std::log(static_cast<double>(p));
        double ap = (p == 1) ? 1.0 : f.coefficient(p, 1).real();
        double a1p = (p == 1) ? 1.0 : f.coefficient(1, p).real();
        double fac_d = (p == 1) ? 1.0 : (ap * p - 1.0);
        double fac_u = (p == 1) ? 1.0 : (a1p * p - 1.0);
        double denom = 2.0 * std::pow(static_cast<double>(p), 1.5) * pi;
        double direct = 3.0 * l0d.value * fac_d / denom * Ilog;
        double dual = 3.0 * l0.value * fac_u / denom * Ilog;
        out.main = direct + dual;
        double K = 2.0 * l1d.value - 3.0 * l0d.value * l2pi - l0d.value * lp;
        double Kt = 2.0 * l1.value - 3.0 * l0.value * l2pi - l0.value * lp;
        out.secondary = (K * fac_d + Kt * fac_u) / denom * I0t;
        out.pieces = {{"direct", direct},       {"dual", dual},
                      {"K", K},                 {"K_dual", Kt},
                      {"weight_integral_log", Ilog}, {"weight_integral", I0t}};
    }
    out.pieces["L1_dual"] = l0d.value;
    out.pieces["L1"] = l0.value;
    out.error_budget = std::pow(M, -3.0) * std::pow(T, 2.5) * p +
                       std::pow(T, 1.5) / M + M * std::pow(T, 1.0 / 7.0);
    return out;
}

std::string MomentPrediction::to_json(double T, double M, long long p) const {
    nlohmann::json j;
    j["version"] = 1;
    j["T"] = T;
    j["M"] = M;
    j["p"] = p;
    j["main"] = main;
    j["secondary"] = secondary;
    j["error_budget"] = error_budget;
    for (const auto& [k, v] : pieces) j["pieces"][k] = v;
    return j.dump();
}

EmpiricalResult empirical_moment(const gl3::GL3Coefficients& f, long long p, double T,
                                 double M, const std::vector<gl3::MaassFormRecord>& forms,
                                 bool derivative, bool strict) {
    if (!is_prime(p)) throw std::domain_error("empirical_moment: p must be prime");
    EmpiricalResult out;
    const auto& par = f.params();
    const auto parity = derivative ? gl3::MaassFormRecord::Parity::odd
                                   : gl3::MaassFormRecord::Parity::even;


    double cut_budget = 30.0 * std::pow(T + 3.0 * M, 3.0);
    long long afe_cut_used = 0;

    for (const auto& u : forms) {
        if (u.parity != parity) continue;
        double kw = kuznetsov::spectral_weight_k(u.t_j, T, M);
        if (kw < 1e-14) continue;
        if (p > u.n_max()) {
            if (strict) throw corpus_error("empirical_moment: missing lambda(p)");
            out.corpus_limited = true;
            continue;
        }
        long long cut = std::llround(std::min(cut_budget, 30.0 * std::pow(u.t_j, 3.0)));
        if (cut > u.n_max()) {
            out.corpus_limited = true;
            if (strict)
                throw corpus_error("empirical_moment: corpus shorter than the AFE cut");
            cut = u.n_max();
        }
        afe_cut_used = std::max(afe_cut_used, cut);

        transforms::ContourSpec spec =
            transforms::ContourSpec::for_afe(static_cast<double>(cut), u.t_j);
        special::GammaFactorKind km{GammaKind::minus, u.t_j, par};
        special::GammaFactorKind kp{GammaKind::plus, u.t_j, par};
        transforms::AfeTransformTable tm(km, derivative ? 2 : 1, 16, spec);
        transforms::AfeTransformTable tp(kp, derivative ? 2 : 1, 16, spec);

        double L = 0.0;
        for (long long m = 1; m * m <= cut; ++m) {
            for (long long n = 1; m * m * n <= cut && n <= u.n_max(); ++n) {
                double y = static_cast<double>(m) * m * n;
                cplx term = u.lam(n) / std::sqrt(y) *
                            (f.coefficient(n, m) * tm.value(y) +
                             f.coefficient(m, n) * tp.value(y));
                L += term.real();
            }
        }
        out.cusp_part += kw * u.omega * u.lam(p) * L;
    }

    if (!derivative) {
        // Eisenstein line: (1/4pi) int k omega(t) conj(eta(p)) |L(1/2-it,f)|^2_AFE dt
        double t_hi = T + 9.0 * M, t_lo = std::max(0.0, T - 9.0 * M);
        long long cut = std::min<long long>(std::llround(cut_budget), 4000);
        auto integrand = [&](double t) {
            transforms::ContourSpec spec =
                transforms::ContourSpec::for_afe(static_cast<double>(cut), t);
            special::GammaFactorKind km{GammaKind::minus, t, par};
            special::GammaFactorKind kp{GammaKind::plus, t, par};
            transforms::AfeTransformTable tm(km, 1, 16, spec), tp(kp, 1, 16, spec);
            cplx s(0.5, t);
            cplx acc = 0.0;
            for (long long m = 1; m * m <= cut; ++m)
                for (long long n = 1; m * m * n <= cut; ++n) {
                    double y = static_cast<double>(m) * m * n;
                    acc += arith::eta(n, s) / std::sqrt(y) *
                           (f.coefficient(n, m) * tm.value(y) +
                            f.coefficient(m, n) * tp.value(y));
                }
            double kw = kuznetsov::spectral_weight_k(t, T, M);
            return kw * arith::omega_weight(t) *
                   (std::conj(arith::eta(p, s)) * acc).real();
        };
        const int panels = 10;
        double acc = 0.0, hseg = (t_hi - t_lo) / panels;
        for (int i = 0; i < panels; ++i)
            acc += quad::gl_panel(integrand, t_lo + i * hseg, t_lo + (i + 1) * hseg, 16);
        out.eisenstein_part = acc / (4.0 * pi) * 2.0; // even integrand, t and -t
    }
    out.afe_cut = afe_cut_used;
    out.value = out.cusp_part + out.eisenstein_part;
    return out;
}

} // namespace mm::moments
