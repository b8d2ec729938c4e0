#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mm/errors.hpp"
#include "mm/gl3.hpp"
#include "mm/transforms.hpp"

#include <cmath>

using namespace mm;
using namespace mm::transforms;
using special::GammaKind;
using special::LanglandsParams;

TEST_CASE("bump and mellin") {
    auto psi = bump_on(10.0);
    CHECK(psi(10.0) == 0.0);
    CHECK(psi(20.0) == 0.0);
    CHECK(psi(15.0) == doctest::Approx(1.0));
    // mellin at w=1 is the plain integral
    cplx m1 = mellin(psi, cplx(1.0));
    double direct = quad::adaptive([&](double y) { return psi(y); }, 10.0, 20.0, 1e-13);
    CHECK(std::abs(m1 - direct) < 1e-11 * direct);

    // Mellin inversion round-trip at sample points
    for (double y : {10.8, 12.0, 14.9, 16.3, 19.0}) {
        double back = mellin_invert(psi, y, 1.0, 800.0);
        CHECK(std::abs(back - psi(y)) < 1e-6);
    }
}

TEST_CASE("V transform: residue dominance and contour invariance") {
    auto par = LanglandsParams::unitary(0.6, -1.4);
    auto spec = ContourSpec::for_afe(1.0, 100.0);
    cplx v = afe_transform_V(1.0, 100.0, GammaKind::minus, par, spec);
    CHECK(std::abs(v - 1.0) < 0.05);

    auto s1 = ContourSpec::for_afe(10.0, 50.0, 0.7);
    auto s2 = ContourSpec::for_afe(10.0, 50.0, 1.9);
    cplx a = afe_transform_V(10.0, 50.0, GammaKind::minus, par, s1);
    cplx b = afe_transform_V(10.0, 50.0, GammaKind::minus, par, s2);
    CHECK(std::abs(a - b) < 1e-9 * (1.0 + std::abs(a)));
}

TEST_CASE("V transform decay for large y") {
    auto par = LanglandsParams::unitary(0.3, 0.1);
    double t = 30.0;
    for (double mult : {10.0, 40.0}) {
        double y = mult * t * t * t;
        auto spec = ContourSpec::for_afe(y, t, 1.0);
        cplx v = afe_transform_V(y, t, GammaKind::minus, par, spec);
        CHECK(std::abs(v) <= 2.0 * (t * t * t / y));
    }
}

TEST_CASE("U transform: invariance, realness, residue law") {
    auto par = LanglandsParams::unitary(0.9, -0.9); // self-conjugate triple
    auto s1 = ContourSpec::for_afe(4.0, 40.0, 0.6);
    auto s2 = ContourSpec::for_afe(4.0, 40.0, 1.7);
    cplx a = afe_transform_U(4.0, 40.0, GammaKind::minus, par, s1);
    cplx b = afe_transform_U(4.0, 40.0, GammaKind::minus, par, s2);
    CHECK(std::abs(a - b) < 1e-9 * (1.0 + std::abs(a)));
    CHECK(std::abs(a.imag()) < 1e-9 * (1.0 + std::abs(a))); // conjugation symmetry

    for (double y : {1.0, 4.0}) {
        auto spec = ContourSpec::for_afe(y, 500.0);
        cplx u = afe_transform_U(y, 500.0, GammaKind::minus, par, spec);
        double law = 3.0 * std::log(500.0) - 3.0 * std::log(two_pi) - std::log(y);
        CHECK(std::abs(u.real() - law) < 0.1);
    }
}

TEST_CASE("Psi transform basics") {
    LanglandsParams zero{};
    // psi identically zero
    TestFn zf{[](double) { return 0.0; }, 1.0, 2.0};
    CHECK(std::abs(voronoi_psi_exact(5.0, zero, zf, +1, -0.55)) == 0.0);

    // contour invariance across a half-unit shift
    auto psi = bump_on(1.0);
    cplx a = voronoi_psi_exact(5.0, zero, psi, +1, -0.55);
    cplx b = voronoi_psi_exact(5.0, zero, psi, +1, -0.05);
    CHECK(std::abs(a - b) < 1e-8 * (1.0 + std::abs(a)));

    // the gamma_pm combination of the spec matches gamma_0 -+ gamma_1 exactly
    auto p2 = LanglandsParams::unitary(0.5, 0.2);
    cplx s(0.3, -1.1);
    CHECK(special::voronoi_gamma_pm(s, 1, p2) ==
          special::voronoi_gamma_ell(s, 0, p2) - special::voronoi_gamma_ell(s, 1, p2));
}

TEST_CASE("Psi exact vs asymptotic model at moderate xX") {
    auto par = LanglandsParams::unitary(0.8, -0.3);
    auto psi = bump_on(10.0);
    auto cal = calibrate_psi_constants(par, +1, psi, 5e2, 2e4, 8);
    CHECK(cal.residual < 0.05);
    double sigma = std::max(-0.55, psi_sigma_effective_floor(par) + 0.3);
    PsiTransform tr(par, +1, psi, 2.5e3, sigma, 1e-9);
    for (double xX : {1e3, 4e3, 1.6e4}) {
        double x = xX / 10.0;
        cplx exact = tr.value(x);
        cplx model = voronoi_psi_asymptotic(x, psi, cal, 1);
        CHECK(std::abs(exact / model - 1.0) < 0.2);
    }
}

TEST_CASE("voronoi identity: zeros and truncation guard") {
    auto f = gl3::GL3Coefficients::eisenstein(LanglandsParams{});
    TestFn zf{[](double) { return 0.0; }, 50.0, 100.0};
    auto r = voronoi_identity_check(f, 1, 1, 1, zf, 100, 1e-5);
    CHECK(std::abs(r.lhs) == 0.0);
    CHECK(std::abs(r.rhs) < 1e-20);

    auto psi = bump_on(50.0);
    CHECK_THROWS_AS(voronoi_identity_check(f, 1, 1, 1, psi, 1, 1e-6), truncation_error);
}

TEST_CASE("voronoi identity: triple-divisor corpus with polar main term") {
    auto f = gl3::GL3Coefficients::eisenstein(LanglandsParams{});
    auto psi = bump_on(50.0);
    auto r = voronoi_identity_check(f, 1, 1, 1, psi, 12000, 1e-4);
    CHECK(std::abs(r.lhs - r.rhs) <= std::max(1e-4 * std::abs(r.lhs), r.tail_bound));
    CHECK(std::abs(r.lhs - r.rhs) < 1e-5 * std::abs(r.lhs)); // measured, much tighter
    CHECK(std::abs(r.polar) > 1.0); // the main term genuinely carries the sum
}

TEST_CASE("voronoi identity: flagship bump on [1,2]") {
    // no integers inside (1,2): lhs = 0 and the dual sum must cancel the polar
    // term; the contract is |lhs - rhs| <= max(tol |lhs|, tail bound)
    auto f = gl3::GL3Coefficients::eisenstein(LanglandsParams{});
    auto psi = bump_on(1.0);
    auto r = voronoi_identity_check(f, 1, 1, 1, psi, 24000, 2e-3);
    CHECK(std::abs(r.lhs) == 0.0);
    CHECK(std::abs(r.lhs - r.rhs) <= r.tail_bound);
    CHECK(r.tail_bound < 0.05);
}

TEST_CASE("voronoi identity: sym2 corpus at c = 2") {
    auto f = gl3::GL3Coefficients::sym2_delta(18000);
    auto psi = bump_on(50.0);
    auto r = voronoi_identity_check(f, 1, 2, 1, psi, 12000, 1e-4);
    CHECK(std::abs(r.polar) == 0.0); // cusp corpus has no polar term
    CHECK(std::abs(r.lhs - r.rhs) < 1e-4 * std::abs(r.lhs));
}

TEST_CASE("stationary phase: Fresnel model") {
    PhaseFn phase{[](double y) { return y * y; }, [](double y) { return 2.0 * y; },
                  [](double) { return 2.0; }};
    auto amp = [](double y) { return std::exp(-y * y / 200.0); };
    auto res = stationary_phase(phase, amp, -40.0, 40.0, 1e-3);
    REQUIRE(res.method == OscIntegralResult::Method::stationary_phase);
    REQUIRE(res.stationary_points.size() == 1);
    CHECK(std::abs(res.stationary_points[0]) < 1e-10);
    cplx expect = e_of(0.125) / std::sqrt(2.0);
    CHECK(std::abs(res.value - expect) < 2e-2);
    cplx direct = oscillatory_quadrature(phase.f, amp, -40.0, 40.0, 1e-10);
    CHECK(std::abs(res.value - direct) < 1e-2 * std::abs(direct));
}

TEST_CASE("stationary phase: u1 phase has negligible contribution") {
    // u1(y) = 2 sqrt(y p)/c + 3 x^{1/3} y^{1/3} is monotone increasing
    double p = 5.0, c = 1.0, x = 1e6;
    PhaseFn phase{
        [&](double y) { return 2.0 * std::sqrt(y * p) / c + 3.0 * std::cbrt(x * y); },
        [&](double y) {
            return std::sqrt(p / y) / c + std::cbrt(x) / std::cbrt(y * y) ;
        },
        [&](double y) {
            return -0.5 * std::sqrt(p) / (c * std::pow(y, 1.5)) -
                   (2.0 / 3.0) * std::cbrt(x) / std::pow(y, 5.0 / 3.0);
        }};
    auto bump = bump_on(50.0);
    auto amp = [&](double y) { return bump(y); };
    auto res = stationary_phase(phase, amp, 50.0, 100.0, 0.5);
    CHECK(res.method == OscIntegralResult::Method::no_stationary_negligible);
    CHECK(std::abs(res.value) <= res.error_estimate);
    cplx direct = oscillatory_quadrature(phase.f, amp, 50.0, 100.0, 1e-9);
    CHECK(std::abs(direct) <= res.error_estimate);
}

TEST_CASE("stationary phase: u2 phase with interior point") {
    // u2(y) = 2 sqrt(y p)/c - 3 x^{1/3} y^{1/3}, stationary at y0 = p^-3 c^6 x^2;
    // x large enough that the phase curvature across the bump is >> 1
    double p = 2.0, c = 1.0, x = 2500.0;
    double y0 = std::pow(x * c * c * c, 2.0) / std::pow(p, 3.0);
    double X = 0.75 * y0;
    auto bump = bump_on(X);
    PhaseFn phase{
        [&](double y) { return 2.0 * std::sqrt(y * p) / c - 3.0 * std::cbrt(x * y); },
        [&](double y) { return std::sqrt(p / y) / c - std::cbrt(x) / std::cbrt(y * y); },
        [&](double y) {
            return -0.5 * std::sqrt(p) / (c * std::pow(y, 1.5)) +
                   (2.0 / 3.0) * std::cbrt(x) / std::pow(y, 5.0 / 3.0);
        }};
    auto amp = [&](double y) { return bump(y); };
    auto res = stationary_phase(phase, amp, X, 2.0 * X, 1.0);
    REQUIRE(res.method == OscIntegralResult::Method::stationary_phase);
    REQUIRE(res.stationary_points.size() == 1);
    CHECK(res.stationary_points[0] == doctest::Approx(y0).epsilon(1e-8));

    // second derivative closed form at y0: (1/6) x^{-3} c^{-10} p^5
    double d2 = phase.d2(y0);
    double closed = std::pow(x, -3.0) * std::pow(c, -10.0) * std::pow(p, 5.0) / 6.0;
    CHECK(d2 == doctest::Approx(closed).epsilon(1e-10));

    // main term: a(y0) e(phi(y0) + 1/8) / sqrt(u2''(y0)) against quadrature
    cplx main = amp(y0) * e_of(phase.f(y0) + 0.125) / std::sqrt(closed);
    CHECK(std::abs(res.value - main) < 1e-12 * std::abs(main));
    cplx direct = oscillatory_quadrature(phase.f, amp, X, 2.0 * X, 1e-4 * std::abs(main));
    CHECK(std::abs(res.value - direct) < 0.05 * std::abs(direct));
}

TEST_CASE("stationary phase: degenerate point throws") {
    PhaseFn phase{[](double y) { return y * y * y * y; },
                  [](double y) { return 4.0 * y * y * y; },
                  [](double y) { return 12.0 * y * y; }};
    auto amp = [](double y) { return std::exp(-y * y); };
    CHECK_THROWS_AS(stationary_phase(phase, amp, -3.0, 3.0, 1e-3), std::domain_error);
}

TEST_CASE("stationary phase error scaling across phase octaves") {
    // relative error of the main term vs quadrature behaves like lambda^{-1/2}
    double prev_err = INFINITY;
    int improving = 0;
    for (double lam : {40.0, 160.0, 640.0, 2560.0}) {
        PhaseFn phase{[=](double y) { return lam * (y * y); },
                      [=](double y) { return 2.0 * lam * y; },
                      [=](double) { return 2.0 * lam; }};
        auto amp = [](double y) { return std::exp(1.0 - 1.0 / (1.0 - y * y)); };
        auto res = stationary_phase(phase, amp, -0.999, 0.999, 1e-6);
        cplx direct = oscillatory_quadrature(phase.f, amp, -0.999, 0.999, 1e-12);
        double err = std::abs(res.value - direct) / std::abs(direct);
        if (err < prev_err) ++improving;
        prev_err = err;
    }
    CHECK(improving >= 2);
}
