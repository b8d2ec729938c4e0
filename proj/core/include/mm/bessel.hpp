#ifndef MM_BESSEL_HPP
#define MM_BESSEL_HPP

#include "mm/numerics.hpp"

namespace mm::special {

// Kernel integrals behind the imaginary-order Bessel functions:
//   bessel_cc(t,x) = int_0^inf cos(x cosh z) cos(2tz) dz
//   bessel_cs(t,x) = int_0^inf sin(x cosh z) cos(2tz) dz
//   bessel_kbar(t,x) = int_0^inf cos(x sinh z) cos(2tz) dz = cosh(pi t) K_{2it}(x)
// evaluated by splitting at the last stationary point and summing accelerated
// half-wave panels beyond it.
double bessel_cc(double t, double x, double abs_tol = 1e-12, double* err_out = nullptr);
double bessel_cs(double t, double x, double abs_tol = 1e-12, double* err_out = nullptr);
double bessel_kbar(double t, double x, double abs_tol = 1e-12, double* err_out = nullptr);

// J_{2it}(x) by the defining power series (x up to ~30; throws accuracy_error
// with an estimate when cancellation eats the target accuracy).
cplx bessel_J_series(double t, double x, double* err_out = nullptr);

// J_{2it}(x) from the Mehler-Sonine integrals:
//   J_{2it}(x) = (2/pi) [ cosh(pi t) Cs(t,x) - i sinh(pi t) Cc(t,x) ]
cplx bessel_J_integral(double t, double x, double* err_out = nullptr);

// Dispatcher: series for small x, integral representation for large x.
cplx bessel_J_imag_order(double t, double x);

// (J_{2it}(x) - J_{-2it}(x)) / cosh(pi t) = -(4i/pi) tanh(pi t) Cc(t,x),
// evaluated without the e^{pi t} blowup of the two J's.
cplx bessel_J_combined(double t, double x);

// K_{2it}(x) = kbar(t,x)/cosh(pi t); real for real t, x; even in t.
double bessel_K_imag_order(double t, double x);

// Independent route: K_{2it}(x) = -pi Im I_{2it}(x) / sinh(2 pi t)
// (limit series at t = 0).  Usable while the I-series cancellation
// leaves enough digits; throws accuracy_error otherwise.
double bessel_K_via_I(double t, double x, double* err_out = nullptr);

} // namespace mm::special

#endif
