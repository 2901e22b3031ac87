#pragma once

#include "bppnet/model.hpp"
#include "bppnet/quadrature.hpp"

namespace bppnet {

// Arguments of the Gauss hypergeometric function 2F1(a, b; c; z).
// Only the negative real axis is supported.
struct HypParams {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double z = 0.0;
};

// 2F1(a, b; c; z) for z <= 0.
//
// Three regimes keep every summed series geometric with ratio <= 2/3:
//   -0.5 <= z <= 0   direct Maclaurin series,
//   -2   <= z < -0.5 Pfaff transform to z/(z-1) in (1/3, 2/3],
//           z < -2   reflection to 1/z in (-1/2, 0) (needs b - a non-integral;
//                    falls back to the Pfaff series otherwise).
// Throws NumericalError if a series does not settle within 10000 terms.
double gauss_2f1(const HypParams& p);

// 2F1(a, b; c; z) - 1, without the cancellation of forming 1 + small.
double gauss_2f1_minus_one(const HypParams& p);

// (-z)^a * 2F1(a, b; c; z) for z < 0. Finite for large |z| where the
// unscaled function underflows and its prefactor overflows.
double gauss_2f1_scaled(const HypParams& p);

// C(alpha, s, x) = 2 * integral_0^x u / (1 + s u^-alpha) du
//               = x^2 - x^2 2F1(1, 2/alpha; 1 + 2/alpha; -x^alpha / s).
double c_kernel(double alpha, double s, double x);

// D(alpha, s, x, n) = 2 * integral_0^x u (1 + s u^-alpha)^-n du
//   = 2 x^2 (x^alpha/s)^n / (2 + alpha n)
//       * 2F1(n, 2/alpha + n; 1 + 2/alpha + n; -x^alpha / s).
double d_kernel(double alpha, double s, double x, int n);

// Quadrature of the defining integrals. Test cross-checks only.
double c_kernel_by_quadrature(double alpha, double s, double x,
                              const QuadratureSettings& q = {1e-13, 1e-300, 2000});
double d_kernel_by_quadrature(double alpha, double s, double x, int n,
                              const QuadratureSettings& q = {1e-13, 1e-300, 2000});

// arccos(clamp(t, -1, 1)); throws DomainError when |t| > 1 + 1e-9.
double safe_arccos(double t);

// x - sin(x) cos(x), accurate for small x.
double lens_segment(double x);

// (1 + s u^-alpha)^-1 written as u^alpha / (u^alpha + s) so u -> 0 is safe.
inline double interferer_factor(double alpha, double s, double u)
{
    if (s <= 0.0)
        return 1.0;
    if (u <= 0.0)
        return 0.0;
    const double ua = std::pow(u, alpha);
    return ua / (ua + s);
}

} // namespace bppnet
