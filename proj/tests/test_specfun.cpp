#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bppnet/specfun.hpp"
#include "oracle.hpp"

using namespace bppnet;
using doctest::Approx;

namespace {

// 2F1(n, b; b + 1; z) = b * integral_0^1 t^(b-1) (1 - z t)^-n dt.
double euler_2f1(double n, double b, double z)
{
    auto f = [&](long double t) { return std::pow(t, (long double)b - 1) * std::pow(1 - z * t, -(long double)n); };
    const long double cut = z < -1 ? -1.0L / z : 1.0L;
    long double v = oracle::tanh_sinh(f, 0, cut);
    if (cut < 1)
        v += oracle::tanh_sinh(f, cut, 1);
    return double(b * v);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("2F1 closed forms")
{
    CHECK(gauss_2f1({1.0, 0.5, 1.5, -4.0}) == Approx(std::atan(2.0) / 2.0).epsilon(1e-14));
    CHECK(gauss_2f1({1.0, 0.5, 1.5, -4.0}) == Approx(0.5535743588970452).epsilon(1e-14));
    for (double z : {-0.2, -0.5, -0.9, -1.7, -2.5, -40.0, -1e4}) {
        CAPTURE(z);
        CHECK(gauss_2f1({1.0, 1.0, 2.0, z}) == Approx(std::log1p(-z) / -z).epsilon(1e-13));
        CHECK(gauss_2f1({0.7, 1.3, 1.3, z}) == Approx(std::pow(1.0 - z, -0.7)).epsilon(1e-13));
    }
    CHECK(gauss_2f1({2.0, 1.5, 3.0, 0.0}) == 1.0);
}

TEST_CASE("2F1 against the Euler integral across all three regimes")
{
    for (double alpha : {2.5, 3.0, 4.0, 5.5})
        for (int n : {1, 2, 5})
            for (double z : {-0.1, -0.49, -0.51, -1.3, -1.99, -2.01, -9.0, -300.0, -1e5}) {
                const double b = 2.0 / alpha + n;
                CAPTURE(alpha);
                CAPTURE(n);
                CAPTURE(z);
                CHECK(rel(gauss_2f1({double(n), b, b + 1.0, z}), euler_2f1(n, b, z)) < 1e-11);
            }
}

TEST_CASE("2F1 minus one and scaled forms")
{
    const HypParams p{1.0, 0.5, 1.5, -1e-9};
    // atan(x)/x - 1 ~ -x^2/3 for x^2 = 1e-9.
    CHECK(gauss_2f1_minus_one(p) == Approx(-1e-9 / 3.0).epsilon(1e-6));
    const HypParams big{2.0, 2.5, 3.5, -1e8};
    CHECK(gauss_2f1_scaled(big) ==
          Approx(std::pow(1e8, 2.0) * euler_2f1(2.0, 2.5, -1e8)).epsilon(1e-9));
}

TEST_CASE("2F1 rejects positive arguments")
{
    CHECK_THROWS_AS(gauss_2f1({1.0, 1.0, 2.0, 0.5}), DomainError);
}

TEST_CASE("c_kernel closed form at alpha = 4")
{
    CHECK(c_kernel(4.0, 1.0, 1.0) == Approx(1.0 - std::numbers::pi / 4.0).epsilon(1e-14));
    for (double s : {1e-4, 0.01, 0.5, 1.0, 3.0, 50.0})
        for (double x : {0.05, 0.3, 1.0, 1.7}) {
            CAPTURE(s);
            CAPTURE(x);
            const long double rs = std::sqrt((long double)s), x2 = (long double)x * x;
            const long double expect = x2 - rs * std::atan(x2 / rs);
            CHECK(rel(c_kernel(4.0, s, x), double(expect)) < 1e-12);
        }
    CHECK(c_kernel(4.0, 1.0, 0.0) == 0.0);
}

TEST_CASE("kernels against their defining integrals")
{
    for (double alpha : {2.2, 3.0, 4.0, 6.0})
        for (double s : {1e-3, 0.2, 1.0, 40.0})
            for (double x : {0.1, 0.8, 1.9})
                for (int n : {1, 2, 3, 8}) {
                    const long double knee = std::pow(s, 1.0 / alpha);
                    auto f = [&](long double u) {
                        const long double ua = std::pow(u, (long double)alpha);
                        return 2 * u * std::pow(ua / (ua + s), (long double)n);
                    };
                    long double ref;
                    if (knee < x)
                        ref = oracle::tanh_sinh(f, 0, knee) + oracle::tanh_sinh(f, knee, x);
                    else
                        ref = oracle::tanh_sinh(f, 0, x);
                    CAPTURE(alpha);
                    CAPTURE(s);
                    CAPTURE(x);
                    CAPTURE(n);
                    CHECK(rel(d_kernel(alpha, s, x, n), double(ref)) < 1e-10);
                    if (n == 1) {
                        CHECK(rel(c_kernel(alpha, s, x), double(ref)) < 1e-10);
                        CHECK(rel(d_kernel(alpha, s, x, 1), c_kernel(alpha, s, x)) < 1e-12);
                    }
                }
}

TEST_CASE("quadrature kernels agree with the series kernels")
{
    CHECK(rel(c_kernel_by_quadrature(4.0, 0.3, 0.9), c_kernel(4.0, 0.3, 0.9)) < 1e-11);
    CHECK(rel(d_kernel_by_quadrature(3.0, 2.0, 1.4, 4), d_kernel(3.0, 2.0, 1.4, 4)) < 1e-11);
}

TEST_CASE("kernels are increasing in x and bounded by x^2")
{
    double prev = 0.0;
    for (int i = 1; i <= 40; ++i) {
        const double x = 0.05 * i;
        const double c = c_kernel(3.5, 0.7, x);
        CHECK(c > prev);
        CHECK(c <= x * x);
        prev = c;
    }
}

TEST_CASE("safe_arccos clamps round-off and rejects real violations")
{
    CHECK(safe_arccos(1.0 + 1e-12) == 0.0);
    CHECK(safe_arccos(-1.0 - 1e-12) == Approx(std::numbers::pi));
    CHECK_THROWS_AS(safe_arccos(1.1), DomainError);
}

TEST_CASE("lens_segment matches x - sin x cos x")
{
    for (double x : {1e-6, 1e-3, 0.05, 0.099, 0.1, 0.5, 2.0, 3.1}) {
        CAPTURE(x);
        // x - sin(2x)/2 as its Taylor series, summed to 40 terms.
        long double expect = 0, term = x;
        for (int k = 1; k <= 40; ++k) {
            term *= -4.0L * x * x / ((2.0L * k) * (2.0L * k + 1));
            expect -= term;
        }
        CHECK(rel(lens_segment(x), double(expect)) < 1e-13);
    }
    CHECK(lens_segment(0.0) == 0.0);
}

TEST_CASE("interferer_factor edge cases")
{
    CHECK(interferer_factor(4.0, 0.0, 0.3) == 1.0);
    CHECK(interferer_factor(4.0, 1.0, 0.0) == 0.0);
    CHECK(interferer_factor(4.0, 1.0, 1.0) == Approx(0.5));
}
