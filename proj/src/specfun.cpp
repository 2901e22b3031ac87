#include "bppnet/specfun.hpp"

#include <cmath>
#include <limits>
#include <math.h>

namespace bppnet {
namespace {

constexpr int kMaxTerms = 10000;
// Pfaff at large |z| has ratio z/(z-1) close to 1.
constexpr int kMaxTermsSlow = 2000000;
constexpr double kStopRatio = 1e-17;

// Sum of the Maclaurin series of 2F1 from term `first` (0 or 1) onward.
double maclaurin(double a, double b, double c, double z, int first, int max_terms = kMaxTerms)
{
    double term = 1.0;
    double sum = first == 0 ? 1.0 : 0.0;
    for (int k = 0; k < max_terms; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if (term == 0.0)
            return sum;
        if (!std::isfinite(sum))
            break;
        const double next_ratio =
            std::abs((a + k + 1) * (b + k + 1) / ((c + k + 1) * (k + 2.0)) * z);
        if (std::abs(term) < kStopRatio * std::abs(sum) && next_ratio < 1.0)
            return sum;
    }
    throw NumericalError("2F1 series did not converge within the iteration cap");
}

// Gamma(x) as (log|Gamma|, sign); sign 0 at the poles.
struct LogGamma {
    double log_abs;
    int sign;
};

LogGamma log_gamma(double x)
{
    if (x <= 0.0 && x == std::floor(x))
        return {0.0, 0};
    int sign = 1;
    const double lg = lgamma_r(x, &sign);
    return {lg, sign};
}

// Gamma(n1) Gamma(n2) / (Gamma(d1) Gamma(d2)).
double gamma_ratio(double n1, double n2, double d1, double d2)
{
    const auto a = log_gamma(n1), b = log_gamma(n2), c = log_gamma(d1), d = log_gamma(d2);
    if (c.sign == 0 || d.sign == 0)
        return 0.0;
    return a.sign * b.sign * c.sign * d.sign *
           std::exp(a.log_abs + b.log_abs - c.log_abs - d.log_abs);
}

bool near_integer(double x) { return std::abs(x - std::nearbyint(x)) < 1e-5; }

void check_params(const HypParams& p)
{
    if (!(p.z <= 0.0) || std::isnan(p.z))
        throw DomainError("2F1 is provided for z <= 0 only");
    if (!(p.c > 0.0))
        throw DomainError("2F1 requires c > 0");
}

// (-z)^a 2F1(a, b; c; z) for z < -2 through the 1/z connection formula.
double reflected_scaled(const HypParams& p)
{
    const double a = p.a, b = p.b, c = p.c, z = p.z;
    const double w = 1.0 / z;
    const double first = gamma_ratio(c, b - a, b, c - a) * maclaurin(a, a - c + 1, a - b + 1, w, 0);
    const double second = gamma_ratio(c, a - b, a, c - b) * std::pow(-z, a - b) *
                          maclaurin(b, b - c + 1, b - a + 1, w, 0);
    return first + second;
}

double pfaff(const HypParams& p)
{
    return std::pow(1.0 - p.z, -p.a) * maclaurin(p.a, p.c - p.b, p.c, p.z / (p.z - 1.0), 0, kMaxTermsSlow);
}

} // namespace

double gauss_2f1(const HypParams& p)
{
    check_params(p);
    if (p.z == 0.0)
        return 1.0;
    if (p.z >= -0.5)
        return maclaurin(p.a, p.b, p.c, p.z, 0);
    if (p.z >= -2.0 || near_integer(p.b - p.a))
        return pfaff(p);
    return reflected_scaled(p) * std::pow(-p.z, -p.a);
}

double gauss_2f1_minus_one(const HypParams& p)
{
    check_params(p);
    if (p.z == 0.0)
        return 0.0;
    if (p.z >= -0.5)
        return maclaurin(p.a, p.b, p.c, p.z, 1);
    return gauss_2f1(p) - 1.0;
}

double gauss_2f1_scaled(const HypParams& p)
{
    check_params(p);
    if (p.z == 0.0)
        return p.a == 0.0 ? 1.0 : 0.0;
    if (p.z >= -2.0 || near_integer(p.b - p.a))
        return std::pow(-p.z, p.a) * gauss_2f1(p);
    return reflected_scaled(p);
}

double c_kernel(double alpha, double s, double x)
{
    if (x <= 0.0)
        return 0.0;
    const double t = std::pow(x, alpha) / s;
    if (!std::isfinite(t))
        return x * x;
    const double delta = 2.0 / alpha;
    return -x * x * gauss_2f1_minus_one({1.0, delta, 1.0 + delta, -t});
}

double d_kernel(double alpha, double s, double x, int n)
{
    if (x <= 0.0)
        return 0.0;
    const double t = std::pow(x, alpha) / s;
    if (!std::isfinite(t))
        return x * x;
    const double delta = 2.0 / alpha;
    const double scaled = gauss_2f1_scaled({double(n), delta + n, 1.0 + delta + n, -t});
    return 2.0 * x * x / (2.0 + alpha * n) * scaled;
}

double c_kernel_by_quadrature(double alpha, double s, double x, const QuadratureSettings& q)
{
    return d_kernel_by_quadrature(alpha, s, x, 1, q);
}

double d_kernel_by_quadrature(double alpha, double s, double x, int n, const QuadratureSettings& q)
{
    if (x <= 0.0)
        return 0.0;
    auto integrand = [=](double u) { return 2.0 * u * std::pow(interferer_factor(alpha, s, u), n); };
    // The integrand turns over near u = s^(1/alpha); split there.
    const double knee = std::pow(s, 1.0 / alpha);
    const double cuts[] = {0.5 * knee, knee, 2.0 * knee};
    return integrate(integrand, 0.0, x, cuts, q).value;
}

double safe_arccos(double t)
{
    if (!(std::abs(t) <= 1.0 + 1e-9))
        throw DomainError("arccos argument outside [-1, 1] beyond roundoff");
    return std::acos(std::clamp(t, -1.0, 1.0));
}

double lens_segment(double x)
{
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        // x - sin(2x)/2 = sum_{k>=1} (-1)^(k+1) 2^(2k) x^(2k+1) / (2k+1)!
        double term = x;
        double sum = 0.0;
        for (int k = 1; k <= 7; ++k) {
            term *= -4.0 * x2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum -= term;
        }
        return sum;
    }
    return x - std::sin(x) * std::cos(x);
}

} // namespace bppnet
