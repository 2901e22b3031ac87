#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "bppnet/error.hpp"
#include "bppnet/model.hpp"

namespace bppnet {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478710, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const noexcept { return error < o.error; }
};

template <class F>
Panel gauss_kronrod21(const F& f, double a, double b)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = kWgk[10] * fc;
    double resg = 0.0;
    double resabs = std::abs(resk);
    std::array<double, 10> f1{}, f2{};
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double v1 = f(center - dx);
        const double v2 = f(center + dx);
        f1[j] = v1;
        f2[j] = v2;
        resk += kWgk[j] * (v1 + v2);
        resabs += kWgk[j] * (std::abs(v1) + std::abs(v2));
        if (j % 2 == 1)
            resg += kWg[j / 2] * (v1 + v2);
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));

    const double ah = std::abs(half);
    const double value = resk * half;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > tiny / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    return {a, b, value, err};
}

} // namespace detail

// Global adaptive Gauss-Kronrod quadrature of f over [a, b], pre-split at
// every breakpoint inside (a, b). Never throws on budget exhaustion; the
// result carries converged = false and the best estimate.
template <class F>
QuadResult try_integrate(const F& f, double a, double b, std::span<const double> breakpoints,
                         const QuadratureSettings& q)
{
    QuadResult out;
    if (!(a < b))
        return out;

    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b)
            cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<detail::Panel> heap;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto p = detail::gauss_kronrod21(f, cuts[i], cuts[i + 1]);
        out.evaluations += 21;
        value += p.value;
        error += p.error;
        heap.push(p);
    }

    int panels = static_cast<int>(heap.size());
    const int budget = std::max(q.max_subdivisions, panels);
    while (error > std::max(q.abs_tol, q.rel_tol * std::abs(value))) {
        if (panels >= budget) {
            out.converged = false;
            break;
        }
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;
            break;
        }
        heap.pop();
        auto left = detail::gauss_kronrod21(f, worst.a, mid);
        auto right = detail::gauss_kronrod21(f, mid, worst.b);
        out.evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }

    // Re-sum from the panels to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = value;
    out.error = error;
    return out;
}

// Throws NumericalError (carrying the best estimate) when the subdivision
// budget runs out before the tolerance is met.
template <class F>
QuadResult integrate(const F& f, double a, double b, std::span<const double> breakpoints,
                     const QuadratureSettings& q)
{
    auto r = try_integrate(f, a, b, breakpoints, q);
    if (!r.converged)
        throw NumericalError("adaptive quadrature did not converge", r.value, r.error);
    return r;
}

template <class F>
QuadResult integrate(const F& f, double a, double b, const QuadratureSettings& q)
{
    return integrate(f, a, b, std::span<const double>{}, q);
}

} // namespace bppnet
