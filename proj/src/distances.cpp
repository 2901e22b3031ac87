#include "bppnet/distances.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bppnet/specfun.hpp"

namespace bppnet {
namespace {

constexpr double kCentralSnap = 1e-12;
constexpr double kSupportSlack = 1e-12;

} // namespace

PiecewiseDistanceLaw::PiecewiseDistanceLaw(double nu0, double disk_radius)
    : nu0_(nu0), rd_(disk_radius)
{
    if (!(disk_radius > 0.0))
        throw DomainError("disk radius must be positive");
    if (!(nu0 >= 0.0 && nu0 <= disk_radius * (1.0 + kSupportSlack)))
        throw DomainError("receiver radius outside [0, disk radius]");
    if (nu0_ < kCentralSnap * rd_)
        nu0_ = 0.0;
    nu0_ = std::min(nu0_, rd_);
    // Move nu0 by under one ulp of rd so that rd - nu0 and rd + nu0 are both
    // exact; the lens factors below then vanish exactly at the breakpoints.
    nu0_ = (rd_ + nu0_) - rd_;
    w_minus_ = rd_ - nu0_;
    w_plus_ = rd_ + nu0_;
}

void PiecewiseDistanceLaw::check_support(double w) const
{
    if (!(w >= 0.0 && w <= w_plus_ * (1.0 + kSupportSlack)))
        throw DomainError("distance outside the support [0, r_d + nu0]");
}

DistanceBranch PiecewiseDistanceLaw::branch(double w) const
{
    return w <= w_minus_ ? DistanceBranch::Inner : DistanceBranch::Outer;
}

namespace {

// Angles of the lens geometry in half-angle form. acos near -1 loses half the
// digits, which shows up as a jump of ~1e-8 at w-; these are exact at both
// breakpoints. `one_minus` and `one_plus` are (1 - cos) and (1 + cos) up to a
// common positive factor. The small factors subtract w and rd first, which
// is exact near w = rd, before adding nu0.
double half_angle(double one_minus, double one_plus)
{
    return 2.0 * std::atan2(std::sqrt(std::max(0.0, one_minus)), std::sqrt(std::max(0.0, one_plus)));
}

} // namespace

double PiecewiseDistanceLaw::theta_star(double w) const
{
    return half_angle(((rd_ - w) + nu0_) * (rd_ + w - nu0_), ((w - rd_) + nu0_) * (w + nu0_ + rd_));
}

double PiecewiseDistanceLaw::phi_star(double w) const
{
    return half_angle(((w - rd_) + nu0_) * (w + rd_ - nu0_), ((rd_ - w) + nu0_) * (nu0_ + rd_ + w));
}

double PiecewiseDistanceLaw::phi_star_complement(double w) const
{
    return half_angle(((rd_ - w) + nu0_) * (nu0_ + rd_ + w), ((w - rd_) + nu0_) * (w + rd_ - nu0_));
}

double PiecewiseDistanceLaw::inner_pdf(double w) const { return 2.0 * w / (rd_ * rd_); }

double PiecewiseDistanceLaw::inner_cdf(double w) const { return w * w / (rd_ * rd_); }

double PiecewiseDistanceLaw::outer_pdf(double w) const
{
    return 2.0 * w / (std::numbers::pi * rd_ * rd_) * theta_star(w);
}

double PiecewiseDistanceLaw::outer_cdf(double w) const
{
    const double th = theta_star(w);
    const double ph = phi_star(w);
    return (w * w * lens_segment(th) + rd_ * rd_ * lens_segment(ph)) /
           (std::numbers::pi * rd_ * rd_);
}

double PiecewiseDistanceLaw::pdf(double w) const
{
    check_support(w);
    if (w > w_plus_)
        return 0.0;
    return branch(w) == DistanceBranch::Inner ? inner_pdf(w) : outer_pdf(w);
}

double PiecewiseDistanceLaw::cdf(double w) const
{
    check_support(w);
    if (w >= w_plus_)
        return 1.0;
    return branch(w) == DistanceBranch::Inner ? inner_cdf(w) : outer_cdf(w);
}

double PiecewiseDistanceLaw::ccdf(double w) const
{
    check_support(w);
    if (w >= w_plus_)
        return 0.0;
    if (branch(w) == DistanceBranch::Inner)
        return (rd_ - w) * (rd_ + w) / (rd_ * rd_);
    // Area of the disk outside the circle of radius w around the receiver,
    // written in terms of pi - phi* so both lens terms vanish at w+.
    const double th = theta_star(w);
    const double ph_c = phi_star_complement(w);
    const double v = (rd_ * rd_ * lens_segment(ph_c) - w * w * lens_segment(th)) /
                     (std::numbers::pi * rd_ * rd_);
    return std::clamp(v, 0.0, 1.0);
}

double central_pdf(double w, double disk_radius)
{
    if (!(w >= 0.0 && w <= disk_radius))
        throw DomainError("distance outside [0, r_d]");
    return 2.0 * w / (disk_radius * disk_radius);
}

double central_cdf(double w, double disk_radius)
{
    if (!(w >= 0.0 && w <= disk_radius))
        throw DomainError("distance outside [0, r_d]");
    return w * w / (disk_radius * disk_radius);
}

double cond_cdf_w(double w, double nu0, double disk_radius)
{
    return PiecewiseDistanceLaw(nu0, disk_radius).cdf(w);
}

double cond_pdf_w(double w, double nu0, double disk_radius)
{
    return PiecewiseDistanceLaw(nu0, disk_radius).pdf(w);
}

double serving_pdf_uniform(double r, double nu0, double disk_radius)
{
    return cond_pdf_w(r, nu0, disk_radius);
}

double binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i)
        c = c * (n - k + i) / i;
    return c < 9e15 ? std::nearbyint(c) : c;
}

double order_statistic_coefficient(int k, int n) { return k * binomial(n, k); }

double serving_pdf_kclosest(double r, const OrderStatConfig& cfg)
{
    if (cfg.k < 1 || cfg.k > cfg.n_tx)
        throw DomainError("order k outside [1, n_tx]");
    const double f = cfg.law.pdf(r);
    if (f == 0.0)
        return 0.0;
    const double F = cfg.law.cdf(r);
    const double G = cfg.law.ccdf(r);
    return order_statistic_coefficient(cfg.k, cfg.n_tx) * std::pow(F, cfg.k - 1) * f *
           std::pow(G, cfg.n_tx - cfg.k);
}

double serving_cdf_kclosest(double r, const OrderStatConfig& cfg)
{
    if (cfg.k < 1 || cfg.k > cfg.n_tx)
        throw DomainError("order k outside [1, n_tx]");
    const double F = cfg.law.cdf(r);
    const double G = cfg.law.ccdf(r);
    // P(at least k of n below r); summed from the short tail for accuracy.
    double below = 0.0;
    for (int j = 0; j < cfg.k; ++j)
        below += binomial(cfg.n_tx, j) * std::pow(F, j) * std::pow(G, cfg.n_tx - j);
    return std::clamp(1.0 - below, 0.0, 1.0);
}

double pdf_u_in(double u, double nu0, double r, double disk_radius)
{
    const PiecewiseDistanceLaw law(nu0, disk_radius);
    if (!(r > 0.0))
        throw ConditioningError("inner interferer law needs a positive serving distance");
    const double Fr = law.cdf(r);
    law.pdf(u); // support check
    if (u >= r)
        return 0.0;
    return law.pdf(u) / Fr;
}

double pdf_u_out(double u, double nu0, double r, double disk_radius)
{
    const PiecewiseDistanceLaw law(nu0, disk_radius);
    const double tail = law.ccdf(r);
    if (!(tail > 0.0))
        throw ConditioningError("outer interferer law needs a serving distance below r_d + nu0");
    const double f = law.pdf(u);
    if (u <= r)
        return 0.0;
    return f / tail;
}

double pdf_v0(double nu0, double disk_radius)
{
    if (!(nu0 >= 0.0 && nu0 <= disk_radius))
        throw DomainError("receiver radius outside [0, r_d]");
    return 2.0 * nu0 / (disk_radius * disk_radius);
}

} // namespace bppnet
