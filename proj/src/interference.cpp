#include "bppnet/interference.hpp"

#include <algorithm>
#include <cmath>

#include "bppnet/quadrature.hpp"
#include "bppnet/specfun.hpp"

namespace bppnet {
namespace {

void check_s(double s)
{
    if (!(s >= 0.0))
        throw DomainError("Laplace argument must be non-negative");
}

constexpr double kSliverWidth = 1e-6;

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

// Weighted sum over the closer-interferer count of in^l * out^(N-1-l).
// Factors with zero weight or zero exponent are never formed.
template <class Inner, class Outer>
double mix_split(const SplitWeights& w, int interferers, Inner&& inner, Outer&& outer)
{
    bool need_in = false, need_out = false;
    for (int l = 0; l <= w.n_a_max; ++l) {
        if (w.weights[l] == 0.0)
            continue;
        need_in |= l > 0;
        need_out |= interferers - l > 0;
    }
    const double in = need_in ? inner() : 0.0;
    const double out = need_out ? outer() : 0.0;
    double total = 0.0;
    for (int l = 0; l <= w.n_a_max; ++l) {
        if (w.weights[l] == 0.0)
            continue;
        total += w.weights[l] * std::pow(in, l) * std::pow(out, interferers - l);
    }
    return clamp_unit(total);
}

void check_weights(const SplitWeights& w, const NetworkModel& model)
{
    if (w.n_tx != model.n_tx || w.n_active != model.n_active)
        throw ValidationError(Violation::ActiveCount, "split weights built for another model");
}

} // namespace

SplitWeights split_weights(int k, int n_tx, int n_active, InterfererWeighting mode)
{
    if (n_tx < 1)
        throw ValidationError(Violation::TxCount, "transmitter count must be at least 1");
    if (n_active < 1 || n_active > n_tx)
        throw ValidationError(Violation::ActiveCount, "active count must lie in [1, n_tx]");
    if (k < 1 || k > n_tx)
        throw ValidationError(Violation::ServingOrder, "serving order k must lie in [1, n_tx]");

    SplitWeights w;
    w.k = k;
    w.n_tx = n_tx;
    w.n_active = n_active;
    w.p = n_tx == 1 ? 0.0 : double(k - 1) / double(n_tx - 1);
    w.n_a_max = std::min(k - 1, n_active - 1);
    w.weights.assign(w.n_a_max + 1, 0.0);

    const int m = n_active - 1;
    if (mode == InterfererWeighting::PaperBinomialTruncated) {
        double norm = 0.0;
        for (int l = 0; l <= w.n_a_max; ++l) {
            w.weights[l] = std::pow(w.p, l) * std::pow(1.0 - w.p, m - l) * binomial(m, l);
            norm += w.weights[l];
        }
        for (double& x : w.weights)
            x /= norm;
    } else {
        const double total = binomial(n_tx - 1, m);
        for (int l = 0; l <= w.n_a_max; ++l)
            w.weights[l] = binomial(k - 1, l) * binomial(n_tx - k, m - l) / total;
    }
    return w;
}

double interferer_moment(double s, int n, double lo, double hi, const PiecewiseDistanceLaw& law,
                         double alpha, const QuadratureSettings& q)
{
    if (!(hi > lo))
        return 0.0;
    const double rd2 = law.disk_radius() * law.disk_radius();
    const double w_minus = law.inner_break();
    const double knee = std::pow(s, 1.0 / alpha);
    const double cuts[] = {knee};
    double total = 0.0;

    const double a1 = lo, b1 = std::min(hi, w_minus);
    if (b1 > a1) {
        if (b1 - a1 >= 0.25 * b1) {
            auto kernel = [&](double x) {
                return n == 1 ? c_kernel(alpha, s, x) : d_kernel(alpha, s, x, n);
            };
            const double head = a1 > 0.0 ? kernel(a1) : 0.0;
            total += (kernel(b1) - head) / rd2;
        } else {
            auto f = [&](double u) { return std::pow(interferer_factor(alpha, s, u), n) * 2.0 * u / rd2; };
            total += integrate(f, a1, b1, cuts, q).value;
        }
    }

    const double a2 = std::max(lo, w_minus), b2 = hi;
    if (b2 > a2) {
        auto f = [&](double u) { return std::pow(interferer_factor(alpha, s, u), n) * law.outer_pdf(u); };
        // A sliver only a few million ulps wide cannot be resolved to rel_tol;
        // its share of any outer integral is of order its width.
        if (b2 - a2 < kSliverWidth * law.disk_radius())
            total += try_integrate(f, a2, b2, cuts, q).value;
        else
            total += integrate(f, a2, b2, cuts, q).value;
    }
    return total;
}

double laplace_uniform(double s, double nu0, const NetworkModel& model, const QuadratureSettings& q)
{
    return laplace_joint_uniform(s, nu0, 1, model, q);
}

double laplace_uniform_central_generic(double s, const NetworkModel& model)
{
    check_s(s);
    if (s == 0.0 || model.interferer_count() == 0)
        return 1.0;
    const double rd = model.disk_radius;
    const double avg = c_kernel(model.path_loss_exponent, s, rd) / (rd * rd);
    return std::pow(clamp_unit(avg), model.interferer_count());
}

double laplace_uniform_central(double s, const NetworkModel& model, const QuadratureSettings&)
{
    check_s(s);
    if (s == 0.0 || model.interferer_count() == 0)
        return 1.0;
    if (model.path_loss_exponent != 4.0)
        return laplace_uniform_central_generic(s, model);
    const double rd2 = model.disk_radius * model.disk_radius;
    const double root = std::sqrt(s);
    const double avg = 1.0 - root / rd2 * std::atan(rd2 / root);
    return std::pow(clamp_unit(avg), model.interferer_count());
}

double laplace_joint_uniform(double s, double nu0, int n, const NetworkModel& model,
                             const QuadratureSettings& q)
{
    check_s(s);
    if (n < 1)
        throw ValidationError(Violation::Antennas, "antenna count must be at least 1");
    if (s == 0.0 || model.interferer_count() == 0)
        return 1.0;
    const PiecewiseDistanceLaw law(nu0, model.disk_radius);
    const double avg =
        interferer_moment(s, n, 0.0, law.outer_break(), law, model.path_loss_exponent, q);
    return std::pow(clamp_unit(avg), model.interferer_count());
}

double laplace_kclosest(double s, double nu0, double r, const NetworkModel& model,
                        const SplitWeights& weights, const QuadratureSettings& q)
{
    return joint_factors_kclosest(s, r, nu0, 1, model, weights, q);
}

double joint_factors_kclosest(double s, double r, double nu0, int n, const NetworkModel& model,
                              const SplitWeights& weights, const QuadratureSettings& q)
{
    check_s(s);
    check_weights(weights, model);
    if (n < 1)
        throw ValidationError(Violation::Antennas, "antenna count must be at least 1");
    const int interferers = model.interferer_count();
    if (interferers == 0 || s == 0.0)
        return 1.0;

    const PiecewiseDistanceLaw law(nu0, model.disk_radius);
    if (!(r > 0.0 && r <= law.outer_break()))
        throw DomainError("serving distance outside (0, r_d + nu0]");
    const double alpha = model.path_loss_exponent;

    auto inner = [&] {
        const double mass = law.cdf(r);
        if (!(mass > 0.0))
            throw ConditioningError("no room for interferers closer than the serving node");
        QuadratureSettings qm = q;
        qm.abs_tol *= mass;
        return clamp_unit(interferer_moment(s, n, 0.0, r, law, alpha, qm) / mass);
    };
    auto outer = [&] {
        const double mass = law.ccdf(r);
        if (!(mass > 0.0))
            throw ConditioningError("no room for interferers farther than the serving node");
        QuadratureSettings qm = q;
        qm.abs_tol *= mass;
        return clamp_unit(interferer_moment(s, n, r, law.outer_break(), law, alpha, qm) / mass);
    };
    return mix_split(weights, interferers, inner, outer);
}

double laplace_kclosest_central(double s, double r, const NetworkModel& model,
                                const SplitWeights& weights, const QuadratureSettings& q)
{
    check_s(s);
    check_weights(weights, model);
    const int interferers = model.interferer_count();
    if (interferers == 0 || s == 0.0)
        return 1.0;
    const double rd = model.disk_radius;
    if (!(r > 0.0 && r <= rd))
        throw DomainError("serving distance outside (0, r_d]");
    const double alpha = model.path_loss_exponent;

    auto inner = [&] { return clamp_unit(c_kernel(alpha, s, r) / (r * r)); };
    auto outer = [&] {
        if (!(r < rd))
            throw ConditioningError("no room for interferers farther than the serving node");
        if (rd - r >= 0.25 * rd)
            return clamp_unit((c_kernel(alpha, s, rd) - c_kernel(alpha, s, r)) / (rd * rd - r * r));
        // Close to the edge the kernel difference cancels; integrate directly.
        auto f = [&](double u) { return 2.0 * u * interferer_factor(alpha, s, u); };
        return clamp_unit(integrate(f, r, rd, q).value / ((rd - r) * (rd + r)));
    };
    return mix_split(weights, interferers, inner, outer);
}

} // namespace bppnet
