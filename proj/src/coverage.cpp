#include "bppnet/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "bppnet/distances.hpp"

namespace bppnet {
namespace {

constexpr double kClampSlack = 1e-9;
constexpr int kMaxAntennas = 10;

double finalize_probability(double p)
{
    if (!(p >= -kClampSlack && p <= 1.0 + kClampSlack))
        throw NumericalError("probability left [0, 1] beyond quadrature noise", p);
    return std::clamp(p, 0.0, 1.0);
}

CoverageResult to_result(const QuadResult& r)
{
    return {finalize_probability(r.value), r.error, r.evaluations};
}

// Integral over the serving distance of laplace(s = beta r^alpha, r) times
// density(r) on [0, w+], split at w-.
template <class Laplace, class Density>
QuadResult serving_integral(const PiecewiseDistanceLaw& law, double beta, double alpha,
                            const QuadratureSettings& q, Laplace&& laplace, Density&& density)
{
    auto integrand = [&](double r) {
        const double f = density(r);
        if (f == 0.0)
            return 0.0;
        return laplace(beta * std::pow(r, alpha), r) * f;
    };
    const double cuts[] = {law.inner_break()};
    return integrate(integrand, 0.0, law.outer_break(), cuts, serving_settings(q));
}

double joint_uniform_at(double nu0, double beta, int n, const NetworkModel& model,
                        const QuadratureSettings& q)
{
    if (model.interferer_count() == 0)
        return 1.0;
    const PiecewiseDistanceLaw law(nu0, model.disk_radius);
    auto laplace = [&](double s, double) { return laplace_joint_uniform(s, nu0, n, model, q); };
    auto density = [&](double r) { return law.pdf(r); };
    return serving_integral(law, beta, model.path_loss_exponent, q, laplace, density).value;
}

double joint_kclosest_at(double nu0, double beta, int n, int k, const NetworkModel& model,
                         InterfererWeighting weighting, const QuadratureSettings& q)
{
    if (model.interferer_count() == 0)
        return 1.0;
    const PiecewiseDistanceLaw law(nu0, model.disk_radius);
    const auto weights = split_weights(k, model.n_tx, model.n_active, weighting);
    const OrderStatConfig cfg{k, model.n_tx, law};
    auto laplace = [&](double s, double r) {
        return joint_factors_kclosest(s, r, nu0, n, model, weights, q);
    };
    auto density = [&](double r) { return serving_pdf_kclosest(r, cfg); };
    return serving_integral(law, beta, model.path_loss_exponent, q, laplace, density).value;
}

} // namespace

void validate(const DiversityQuery& query)
{
    validate(query.base);
    if (query.antennas < 1 || query.antennas > kMaxAntennas)
        throw ValidationError(Violation::Antennas, "antenna count must lie in [1, 10]");
}

QuadratureSettings serving_settings(const QuadratureSettings& q)
{
    QuadratureSettings s = q;
    s.rel_tol = q.rel_tol * 10.0;
    return s;
}

QuadratureSettings receiver_settings(const QuadratureSettings& q)
{
    QuadratureSettings s = q;
    s.rel_tol = q.rel_tol * 100.0;
    return s;
}

CoverageResult coverage_ref_uniform(double nu0, double beta, const NetworkModel& model,
                                    const QuadratureSettings& q)
{
    if (model.interferer_count() == 0)
        return {};
    const PiecewiseDistanceLaw law(nu0, model.disk_radius);
    auto laplace = [&](double s, double) { return laplace_uniform(s, nu0, model, q); };
    auto density = [&](double r) { return law.pdf(r); };
    return to_result(serving_integral(law, beta, model.path_loss_exponent, q, laplace, density));
}

CoverageResult coverage_ref_kclosest(double nu0, double beta, int k, const NetworkModel& model,
                                     InterfererWeighting weighting, const QuadratureSettings& q)
{
    if (model.interferer_count() == 0)
        return {};
    const PiecewiseDistanceLaw law(nu0, model.disk_radius);
    const auto weights = split_weights(k, model.n_tx, model.n_active, weighting);
    const OrderStatConfig cfg{k, model.n_tx, law};
    auto laplace = [&](double s, double r) {
        return laplace_kclosest(s, nu0, r, model, weights, q);
    };
    auto density = [&](double r) { return serving_pdf_kclosest(r, cfg); };
    return to_result(serving_integral(law, beta, model.path_loss_exponent, q, laplace, density));
}

CoverageResult coverage_central(const TxSelectionPolicy& policy, double beta,
                                const NetworkModel& model, InterfererWeighting weighting,
                                const QuadratureSettings& q)
{
    if (model.interferer_count() == 0)
        return {};
    const PiecewiseDistanceLaw law(0.0, model.disk_radius);
    const double alpha = model.path_loss_exponent;
    if (is_uniform(policy)) {
        auto laplace = [&](double s, double) { return laplace_uniform_central(s, model, q); };
        auto density = [&](double r) { return central_pdf(r, model.disk_radius); };
        return to_result(serving_integral(law, beta, alpha, q, laplace, density));
    }
    const int k = serving_order(policy);
    const auto weights = split_weights(k, model.n_tx, model.n_active, weighting);
    const OrderStatConfig cfg{k, model.n_tx, law};
    auto laplace = [&](double s, double r) {
        return laplace_kclosest_central(s, r, model, weights, q);
    };
    auto density = [&](double r) { return serving_pdf_kclosest(r, cfg); };
    return to_result(serving_integral(law, beta, alpha, q, laplace, density));
}

CoverageResult coverage_random(const TxSelectionPolicy& policy, double beta,
                               const NetworkModel& model, InterfererWeighting weighting,
                               const QuadratureSettings& q)
{
    if (model.interferer_count() == 0)
        return {};
    const double rd = model.disk_radius;
    long inner_evaluations = 0;
    auto integrand = [&](double nu0) {
        const auto r = is_uniform(policy)
                           ? coverage_ref_uniform(nu0, beta, model, q)
                           : coverage_ref_kclosest(nu0, beta, serving_order(policy), model,
                                                   weighting, q);
        inner_evaluations += r.evaluations;
        return r.probability * pdf_v0(nu0, rd);
    };
    auto result = integrate(integrand, 0.0, rd, receiver_settings(q));
    result.evaluations += inner_evaluations;
    return to_result(result);
}

CoverageResult coverage(const SirQuery& query, const QuadratureSettings& q)
{
    validate(query);
    validate(q);
    const double beta = query.threshold_linear;
    struct Visitor {
        const SirQuery& query;
        const QuadratureSettings& q;
        double beta;
        CoverageResult operator()(const CentralReceiver&) const
        {
            return coverage_central(query.policy, beta, query.model, query.weighting, q);
        }
        CoverageResult operator()(const ReceiverAtRadius& at) const
        {
            if (is_uniform(query.policy))
                return coverage_ref_uniform(at.nu0, beta, query.model, q);
            return coverage_ref_kclosest(at.nu0, beta, serving_order(query.policy), query.model,
                                         query.weighting, q);
        }
        CoverageResult operator()(const RandomReceiver&) const
        {
            return coverage_random(query.policy, beta, query.model, query.weighting, q);
        }
    };
    return std::visit(Visitor{query, q, beta}, query.receiver);
}

double joint_success(const DiversityQuery& query, double nu0, const QuadratureSettings& q)
{
    validate(query);
    if (!is_uniform(query.base.policy))
        throw ValidationError(Violation::ServingOrder, "joint_success expects uniform selection");
    return finalize_probability(joint_uniform_at(nu0, query.base.threshold_linear, query.antennas,
                                                 query.base.model, q));
}

double joint_success_kclosest(const DiversityQuery& query, double nu0, const QuadratureSettings& q)
{
    validate(query);
    if (is_uniform(query.base.policy))
        throw ValidationError(Violation::ServingOrder,
                              "joint_success_kclosest expects k-closest selection");
    return finalize_probability(joint_kclosest_at(nu0, query.base.threshold_linear,
                                                  query.antennas, serving_order(query.base.policy),
                                                  query.base.model, query.base.weighting, q));
}

double sc_coverage(const DiversityQuery& query, double nu0, const QuadratureSettings& q)
{
    validate(query);
    const int n = query.antennas;
    auto joint = [&](int m) {
        DiversityQuery sub = query;
        sub.antennas = m;
        return is_uniform(query.base.policy) ? joint_success(sub, nu0, q)
                                             : joint_success_kclosest(sub, nu0, q);
    };

    if (!query.correlated)
        return finalize_probability(1.0 - std::pow(1.0 - joint(1), n));

    // Neumaier-compensated alternating sum.
    double sum = 0.0, carry = 0.0;
    for (int m = 1; m <= n; ++m) {
        const double term = (m % 2 == 1 ? 1.0 : -1.0) * binomial(n, m) * joint(m);
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            carry += (sum - t) + term;
        else
            carry += (term - t) + sum;
        sum = t;
    }
    const double total = sum + carry;
    if (!(total >= -kClampSlack && total <= 1.0 + kClampSlack))
        throw NumericalError("inclusion-exclusion cancellation pushed the result out of [0, 1]",
                             total);
    return std::clamp(total, 0.0, 1.0);
}

} // namespace bppnet
