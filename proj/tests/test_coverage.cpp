#include "doctest.h"

#include <cmath>
#include <vector>

#include "bppnet/coverage.hpp"
#include "bppnet/montecarlo.hpp"
#include "bppnet/specfun.hpp"
#include "oracle.hpp"

using namespace bppnet;
using doctest::Approx;

namespace {

SirQuery make_query(TxSelectionPolicy policy, ReceiverLocation receiver, int n_tx, int n_active,
                    double beta = 1.0)
{
    SirQuery q;
    q.threshold_linear = beta;
    q.model.n_tx = n_tx;
    q.model.n_active = n_active;
    q.policy = policy;
    q.receiver = receiver;
    return q;
}

EstimateWithCI mc(const SirQuery& q, long trials, std::uint64_t seed,
                  InterfererSampling sampling = InterfererSampling::IidResample)
{
    SimulationPlan plan;
    plan.trials = trials;
    plan.seed = seed;
    plan.sampling = sampling;
    return simulate_coverage(q, plan);
}

bool within_3se(double analytic, const EstimateWithCI& e)
{
    return std::abs(analytic - e.mean) < 3 * e.sigma();
}

} // namespace

TEST_CASE("adaptive quadrature")
{
    const QuadratureSettings q{1e-12, 1e-14, 200};
    CHECK(integrate([](double u) { return 2 * u; }, 0.0, 1.0, q).value == Approx(1.0).epsilon(1e-12));
    const double cut[] = {0.7};
    const auto norm = integrate([](double u) { return cond_pdf_w(u, 0.3, 1.0); }, 0.0, 1.3, cut, q);
    CHECK(std::abs(norm.value - 1.0) < 1e-8);
    const auto k = integrate([](double u) { return u / (1 + std::pow(u, -4.0)); }, 0.0, 1.0, q);
    CHECK(k.value == Approx(0.5 * c_kernel(4.0, 1.0, 1.0)).epsilon(1e-12));
    const auto again = integrate([](double u) { return u / (1 + std::pow(u, -4.0)); }, 0.0, 1.0, q);
    CHECK(again.value == k.value);
    CHECK(again.evaluations == k.evaluations);

    const QuadratureSettings starved{1e-15, 0.0, 1};
    try {
        integrate([](double u) { return std::sqrt(u); }, 0.0, 1.0, starved);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.best_estimate() == Approx(2.0 / 3.0).epsilon(1e-3));
        CHECK(e.error_estimate() > 0.0);
    }
}

TEST_CASE("a lone active node always covers")
{
    for (ReceiverLocation rx : {ReceiverLocation{CentralReceiver{}}, ReceiverLocation{ReceiverAtRadius{0.6}},
                                ReceiverLocation{RandomReceiver{}}})
        for (TxSelectionPolicy p : {TxSelectionPolicy{UniformSelection{}}, TxSelectionPolicy{KClosestSelection{3}}})
            CHECK(coverage(make_query(p, rx, 5, 1, 100.0)).probability == 1.0);
    // The outage tail goes like sqrt(beta), so beta = 1e-9 still leaves ~1e-4.
    const auto m = make_query(UniformSelection{}, CentralReceiver{}, 5, 5).model;
    const double tiny = coverage_ref_uniform(0.5, 1e-9, m).probability;
    CHECK(tiny == Approx(double(oracle::uniform_joint(0.5, 1e-9, 5))).epsilon(1e-9));
    CHECK(tiny > 0.999);
    auto two = m;
    two.n_active = 2;
    CHECK(coverage_ref_uniform(0.5, 1e-13, two).probability >= 1 - 1e-6);
}

TEST_CASE("off-centre coverage against the nested-integral oracle")
{
    const NetworkModel m = make_query(UniformSelection{}, CentralReceiver{}, 5, 5).model;
    for (double nu0 : {0.0, 0.5, 0.9})
        for (double beta : {0.3, 1.0, 4.0}) {
            CAPTURE(nu0);
            CAPTURE(beta);
            CHECK(coverage_ref_uniform(nu0, beta, m).probability ==
                  Approx(double(oracle::uniform_joint(nu0, beta, 5))).epsilon(1e-6));
        }
    for (auto mode : {InterfererWeighting::PaperBinomialTruncated, InterfererWeighting::Hypergeometric})
        for (double nu0 : {0.0, 0.3})
            for (int k : {1, 2, 4}) {
                NetworkModel m2 = m;
                m2.n_tx = 6;
                m2.n_active = 4;
                const auto w = split_weights(k, 6, 4, mode).weights;
                CAPTURE(nu0);
                CAPTURE(k);
                CHECK(coverage_ref_kclosest(nu0, 1.0, k, m2, mode).probability ==
                      Approx(double(oracle::kclosest_joint(nu0, 1.0, k, 6, 4, w))).epsilon(1e-6));
            }
}

TEST_CASE("centre and limits agree")
{
    const NetworkModel m = make_query(UniformSelection{}, CentralReceiver{}, 5, 5).model;
    const auto mode = InterfererWeighting::PaperBinomialTruncated;
    CHECK(std::abs(coverage_central(KClosestSelection{1}, 1.0, m, mode).probability -
                   coverage_ref_kclosest(0.0, 1.0, 1, m, mode).probability) <= 1e-8);
    CHECK(std::abs(coverage_central(UniformSelection{}, 1.0, m, mode).probability -
                   coverage_ref_uniform(1e-13, 1.0, m).probability) <= 1e-8);
    // Uniform, centre, alpha = 4 in closed form under the serving integral.
    const long double central = oracle::tanh_sinh(
        [](long double r) {
            const long double rs = r * r, per = 1 - rs * std::atan(1 / rs);
            return 2 * r * std::pow(per, 4.0L);
        },
        0, 1);
    CHECK(coverage_central(UniformSelection{}, 1.0, m, mode).probability == Approx(double(central)).epsilon(1e-8));
}

TEST_CASE("coverage against simulation")
{
    auto q = make_query(UniformSelection{}, ReceiverAtRadius{0.5}, 5, 5);
    CHECK(within_3se(coverage(q).probability, mc(q, 1000000, 11)));
    q = make_query(KClosestSelection{2}, ReceiverAtRadius{0.3}, 5, 5);
    CHECK(within_3se(coverage(q).probability, mc(q, 1000000, 12)));
    q.weighting = InterfererWeighting::Hypergeometric;
    CHECK(within_3se(coverage(q).probability, mc(q, 1000000, 1, InterfererSampling::WithoutReplacementSubset)));
    q = make_query(UniformSelection{}, CentralReceiver{}, 5, 5);
    CHECK(within_3se(coverage(q).probability, mc(q, 1000000, 14)));
    q = make_query(KClosestSelection{1}, RandomReceiver{}, 5, 5);
    CHECK(within_3se(coverage(q).probability, mc(q, 1000000, 15)));
}

TEST_CASE("random receiver is an average over the radius")
{
    auto q = make_query(KClosestSelection{2}, RandomReceiver{}, 5, 4);
    const double avg = coverage(q).probability;
    double lo = 1, hi = 0;
    for (int i = 0; i <= 10; ++i) {
        const double p = coverage_ref_kclosest(0.1 * i, 1.0, 2, q.model, q.weighting).probability;
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    CHECK(avg >= lo);
    CHECK(avg <= hi);
    const long double expect = oracle::tanh_sinh(
        [&](long double v) {
            return 2 * v * coverage_ref_kclosest(double(v), 1.0, 2, q.model, q.weighting).probability;
        },
        0, 1);
    CHECK(avg == Approx(double(expect)).epsilon(1e-6));
}

TEST_CASE("monotone in threshold, active count and order")
{
    for (ReceiverLocation rx : {ReceiverLocation{CentralReceiver{}}, ReceiverLocation{ReceiverAtRadius{0.4}}}) {
        double prev = 1.1;
        for (double beta : {0.1, 0.5, 1.0, 2.0, 4.0}) {
            const double p = coverage(make_query(UniformSelection{}, rx, 5, 5, beta)).probability;
            CHECK(p <= prev);
            prev = p;
        }
        prev = 1.1;
        for (int na = 1; na <= 8; ++na) {
            const double p = coverage(make_query(KClosestSelection{1}, rx, 8, na)).probability;
            CHECK(p <= prev);
            prev = p;
        }
        prev = 1.1;
        for (int k = 1; k <= 5; ++k) {
            const double p = coverage(make_query(KClosestSelection{k}, rx, 5, 5)).probability;
            CHECK(p <= prev);
            prev = p;
        }
    }
}

TEST_CASE("joint success and selection combining")
{
    DiversityQuery d;
    d.base = make_query(UniformSelection{}, ReceiverAtRadius{0.4}, 5, 5, db_to_linear(-5.0));
    d.antennas = 1;
    const double single = coverage_ref_uniform(0.4, d.base.threshold_linear, d.base.model).probability;
    CHECK(joint_success(d, 0.4) == Approx(single).epsilon(1e-9));
    CHECK(sc_coverage(d, 0.4) == Approx(single).epsilon(1e-9));
    d.correlated = false;
    CHECK(sc_coverage(d, 0.4) == Approx(single).epsilon(1e-9));
    d.correlated = true;

    std::vector<double> joint{1.0};
    for (int n = 1; n <= 4; ++n) {
        d.antennas = n;
        joint.push_back(joint_success(d, 0.4));
        CHECK(joint[n] <= joint[n - 1] + 1e-12);
        CHECK(joint[n] == Approx(double(oracle::uniform_joint(0.4, d.base.threshold_linear, 5, n))).epsilon(1e-6));
    }
    // Bonferroni: truncated inclusion-exclusion alternates around the union.
    d.antennas = 4;
    const double any = sc_coverage(d, 0.4);
    double partial = 0;
    for (int m = 1; m <= 4; ++m) {
        partial += (m % 2 ? 1 : -1) * double(oracle::binom(4, m)) * joint[m];
        if (m < 4)
            CHECK((m % 2 ? partial >= any : partial <= any));
        else
            CHECK(partial == Approx(any).epsilon(1e-12));
    }
    d.correlated = false;
    CHECK(any <= sc_coverage(d, 0.4));
    CHECK(sc_coverage(d, 0.4) == Approx(1 - std::pow(1 - single, 4)).epsilon(1e-12));

    // Two antennas against simulation at the same point.
    d.antennas = 2;
    d.correlated = true;
    SimulationPlan plan;
    plan.trials = 1000000;
    plan.seed = 21;
    const auto est = simulate_joint_success(d, plan);
    CHECK(within_3se(joint_success(d, 0.4), est.joint[1]));
    CHECK(within_3se(sc_coverage(d, 0.4), est.any[1]));
}

TEST_CASE("k-closest joint success")
{
    DiversityQuery d;
    d.base = make_query(KClosestSelection{1}, ReceiverAtRadius{0.3}, 5, 5, 1.0);
    d.antennas = 1;
    CHECK(joint_success_kclosest(d, 0.3) ==
          Approx(coverage_ref_kclosest(0.3, 1.0, 1, d.base.model, d.base.weighting).probability).epsilon(1e-9));
    double prev = 1;
    for (int n = 1; n <= 3; ++n) {
        d.antennas = n;
        const double j = joint_success_kclosest(d, 0.3);
        CHECK(j <= prev + 1e-12);
        prev = j;
    }
    d.antennas = 2;
    const auto w = split_weights(1, 5, 5, d.base.weighting).weights;
    CHECK(joint_success_kclosest(d, 0.3) ==
          Approx(double(oracle::kclosest_joint(0.3, 1.0, 1, 5, 5, w, 2))).epsilon(1e-6));
    SimulationPlan plan;
    plan.trials = 1000000;
    plan.seed = 22;
    const auto est = simulate_joint_success(d, plan);
    CHECK(within_3se(joint_success_kclosest(d, 0.3), est.joint[1]));
    CHECK(within_3se(sc_coverage(d, 0.3), est.any[1]));
}

TEST_CASE("independent selection combining at P = 0.5")
{
    // 1 - (1 - P)^n checked through a query whose single-antenna coverage is known.
    DiversityQuery d;
    d.base = make_query(UniformSelection{}, CentralReceiver{}, 2, 2, 1.0);
    d.antennas = 2;
    d.correlated = false;
    const double p = coverage(d.base).probability;
    CHECK(sc_coverage(d, 0.0) == Approx(1 - (1 - p) * (1 - p)).epsilon(1e-12));
}

TEST_CASE("input validation")
{
    CHECK_THROWS_AS(coverage(make_query(UniformSelection{}, CentralReceiver{}, 5, 6)), ValidationError);
    CHECK_THROWS_AS(coverage(make_query(KClosestSelection{6}, CentralReceiver{}, 5, 5)), ValidationError);
    CHECK_THROWS_AS(coverage(make_query(UniformSelection{}, ReceiverAtRadius{1.5}, 5, 5)), ValidationError);
    CHECK_THROWS_AS(coverage(make_query(UniformSelection{}, CentralReceiver{}, 5, 5, 0.0)), ValidationError);
    auto q = make_query(UniformSelection{}, CentralReceiver{}, 5, 5);
    q.model.path_loss_exponent = 2.0;
    CHECK_THROWS_AS(coverage(q), ValidationError);
    DiversityQuery d;
    d.base = make_query(UniformSelection{}, CentralReceiver{}, 5, 5);
    d.antennas = 11;
    CHECK_THROWS_AS(sc_coverage(d, 0.0), ValidationError);
    d.antennas = 0;
    CHECK_THROWS_AS(sc_coverage(d, 0.0), ValidationError);
    try {
        coverage(make_query(UniformSelection{}, CentralReceiver{}, 5, 6));
    } catch (const ValidationError& e) {
        CHECK(e.violation() == Violation::ActiveCount);
    }
}

TEST_CASE("starved quadrature surfaces as a numerical error")
{
    const auto q = make_query(KClosestSelection{2}, ReceiverAtRadius{0.4}, 5, 5);
    CHECK_THROWS_AS(coverage(q, QuadratureSettings{1e-14, 1e-300, 1}), NumericalError);
}
