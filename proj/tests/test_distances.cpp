#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "bppnet/distances.hpp"
#include "oracle.hpp"

using namespace bppnet;
using doctest::Approx;

namespace {

struct DiskSampler {
    std::mt19937_64 gen;
    std::uniform_real_distribution<double> unit{0.0, 1.0};

    explicit DiskSampler(unsigned long seed) : gen(seed) {}

    // Rejection from the bounding square.
    void point(double& x, double& y)
    {
        do {
            x = 2 * unit(gen) - 1;
            y = 2 * unit(gen) - 1;
        } while (x * x + y * y > 1);
    }

    double distance_from(double nu0)
    {
        double x, y;
        point(x, y);
        return std::hypot(x - nu0, y);
    }
};

} // namespace

TEST_CASE("central law")
{
    CHECK(central_pdf(0.5, 1.0) == Approx(1.0));
    CHECK(central_cdf(1.0, 1.0) == 1.0);
    CHECK(central_cdf(0.5, 1.0) == Approx(0.25));
    CHECK(central_pdf(1.0, 2.0) == Approx(0.5));
    CHECK_THROWS_AS(central_pdf(1.2, 1.0), DomainError);
    CHECK_THROWS_AS(central_cdf(-0.1, 1.0), DomainError);
}

TEST_CASE("off-centre law: listed values")
{
    CHECK(cond_cdf_w(0.5, 0.3, 1.0) == Approx(0.25).epsilon(1e-15));
    CHECK(cond_cdf_w(1.3, 0.3, 1.0) == Approx(1.0).epsilon(1e-15));
    CHECK(cond_pdf_w(0.4, 0.3, 1.0) == Approx(0.8).epsilon(1e-15));
    CHECK(serving_pdf_uniform(0.4, 0.3, 1.0) == Approx(0.8).epsilon(1e-15));
    CHECK(pdf_v0(0.5, 1.0) == Approx(1.0));
    CHECK(pdf_v0(1.0, 1.0) == Approx(2.0));
    CHECK_THROWS_AS(cond_pdf_w(1.31, 0.3, 1.0), DomainError);
    CHECK_THROWS_AS(cond_cdf_w(0.5, 1.2, 1.0), DomainError);
    CHECK_THROWS_AS(pdf_v0(1.5, 1.0), DomainError);
}

TEST_CASE("CDF matches the circle-intersection area")
{
    for (double rd : {1.0, 2.5})
        for (double f : {0.05, 0.3, 0.6, 0.95, 1.0}) {
            const double nu0 = f * rd;
            for (int i = 1; i < 50; ++i) {
                const double w = (rd + nu0) * i / 50.0;
                CAPTURE(rd);
                CAPTURE(nu0);
                CAPTURE(w);
                CHECK(cond_cdf_w(w, nu0, rd) ==
                      Approx(double(oracle::link_cdf(w, nu0, rd))).epsilon(1e-12));
                CHECK(PiecewiseDistanceLaw(nu0, rd).ccdf(w) ==
                      Approx(1.0 - double(oracle::link_cdf(w, nu0, rd))).epsilon(1e-9).scale(1e-12));
            }
        }
}

TEST_CASE("density is the derivative of the CDF")
{
    for (double nu0 : {0.1, 0.3, 0.7})
        for (double w : {0.2, 0.5, 0.85, 1.05, 1.1, 1.25}) {
            if (w >= 1.0 + nu0 - 1e-3)
                continue;
            const double h = 1e-5;
            const double fd =
                double((oracle::link_cdf(w + h, nu0, 1.0) - oracle::link_cdf(w - h, nu0, 1.0)) / (2 * h));
            CAPTURE(nu0);
            CAPTURE(w);
            CHECK(std::abs(cond_pdf_w(w, nu0, 1.0) - fd) < 1e-6);
        }
}

TEST_CASE("density normalises and branches meet at w-")
{
    for (int i = 1; i <= 19; ++i) {
        const double nu0 = 0.05 * i;
        const PiecewiseDistanceLaw law(nu0, 1.0);
        const double wm = law.inner_break();
        CAPTURE(nu0);
        CHECK(std::abs(law.inner_pdf(wm) - law.outer_pdf(wm)) <= 1e-9);
        CHECK(std::abs(law.inner_cdf(wm) - law.outer_cdf(wm)) <= 1e-9);
        CHECK(law.branch(wm) == DistanceBranch::Inner);
        const long double total =
            oracle::simpson([&](long double w) { return law.pdf(double(w)); }, 0, wm) +
            oracle::simpson([&](long double w) { return law.pdf(double(w)); }, wm, law.outer_break());
        CHECK(std::abs(double(total) - 1.0) < 1e-6);
    }
}

TEST_CASE("zero offset reduces to the central law")
{
    for (double w : {0.01, 0.3, 0.77, 1.0}) {
        CHECK(std::abs(cond_pdf_w(w, 0.0, 1.0) - central_pdf(w, 1.0)) <= 1e-12);
        CHECK(std::abs(cond_pdf_w(w, 1e-13, 1.0) - central_pdf(w, 1.0)) <= 1e-12);
    }
    const PiecewiseDistanceLaw edge(1.0, 1.0);
    CHECK(edge.inner_break() == 0.0);
    CHECK(edge.branch(0.5) == DistanceBranch::Outer);
}

TEST_CASE("empirical CDF at w = 0.9, nu0 = 0.3")
{
    DiskSampler s(12345);
    const long n = 10000000;
    long below = 0;
    for (long i = 0; i < n; ++i)
        below += s.distance_from(0.3) <= 0.9;
    const double p = double(below) / n;
    const double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(cond_cdf_w(0.9, 0.3, 1.0) - p) < 3 * se);
}

TEST_CASE("k-closest density")
{
    const OrderStatConfig central{1, 5, PiecewiseDistanceLaw(0.0, 1.0)};
    CHECK(serving_pdf_kclosest(0.5, central) == Approx(1.58203125).epsilon(1e-14));
    CHECK(order_statistic_coefficient(2, 5) == 20.0);
    CHECK(binomial(6, 2) == 15.0);

    for (double nu0 : {0.0, 0.3, 0.8}) {
        const PiecewiseDistanceLaw law(nu0, 1.0);
        for (int k = 1; k <= 6; ++k) {
            const OrderStatConfig cfg{k, 6, law};
            auto f = [&](long double r) { return serving_pdf_kclosest(double(r), cfg); };
            long double total = oracle::simpson(f, 0, law.inner_break());
            if (!law.central())
                total += oracle::simpson(f, law.inner_break(), law.outer_break());
            CAPTURE(nu0);
            CAPTURE(k);
            CHECK(std::abs(double(total) - 1.0) < 1e-6);
            // CDF of the k-th order statistic through the binomial tail.
            const double r = 0.6;
            const double F = double(oracle::link_cdf(r, nu0, 1.0));
            double tail = 0;
            for (int j = k; j <= 6; ++j)
                tail += double(oracle::binom(6, j)) * std::pow(F, j) * std::pow(1 - F, 6 - j);
            CHECK(serving_cdf_kclosest(r, cfg) == Approx(tail).epsilon(1e-12));
        }
        for (double r : {0.1, 0.5, 0.95, 1.05}) {
            if (r > law.outer_break())
                continue;
            double sum = 0;
            for (int k = 1; k <= 6; ++k)
                sum += serving_pdf_kclosest(r, {k, 6, law});
            CHECK(std::abs(sum - 6 * law.pdf(r)) <= 1e-9);
        }
    }
    CHECK_THROWS_AS(serving_pdf_kclosest(0.5, {7, 6, PiecewiseDistanceLaw(0.0, 1.0)}), DomainError);
}

TEST_CASE("2nd-closest of 5 at nu0 = 0.3: histogram")
{
    DiskSampler s(777);
    const long networks = 1000000;
    const int bins = 26;
    const double width = 1.3 / bins;
    std::vector<long> count(bins, 0);
    double d[5];
    for (long t = 0; t < networks; ++t) {
        for (double& x : d)
            x = s.distance_from(0.3);
        std::nth_element(d, d + 1, d + 5);
        count[std::min(bins - 1, int(d[1] / width))]++;
    }
    const OrderStatConfig cfg{2, 5, PiecewiseDistanceLaw(0.3, 1.0)};
    for (int b = 0; b < bins; ++b) {
        const double lo = b * width, hi = lo + width;
        const long double mass =
            oracle::simpson([&](long double r) { return serving_pdf_kclosest(double(r), cfg); }, lo, hi, 200);
        const double p = double(count[b]) / networks;
        const double se = std::sqrt(std::max(double(mass) * (1 - double(mass)), 1e-12) / networks);
        CAPTURE(b);
        CHECK(std::abs(p - double(mass)) < 3 * se + 1e-9);
    }
}

TEST_CASE("truncated interferer laws")
{
    CHECK(pdf_u_in(0.6, 0.2, 0.5, 1.0) == 0.0);
    CHECK(pdf_u_out(0.4, 0.2, 0.5, 1.0) == 0.0);
    for (double nu0 : {0.0, 0.3})
        for (double r : {0.5, 0.8, 1.2}) {
            const PiecewiseDistanceLaw law(nu0, 1.0);
            if (r >= law.outer_break())
                continue;
            // Open rule: the truncated densities jump at u = r.
            auto in = [&](long double u) { return pdf_u_in(double(u), nu0, r, 1.0); };
            auto out = [&](long double u) { return pdf_u_out(double(u), nu0, r, 1.0); };
            const double wm = law.inner_break();
            long double ti, to;
            if (r <= wm) {
                ti = oracle::tanh_sinh(in, 0, r);
                to = oracle::tanh_sinh(out, r, wm) + (law.central() ? 0 : oracle::tanh_sinh(out, wm, law.outer_break()));
            } else {
                ti = oracle::tanh_sinh(in, 0, wm) + oracle::tanh_sinh(in, wm, r);
                to = oracle::tanh_sinh(out, r, law.outer_break());
            }
            CAPTURE(nu0);
            CAPTURE(r);
            CHECK(std::abs(double(ti) - 1) < 1e-6);
            CHECK(std::abs(double(to) - 1) < 1e-6);
            const double u = 0.4 * r;
            CHECK(pdf_u_in(u, nu0, r, 1.0) == Approx(law.pdf(u) / law.cdf(r)).epsilon(1e-12));
        }
    CHECK_THROWS_AS(pdf_u_in(0.1, 0.3, 0.0, 1.0), ConditioningError);
    CHECK_THROWS_AS(pdf_u_out(1.25, 0.3, 1.3, 1.0), ConditioningError);
}

TEST_CASE("receiver radius density normalises")
{
    const long double total = oracle::simpson([](long double v) { return pdf_v0(double(v), 2.0); }, 0, 2);
    CHECK(double(total) == Approx(1.0).epsilon(1e-12));
}
