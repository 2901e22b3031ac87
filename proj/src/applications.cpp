#include "bppnet/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bppnet {
namespace {

constexpr int kInnerGrid = 2001;
constexpr double kBudgetSlack = 1e-9;

// Maximizer of f on [lo, hi]: dense grid, then golden section on the two
// cells around the best grid point. g need not be concave.
template <class F>
double argmax_1d(const F& f, double lo, double hi)
{
    if (!(hi > lo))
        return lo;
    int best = 0;
    double best_val = f(lo);
    for (int i = 1; i < kInnerGrid; ++i) {
        const double x = lo + (hi - lo) * i / (kInnerGrid - 1);
        const double v = f(x);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    const double step = (hi - lo) / (kInnerGrid - 1);
    const double x_best = lo + step * best;
    double a = std::max(lo, x_best - step), b = std::min(hi, x_best + step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x_gs = 0.5 * (a + b);
    return f(x_gs) > best_val ? x_gs : x_best;
}

double objective(const std::vector<double>& b, const std::vector<double>& pop,
                 const std::vector<double>& cov)
{
    double total = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j)
        total += pop[j] * content_gain(b[j], cov);
    return total;
}

// Local clean-up after the Lagrangian step: spend any leftover budget, then
// move mass between pairs of contents while that helps.
void polish(std::vector<double>& b, const std::vector<double>& pop, const std::vector<double>& cov,
            double budget)
{
    const std::size_t n = b.size();
    for (int round = 0; round < 100; ++round) {
        bool improved = false;
        double slack = budget - std::accumulate(b.begin(), b.end(), 0.0);
        for (std::size_t j = 0; j < n && slack > 1e-15; ++j) {
            auto f = [&](double x) { return pop[j] * content_gain(x, cov); };
            const double hi = std::min(1.0, b[j] + slack);
            const double x = argmax_1d(f, b[j], hi);
            if (f(x) > f(b[j]) + 1e-15) {
                slack -= x - b[j];
                b[j] = x;
                improved = true;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double total = b[i] + b[j];
                auto f = [&](double t) {
                    return pop[i] * content_gain(t, cov) + pop[j] * content_gain(total - t, cov);
                };
                const double lo = std::max(0.0, total - 1.0), hi = std::min(1.0, total);
                const double t = argmax_1d(f, lo, hi);
                if (f(t) > f(b[i]) + 1e-15) {
                    b[i] = t;
                    b[j] = std::clamp(total - t, 0.0, 1.0);
                    improved = true;
                }
            }
        }
        if (!improved)
            break;
    }
}

} // namespace

double spectral_efficiency(double beta, double coverage)
{
    return std::log2(1.0 + beta) * coverage;
}

double nse(const TxSelectionPolicy& policy, const NetworkModel& model, double beta,
           InterfererWeighting weighting, const QuadratureSettings& q)
{
    validate(model, policy, RandomReceiver{});
    if (!(beta > 0.0))
        throw ValidationError(Violation::Threshold, "threshold must be positive");
    const double pc = coverage_random(policy, beta, model, weighting, q).probability;
    return model.n_active * spectral_efficiency(beta, pc);
}

ActiveCountResult optimal_active_count(const TxSelectionPolicy& policy, int n_tx, double beta,
                                       double alpha, InterfererWeighting weighting,
                                       const QuadratureSettings& q, double disk_radius, int lanes)
{
    if (n_tx < 1)
        throw ValidationError(Violation::TxCount, "transmitter count must be at least 1");
    ActiveCountResult out;
    out.curve.assign(n_tx, 0.0);
    parallel_for(n_tx, lanes, [&](std::size_t i) {
        const NetworkModel model{disk_radius, n_tx, int(i) + 1, alpha};
        out.curve[i] = nse(policy, model, beta, weighting, q);
    });
    for (int na = 1; na <= n_tx; ++na) {
        if (na == 1 || out.curve[na - 1] > out.nse) {
            out.n_active = na;
            out.nse = out.curve[na - 1];
        }
    }
    return out;
}

double zipf_pmf(int j, int library_size, double gamma)
{
    if (library_size < 1 || j < 1 || j > library_size)
        throw DomainError("content index outside [1, J]");
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw DomainError("Zipf exponent must be a finite non-negative number");
    double norm = 0.0;
    for (int i = 1; i <= library_size; ++i)
        norm += std::pow(double(i), -gamma);
    return std::pow(double(j), -gamma) / norm;
}

void validate(const CacheProblem& problem)
{
    if (problem.library_size < 1)
        throw ValidationError(Violation::CacheProblem, "library size must be at least 1");
    if (problem.cache_size < 1 || problem.cache_size > problem.library_size)
        throw ValidationError(Violation::CacheProblem, "cache size must lie in [1, library size]");
    if (!(problem.zipf_gamma >= 0.0) || !std::isfinite(problem.zipf_gamma))
        throw ValidationError(Violation::CacheProblem, "Zipf exponent must be non-negative");
    if (!(problem.beta > 0.0) || !std::isfinite(problem.beta))
        throw ValidationError(Violation::Threshold, "threshold must be positive");
    validate(problem.model);
}

void validate(const CachePlacement& placement, const CacheProblem& problem)
{
    if (int(placement.probabilities.size()) != problem.library_size)
        throw ValidationError(Violation::Placement, "placement needs one probability per content");
    double total = 0.0;
    for (double b : placement.probabilities) {
        if (!(b >= 0.0 && b <= 1.0))
            throw ValidationError(Violation::Placement, "caching probabilities must lie in [0, 1]");
        total += b;
    }
    if (total > problem.cache_size + kBudgetSlack)
        throw ValidationError(Violation::Placement, "caching probabilities exceed the cache size");
}

std::vector<double> coverage_by_k(const CacheProblem& problem, const QuadratureSettings& q,
                                  int lanes)
{
    validate(problem);
    std::vector<double> out(problem.model.n_tx, 1.0);
    parallel_for(out.size(), lanes, [&](std::size_t i) {
        out[i] = coverage_random(KClosestSelection{int(i) + 1}, problem.beta, problem.model,
                                 problem.weighting, q)
                     .probability;
    });
    return out;
}

double content_gain(double b, const std::vector<double>& cov)
{
    // Horner in (1 - b).
    const double miss = 1.0 - b;
    double acc = 0.0;
    for (std::size_t k = cov.size(); k-- > 0;)
        acc = acc * miss + cov[k];
    return acc * b;
}

double hit_probability(const CachePlacement& placement, const CacheProblem& problem,
                       const std::vector<double>& cov)
{
    validate(placement, problem);
    if (int(cov.size()) != problem.model.n_tx)
        throw ValidationError(Violation::Placement, "coverage_by_k must have n_tx entries");
    double total = 0.0;
    for (int j = 1; j <= problem.library_size; ++j)
        total += zipf_pmf(j, problem.library_size, problem.zipf_gamma) *
                 content_gain(placement.probabilities[j - 1], cov);
    return total;
}

CacheSolution optimize_caching(const CacheProblem& problem, const QuadratureSettings& q)
{
    validate(problem);
    return optimize_caching(problem, coverage_by_k(problem, q));
}

CacheSolution optimize_caching(const CacheProblem& problem, std::vector<double> cov)
{
    validate(problem);
    if (int(cov.size()) != problem.model.n_tx)
        throw ValidationError(Violation::CacheProblem, "coverage_by_k must have n_tx entries");
    const int n = problem.library_size;
    const double budget = problem.cache_size;
    std::vector<double> pop(n);
    for (int j = 0; j < n; ++j)
        pop[j] = zipf_pmf(j + 1, n, problem.zipf_gamma);

    std::vector<double> b(n, 1.0);
    if (problem.cache_size < n) {
        auto respond = [&](double lambda) {
            std::vector<double> x(n);
            for (int j = 0; j < n; ++j) {
                auto f = [&](double t) { return pop[j] * content_gain(t, cov) - lambda * t; };
                x[j] = argmax_1d(f, 0.0, 1.0);
            }
            return x;
        };
        auto load = [](const std::vector<double>& x) {
            return std::accumulate(x.begin(), x.end(), 0.0);
        };
        b = respond(0.0);
        if (load(b) > budget) {
            double lo = 0.0, hi = 1.0;
            for (int i = 0; i < 60 && load(respond(hi)) > budget; ++i)
                hi *= 2.0;
            for (int i = 0; i < 60; ++i) {
                const double mid = 0.5 * (lo + hi);
                (load(respond(mid)) > budget ? lo : hi) = mid;
            }
            b = respond(hi);
        }
        polish(b, pop, cov, budget);
        // Guard the budget against round-off from the exchanges.
        const double total = load(b);
        if (total > budget)
            for (double& x : b)
                x *= budget / total;
    }

    CacheSolution out;
    out.placement.probabilities = b;
    out.hit = objective(b, pop, cov);
    out.coverage_by_k = std::move(cov);
    return out;
}

double throughput(int n_active, double hit_star) { return n_active * hit_star; }

} // namespace bppnet
