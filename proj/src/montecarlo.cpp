#include "bppnet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bppnet/interference.hpp"

namespace bppnet {
namespace {

constexpr long kBlock = 8192;
constexpr long kRejectionCap = 100000000;

enum Tag : std::uint64_t {
    TagNetwork = 1,
    TagReceiver,
    TagServing,
    TagInterferers,
    TagFading,
    TagContent,
    TagMarking,
    TagSample,
};

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Counts {
    std::vector<long> joint, any;

    void merge(const Counts& o)
    {
        for (std::size_t i = 0; i < joint.size(); ++i) {
            joint[i] += o.joint[i];
            any[i] += o.any[i];
        }
    }
};

struct Moments {
    long accepted = 0;
    double sum = 0.0, sum_sq = 0.0;

    void merge(const Moments& o)
    {
        accepted += o.accepted;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
};

struct HitCount {
    long hits = 0;
    void merge(const HitCount& o) { hits += o.hits; }
};

// Trials are cut into fixed blocks; blocks are merged in index order so the
// result does not depend on how many lanes ran them.
template <class Acc, class Trial>
Acc run_trials(const SimulationPlan& plan, const Acc& zero, const Trial& trial)
{
    const long blocks = (plan.trials + kBlock - 1) / kBlock;
    std::vector<Acc> parts(blocks, zero);
    parallel_for(blocks, plan.lanes, [&](std::size_t b) {
        const long first = long(b) * kBlock;
        const long last = std::min(plan.trials, first + kBlock);
        for (long t = first; t < last; ++t)
            trial(std::uint64_t(t), parts[b]);
    });
    Acc total = zero;
    for (const auto& p : parts)
        total.merge(p);
    return total;
}

Point uniform_in_disk(double rd, CounterRng& rng)
{
    const double rho = rd * std::sqrt(rng.uniform());
    const double ang = 2.0 * std::numbers::pi * rng.uniform();
    return {rho * std::cos(ang), rho * std::sin(ang)};
}

double distance_to(const Point& p, double x0)
{
    const double dx = p.x - x0;
    return std::sqrt(dx * dx + p.y * p.y);
}

double norm(double x, double y) { return std::sqrt(x * x + y * y); }

// x^alpha; integer exponents skip pow.
double power(double x, double alpha)
{
    if (alpha == 4.0) {
        const double x2 = x * x;
        return x2 * x2;
    }
    if (alpha == 2.0)
        return x * x;
    if (alpha == 3.0)
        return x * x * x;
    return std::pow(x, alpha);
}

double receiver_radius(const ReceiverLocation& rx, double rd, std::uint64_t seed, std::uint64_t t)
{
    if (std::holds_alternative<CentralReceiver>(rx))
        return 0.0;
    if (const auto* at = std::get_if<ReceiverAtRadius>(&rx))
        return at->nu0;
    CounterRng rng(seed, t, TagReceiver);
    return rd * std::sqrt(rng.uniform());
}

// Builds the serving distance and interferer distances of one trial.
class LinkSampler {
public:
    LinkSampler(const NetworkModel& model, InterfererSampling sampling)
        : model_(model), sampling_(sampling)
    {
        // Cumulative closer-interferer split for every serving order.
        split_cdf_.resize(model.n_tx + 1);
        for (int k = 1; k <= model.n_tx; ++k) {
            const auto w = split_weights(k, model.n_tx, model.n_active,
                                         InterfererWeighting::PaperBinomialTruncated);
            split_cdf_[k].resize(w.weights.size());
            std::partial_sum(w.weights.begin(), w.weights.end(), split_cdf_[k].begin());
        }
    }

    // Distances from the receiver to every node of the sampled network.
    void network(double x0, std::uint64_t seed, std::uint64_t t, std::vector<double>& d) const
    {
        CounterRng rng(seed, t, TagNetwork);
        d.resize(model_.n_tx);
        for (auto& di : d)
            di = distance_to(uniform_in_disk(model_.disk_radius, rng), x0);
    }

    // Picks the serving node; returns its index.
    int serve(const TxSelectionPolicy& policy, const std::vector<double>& d, std::uint64_t seed,
              std::uint64_t t, std::vector<int>& order) const
    {
        const int n = int(d.size());
        if (is_uniform(policy)) {
            CounterRng rng(seed, t, TagServing);
            return std::min(n - 1, int(rng.uniform() * n));
        }
        const int k = serving_order(policy);
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
        std::nth_element(order.begin(), order.begin() + (k - 1), order.end(),
                         [&](int a, int b) { return d[a] < d[b]; });
        return order[k - 1];
    }

    // Interferer distances given the serving node `s` (of order k, or 0 for
    // uniform selection) at distance d[s].
    void interferers(int k, int s, double x0, const std::vector<double>& d, std::uint64_t seed,
                     std::uint64_t t, std::vector<int>& pool, std::vector<double>& out) const
    {
        const int m = model_.interferer_count();
        out.clear();
        if (m == 0)
            return;
        CounterRng rng(seed, t, TagInterferers);
        if (k == 0 || sampling_ == InterfererSampling::WithoutReplacementSubset) {
            pool.clear();
            for (int i = 0; i < int(d.size()); ++i)
                if (i != s)
                    pool.push_back(i);
            for (int i = 0; i < m; ++i) {
                const int left = int(pool.size()) - i;
                const int j = i + std::min(left - 1, int(rng.uniform() * left));
                std::swap(pool[i], pool[j]);
                out.push_back(d[pool[i]]);
            }
            return;
        }
        const auto& cdf = split_cdf_[k];
        const double u = rng.uniform() * cdf.back();
        int closer = int(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        closer = std::min(closer, int(cdf.size()) - 1);
        const double r = d[s];
        for (int i = 0; i < closer; ++i)
            out.push_back(draw_closer(x0, r, rng));
        for (int i = closer; i < m; ++i)
            out.push_back(draw_farther(x0, r, rng));
    }

private:
    double draw_closer(double x0, double r, CounterRng& rng) const
    {
        const double rd = model_.disk_radius;
        for (long it = 0; it < kRejectionCap; ++it) {
            if (r <= rd) {
                // Uniform in the ball around the receiver, kept if inside the disk.
                const double rho = r * std::sqrt(rng.uniform());
                const double ang = 2.0 * std::numbers::pi * rng.uniform();
                if (norm(x0 + rho * std::cos(ang), rho * std::sin(ang)) <= rd)
                    return rho;
            } else {
                const double u = distance_to(uniform_in_disk(rd, rng), x0);
                if (u < r)
                    return u;
            }
        }
        throw NumericalError("rejection sampler for closer interferers did not terminate");
    }

    double draw_farther(double x0, double r, CounterRng& rng) const
    {
        const double rd = model_.disk_radius;
        const double outer = rd + x0;
        const bool annulus = outer * outer - r * r < rd * rd;
        for (long it = 0; it < kRejectionCap; ++it) {
            if (annulus) {
                const double rho = std::sqrt(r * r + rng.uniform() * (outer * outer - r * r));
                const double ang = 2.0 * std::numbers::pi * rng.uniform();
                if (rho > r && norm(x0 + rho * std::cos(ang), rho * std::sin(ang)) <= rd)
                    return rho;
            } else {
                const double u = distance_to(uniform_in_disk(rd, rng), x0);
                if (u > r)
                    return u;
            }
        }
        throw NumericalError("rejection sampler for farther interferers did not terminate");
    }

    NetworkModel model_;
    InterfererSampling sampling_;
    std::vector<std::vector<double>> split_cdf_;
};

// Rayleigh-faded SIR test for one antenna.
bool clears(double beta, double alpha, double r, const std::vector<double>& u, CounterRng& fading)
{
    const double hs = fading.exponential();
    double interference = 0.0;
    for (double ui : u)
        interference += fading.exponential() * power(r / ui, alpha);
    return hs >= beta * interference;
}

Counts run_antennas(const SirQuery& q, int n, const SimulationPlan& plan)
{
    validate(q);
    validate(plan);
    const LinkSampler sampler(q.model, plan.sampling);
    const int k = serving_order(q.policy);
    Counts zero{std::vector<long>(n, 0), std::vector<long>(n, 0)};
    auto trial = [&](std::uint64_t t, Counts& acc) {
        thread_local std::vector<double> d, u;
        thread_local std::vector<int> order, pool;
        const double x0 = receiver_radius(q.receiver, q.model.disk_radius, plan.seed, t);
        sampler.network(x0, plan.seed, t, d);
        const int s = sampler.serve(q.policy, d, plan.seed, t, order);
        sampler.interferers(k, s, x0, d, plan.seed, t, pool, u);
        CounterRng fading(plan.seed, t, TagFading);
        bool all = true, some = false;
        for (int a = 0; a < n; ++a) {
            const bool ok = clears(q.threshold_linear, q.model.path_loss_exponent, d[s], u, fading);
            all = all && ok;
            some = some || ok;
            acc.joint[a] += all;
            acc.any[a] += some;
        }
    };
    return run_trials(plan, zero, trial);
}

} // namespace

void validate(const SimulationPlan& plan)
{
    if (plan.trials < 1)
        throw ValidationError(Violation::Simulation, "trial count must be at least 1");
    if (plan.lanes < 1)
        throw ValidationError(Violation::Simulation, "lane count must be at least 1");
}

EstimateWithCI proportion_estimate(long hits, long trials)
{
    const double m = double(hits) / double(trials);
    return {m, 1.96 * std::sqrt(m * (1.0 - m) / double(trials)), trials};
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag)
    : state_(mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ mix64(stream + 0x632be59bd9b4e019ULL)) ^
             mix64(tag * 0xd1b54a32d192ed03ULL))
{
}

std::uint64_t CounterRng::next()
{
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
}

double CounterRng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

double CounterRng::exponential() { return -std::log1p(-uniform()); }

std::vector<Point> sample_network(const NetworkModel& model, CounterRng& rng)
{
    validate(model);
    std::vector<Point> pts(model.n_tx);
    for (auto& p : pts)
        p = uniform_in_disk(model.disk_radius, rng);
    return pts;
}

EstimateWithCI simulate_coverage(const SirQuery& query, const SimulationPlan& plan)
{
    const auto c = run_antennas(query, 1, plan);
    return proportion_estimate(c.joint[0], plan.trials);
}

DiversityEstimate simulate_joint_success(const DiversityQuery& query, const SimulationPlan& plan)
{
    validate(query);
    const auto c = run_antennas(query.base, query.antennas, plan);
    DiversityEstimate out;
    for (int a = 0; a < query.antennas; ++a) {
        out.joint.push_back(proportion_estimate(c.joint[a], plan.trials));
        out.any.push_back(proportion_estimate(c.any[a], plan.trials));
    }
    return out;
}

HitEstimate simulate_hit(const CacheProblem& problem, const CachePlacement& placement,
                         const SimulationPlan& plan)
{
    validate(problem);
    validate(placement, problem);
    validate(plan);
    const auto& model = problem.model;
    const LinkSampler sampler(model, plan.sampling);
    const int n_lib = problem.library_size;
    std::vector<double> zipf_cdf(n_lib);
    for (int j = 0; j < n_lib; ++j)
        zipf_cdf[j] = (j ? zipf_cdf[j - 1] : 0.0) + zipf_pmf(j + 1, n_lib, problem.zipf_gamma);
    const auto& b = placement.probabilities;

    auto trial = [&](std::uint64_t t, HitCount& acc) {
        thread_local std::vector<double> d, u;
        thread_local std::vector<int> order, pool;
        const double x0 = receiver_radius(RandomReceiver{}, model.disk_radius, plan.seed, t);
        sampler.network(x0, plan.seed, t, d);
        CounterRng content_rng(plan.seed, t, TagContent);
        const double cu = content_rng.uniform() * zipf_cdf.back();
        const int j = std::min(n_lib - 1, int(std::upper_bound(zipf_cdf.begin(), zipf_cdf.end(), cu) -
                                              zipf_cdf.begin()));
        CounterRng mark_rng(plan.seed, t, TagMarking);
        order.resize(d.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int c) { return d[a] < d[c]; });
        std::vector<char> holds(d.size());
        for (auto& h : holds)
            h = mark_rng.uniform() < b[j];
        int k = 0;
        while (k < int(order.size()) && !holds[order[k]])
            ++k;
        if (k == int(order.size()))
            return;
        const int s = order[k];
        sampler.interferers(k + 1, s, x0, d, plan.seed, t, pool, u);
        CounterRng fading(plan.seed, t, TagFading);
        acc.hits += clears(problem.beta, model.path_loss_exponent, d[s], u, fading);
    };
    const auto hits = run_trials(plan, HitCount{}, trial);

    HitEstimate out;
    out.estimate = proportion_estimate(hits.hits, plan.trials);
    const double load = std::accumulate(b.begin(), b.end(), 0.0);
    out.capacity_warning = n_lib <= 10 && load >= problem.cache_size - 1e-9;
    return out;
}

SliceEstimate simulate_laplace_slice(double s, double nu0, double r, const SirQuery& query,
                                     const SimulationPlan& plan)
{
    validate(query.model, query.policy, ReceiverAtRadius{nu0});
    validate(plan);
    if (!(s >= 0.0))
        throw DomainError("Laplace argument must be non-negative");
    const LinkSampler sampler(query.model, plan.sampling);
    const int k = serving_order(query.policy);
    const double alpha = query.model.path_loss_exponent;
    auto trial = [&](std::uint64_t t, Moments& acc) {
        thread_local std::vector<double> d, u;
        thread_local std::vector<int> order, pool;
        sampler.network(nu0, plan.seed, t, d);
        const int srv = sampler.serve(query.policy, d, plan.seed, t, order);
        if (std::abs(d[srv] - r) > kSliceHalfWidth)
            return;
        sampler.interferers(k, srv, nu0, d, plan.seed, t, pool, u);
        CounterRng fading(plan.seed, t, TagFading);
        double interference = 0.0;
        for (double ui : u)
            interference += fading.exponential() * 1.0 / power(ui, alpha);
        const double v = std::exp(-s * interference);
        ++acc.accepted;
        acc.sum += v;
        acc.sum_sq += v * v;
    };
    const auto mom = run_trials(plan, Moments{}, trial);

    SliceEstimate out;
    out.window_lo = r - kSliceHalfWidth;
    out.window_hi = r + kSliceHalfWidth;
    out.accepted = mom.accepted;
    if (mom.accepted == 0)
        throw NumericalError("no sampled network fell in the serving-distance window");
    const double n = double(mom.accepted);
    const double mean = mom.sum / n;
    const double var = mom.accepted > 1 ? std::max(0.0, (mom.sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    out.estimate = {mean, 1.96 * std::sqrt(var / n), mom.accepted};
    return out;
}

std::vector<double> sample_link_distances(double nu0, double disk_radius, long count,
                                          std::uint64_t seed)
{
    std::vector<double> out(count);
    for (long i = 0; i < count; ++i) {
        CounterRng rng(seed, i, TagSample);
        out[i] = distance_to(uniform_in_disk(disk_radius, rng), nu0);
    }
    return out;
}

std::vector<double> sample_serving_distances(int k, int n_tx, double nu0, double disk_radius,
                                             long count, std::uint64_t seed)
{
    if (k < 1 || k > n_tx)
        throw DomainError("order k outside [1, n_tx]");
    std::vector<double> out(count), d(n_tx);
    for (long i = 0; i < count; ++i) {
        CounterRng rng(seed, i, TagSample);
        for (auto& di : d)
            di = distance_to(uniform_in_disk(disk_radius, rng), nu0);
        std::nth_element(d.begin(), d.begin() + (k - 1), d.end());
        out[i] = d[k - 1];
    }
    return out;
}

std::vector<double> sample_receiver_radii(double disk_radius, long count, std::uint64_t seed)
{
    std::vector<double> out(count);
    for (long i = 0; i < count; ++i) {
        CounterRng rng(seed, i, TagReceiver);
        out[i] = disk_radius * std::sqrt(rng.uniform());
    }
    return out;
}

NeighbourSamples sample_conditioned_neighbours(int k, int n_tx, double nu0, double disk_radius,
                                               double r, double window, long count,
                                               std::uint64_t seed)
{
    if (k < 1 || k > n_tx)
        throw DomainError("order k outside [1, n_tx]");
    NeighbourSamples out;
    std::vector<double> d(n_tx);
    const long cap = 100000 * std::max(count, 1L);
    for (long i = 0; i < cap && long(std::max(out.inner.size(), out.outer.size())) < count; ++i) {
        CounterRng rng(seed, i, TagSample);
        for (auto& di : d)
            di = distance_to(uniform_in_disk(disk_radius, rng), nu0);
        std::sort(d.begin(), d.end());
        if (std::abs(d[k - 1] - r) > window)
            continue;
        if (k > 1)
            out.inner.push_back(d[std::min(k - 2, int(rng.uniform() * (k - 1)))]);
        if (k < n_tx)
            out.outer.push_back(d[k + std::min(n_tx - k - 1, int(rng.uniform() * (n_tx - k)))]);
    }
    return out;
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf)
{
    if (sorted.empty())
        throw DomainError("KS statistic needs at least one sample");
    const double n = double(sorted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        worst = std::max({worst, f - double(i) / n, double(i + 1) / n - f});
    }
    return worst;
}

double ks_critical_1pct(std::size_t n) { return 1.63 / std::sqrt(double(n)); }

} // namespace bppnet
