#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bppnet/applications.hpp"
#include "bppnet/coverage.hpp"
#include "bppnet/model.hpp"
#include "bppnet/parallel.hpp"

namespace bppnet {

// How the N^a - 1 interferers are picked once the serving node is known.
// IidResample draws fresh points in the closer / farther regions with the
// truncated-binomial split; WithoutReplacementSubset picks real nodes.
enum class InterfererSampling {
    IidResample,
    WithoutReplacementSubset,
};

struct SimulationPlan {
    long trials = 100000;
    std::uint64_t seed = 1;
    InterfererSampling sampling = InterfererSampling::IidResample;
    int lanes = 1;
};

void validate(const SimulationPlan& plan);

struct EstimateWithCI {
    double mean = 0.0;
    double half_width_95 = 0.0;
    long trials = 0;

    double sigma() const { return half_width_95 / 1.96; }
};

EstimateWithCI proportion_estimate(long hits, long trials);

// SplitMix64 over a counter; one independent stream per (seed, trial, tag).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag);

    std::uint64_t next();
    double uniform();      // [0, 1)
    double exponential();  // unit mean

private:
    std::uint64_t state_;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

std::vector<Point> sample_network(const NetworkModel& model, CounterRng& rng);

EstimateWithCI simulate_coverage(const SirQuery& query, const SimulationPlan& plan);

// Entry m - 1 holds the estimate for the first m antennas.
struct DiversityEstimate {
    std::vector<EstimateWithCI> joint; // all m antennas succeed
    std::vector<EstimateWithCI> any;   // at least one of m succeeds
};

// Receiver placement comes from query.base.receiver.
DiversityEstimate simulate_joint_success(const DiversityQuery& query, const SimulationPlan& plan);

struct HitEstimate {
    EstimateWithCI estimate;
    // Set when sum b_j sits on the cache size with a small library, where
    // independent marking only meets the capacity in expectation.
    bool capacity_warning = false;
};

HitEstimate simulate_hit(const CacheProblem& problem, const CachePlacement& placement,
                         const SimulationPlan& plan);

struct SliceEstimate {
    EstimateWithCI estimate; // mean of exp(-s I) with sample-variance CI
    double window_lo = 0.0;
    double window_hi = 0.0;
    long accepted = 0;
};

// E[exp(-s I)] given a serving distance within +-0.005 of r. `trials`
// counts sampled networks, accepted or not.
SliceEstimate simulate_laplace_slice(double s, double nu0, double r, const SirQuery& query,
                                     const SimulationPlan& plan);

constexpr double kSliceHalfWidth = 0.005;

// Sampled distances for checking the distance laws.
std::vector<double> sample_link_distances(double nu0, double disk_radius, long count,
                                          std::uint64_t seed);
std::vector<double> sample_serving_distances(int k, int n_tx, double nu0, double disk_radius,
                                             long count, std::uint64_t seed);
std::vector<double> sample_receiver_radii(double disk_radius, long count, std::uint64_t seed);

// For networks whose k-th closest node falls within +-window of r: the
// distance of one uniformly chosen closer node and one farther node.
struct NeighbourSamples {
    std::vector<double> inner;
    std::vector<double> outer;
};
NeighbourSamples sample_conditioned_neighbours(int k, int n_tx, double nu0, double disk_radius,
                                               double r, double window, long count,
                                               std::uint64_t seed);

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);
// 1% critical value, asymptotic.
double ks_critical_1pct(std::size_t n);

} // namespace bppnet
