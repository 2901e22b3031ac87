#pragma once

#include <vector>

#include "bppnet/coverage.hpp"
#include "bppnet/model.hpp"
#include "bppnet/parallel.hpp"

namespace bppnet {

double spectral_efficiency(double beta, double coverage);

// N^a log2(1 + beta) times the random-receiver coverage.
double nse(const TxSelectionPolicy& policy, const NetworkModel& model, double beta,
           InterfererWeighting weighting, const QuadratureSettings& q = {});

struct ActiveCountResult {
    int n_active = 1;
    double nse = 0.0;
    std::vector<double> curve; // nse for N^a = 1..n_tx
};

// Exhaustive search over N^a = 1..n_tx; ties go to the smaller N^a.
ActiveCountResult optimal_active_count(const TxSelectionPolicy& policy, int n_tx, double beta,
                                       double alpha, InterfererWeighting weighting,
                                       const QuadratureSettings& q = {}, double disk_radius = 1.0,
                                       int lanes = default_lanes());

double zipf_pmf(int j, int library_size, double gamma);

struct CacheProblem {
    int library_size = 1;
    int cache_size = 1;
    double zipf_gamma = 0.0;
    NetworkModel model;
    double beta = 1.0;
    InterfererWeighting weighting = InterfererWeighting::PaperBinomialTruncated;
};

struct CachePlacement {
    std::vector<double> probabilities;
};

void validate(const CacheProblem& problem);
void validate(const CachePlacement& placement, const CacheProblem& problem);

// Random-receiver coverage of the k-th closest node, k = 1..n_tx.
std::vector<double> coverage_by_k(const CacheProblem& problem, const QuadratureSettings& q = {},
                                  int lanes = default_lanes());

// g(b) = sum_k P^(k) (1-b)^(k-1) b.
double content_gain(double b, const std::vector<double>& coverage_by_k);

double hit_probability(const CachePlacement& placement, const CacheProblem& problem,
                       const std::vector<double>& coverage_by_k);

struct CacheSolution {
    CachePlacement placement;
    double hit = 0.0;
    std::vector<double> coverage_by_k;
};

CacheSolution optimize_caching(const CacheProblem& problem, const QuadratureSettings& q = {});
CacheSolution optimize_caching(const CacheProblem& problem, std::vector<double> coverage_by_k);

double throughput(int n_active, double hit_star);

} // namespace bppnet
