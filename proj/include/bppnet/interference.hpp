#pragma once

#include <vector>

#include "bppnet/distances.hpp"
#include "bppnet/model.hpp"

namespace bppnet {

// Distribution of the number of active interferers closer to the receiver
// than the k-th closest (serving) node.
struct SplitWeights {
    int k = 1;
    int n_tx = 1;
    int n_active = 1;
    double p = 0.0;             // (k-1)/(n_tx-1), 0 when n_tx == 1
    int n_a_max = 0;            // min(k-1, n_active-1)
    std::vector<double> weights; // indexed by the closer-interferer count 0..n_a_max
};

SplitWeights split_weights(int k, int n_tx, int n_active, InterfererWeighting mode);

// Laplace transform of the aggregate interference at a receiver at radius
// nu0, uniform selection.
double laplace_uniform(double s, double nu0, const NetworkModel& model,
                       const QuadratureSettings& q = {});

// Same at the disk center; alpha == 4 takes the arctan closed form.
double laplace_uniform_central(double s, const NetworkModel& model,
                               const QuadratureSettings& q = {});
// The generic 2F1 path at the center, whatever alpha is.
double laplace_uniform_central_generic(double s, const NetworkModel& model);

// Laplace transform given that the serving (k-th closest) node is at
// distance r from a receiver at radius nu0. The serving order is carried by
// `weights`.
double laplace_kclosest(double s, double nu0, double r, const NetworkModel& model,
                        const SplitWeights& weights, const QuadratureSettings& q = {});

double laplace_kclosest_central(double s, double r, const NetworkModel& model,
                                const SplitWeights& weights, const QuadratureSettings& q = {});

// E[exp(-s (I_1 + ... + I_n))] for n antennas with shared interferer
// locations and independent fading, uniform selection.
double laplace_joint_uniform(double s, double nu0, int n, const NetworkModel& model,
                             const QuadratureSettings& q = {});

// The n-antenna analogue of laplace_kclosest.
double joint_factors_kclosest(double s, double r, double nu0, int n, const NetworkModel& model,
                              const SplitWeights& weights, const QuadratureSettings& q = {});

// Mean of (1 + s u^-alpha)^-n when u follows the distance law restricted to
// [lo, hi] (not normalised: returns the integral against the density).
double interferer_moment(double s, int n, double lo, double hi, const PiecewiseDistanceLaw& law,
                         double alpha, const QuadratureSettings& q);

} // namespace bppnet
