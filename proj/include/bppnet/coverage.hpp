#pragma once

#include "bppnet/interference.hpp"
#include "bppnet/model.hpp"
#include "bppnet/quadrature.hpp"

namespace bppnet {

struct CoverageResult {
    double probability = 1.0;
    double quadrature_error_estimate = 0.0;
    long evaluations = 0;
};

// A multi-antenna receiver using selection combining.
struct DiversityQuery {
    SirQuery base;
    int antennas = 1;
    bool correlated = true;
};

void validate(const DiversityQuery& query);

// Tolerances for the nested integrals: the Laplace integrals run at q, the
// serving-distance integral 10x looser, the receiver-radius integral 100x.
QuadratureSettings serving_settings(const QuadratureSettings& q);
QuadratureSettings receiver_settings(const QuadratureSettings& q);

// Receiver at radius nu0.
CoverageResult coverage_ref_uniform(double nu0, double beta, const NetworkModel& model,
                                    const QuadratureSettings& q = {});
CoverageResult coverage_ref_kclosest(double nu0, double beta, int k, const NetworkModel& model,
                                     InterfererWeighting weighting,
                                     const QuadratureSettings& q = {});

// Receiver at the disk center, through the single-branch closed forms.
CoverageResult coverage_central(const TxSelectionPolicy& policy, double beta,
                                const NetworkModel& model, InterfererWeighting weighting,
                                const QuadratureSettings& q = {});

// Receiver uniform on the disk: coverage_ref averaged over its radius.
CoverageResult coverage_random(const TxSelectionPolicy& policy, double beta,
                               const NetworkModel& model, InterfererWeighting weighting,
                               const QuadratureSettings& q = {});

// Dispatches on receiver and policy; validates first.
CoverageResult coverage(const SirQuery& query, const QuadratureSettings& q = {});

// P(all n antennas clear the threshold) for a receiver at radius nu0.
// `query.antennas` is n; `query.correlated` is ignored.
double joint_success(const DiversityQuery& query, double nu0, const QuadratureSettings& q = {});
double joint_success_kclosest(const DiversityQuery& query, double nu0,
                              const QuadratureSettings& q = {});

// Selection-combining coverage at radius nu0: inclusion-exclusion over the
// joint success probabilities when correlated, 1 - (1 - Pc)^n otherwise.
double sc_coverage(const DiversityQuery& query, double nu0, const QuadratureSettings& q = {});

} // namespace bppnet
