#include "bppnet/model.hpp"

#include <cmath>
#include <sstream>

namespace bppnet {

const char* to_string(Violation v)
{
    switch (v) {
    case Violation::DiskRadius: return "disk radius";
    case Violation::PathLossExponent: return "path-loss exponent";
    case Violation::TxCount: return "transmitter count";
    case Violation::ActiveCount: return "active count";
    case Violation::ServingOrder: return "serving order";
    case Violation::ReceiverRadius: return "receiver radius";
    case Violation::Threshold: return "SIR threshold";
    case Violation::Antennas: return "antenna count";
    case Violation::CacheProblem: return "cache problem";
    case Violation::Placement: return "cache placement";
    case Violation::Sweep: return "sweep";
    case Violation::Simulation: return "simulation plan";
    case Violation::Quadrature: return "quadrature settings";
    }
    return "unknown";
}

void validate(const NetworkModel& model)
{
    if (!(model.disk_radius > 0.0) || !std::isfinite(model.disk_radius))
        throw ValidationError(Violation::DiskRadius, "disk radius must be positive");
    if (!(model.path_loss_exponent > 2.0) || !std::isfinite(model.path_loss_exponent))
        throw ValidationError(Violation::PathLossExponent, "path-loss exponent must exceed 2");
    if (model.n_tx < 1)
        throw ValidationError(Violation::TxCount, "transmitter count must be at least 1");
    if (model.n_active < 1)
        throw ValidationError(Violation::ActiveCount, "active count must be at least 1");
    if (model.n_active > model.n_tx)
        throw ValidationError(Violation::ActiveCount,
                              "active count must not exceed transmitter count");
}

void validate(const NetworkModel& model, const TxSelectionPolicy& policy,
              const ReceiverLocation& receiver)
{
    validate(model);
    if (const auto* kc = std::get_if<KClosestSelection>(&policy)) {
        if (kc->k < 1 || kc->k > model.n_tx)
            throw ValidationError(Violation::ServingOrder,
                                  "serving order k must lie in [1, n_tx]");
    }
    if (const auto* at = std::get_if<ReceiverAtRadius>(&receiver)) {
        if (!(at->nu0 >= 0.0 && at->nu0 <= model.disk_radius))
            throw ValidationError(Violation::ReceiverRadius,
                                  "receiver radius must lie in [0, disk radius]");
    }
}

void validate(const SirQuery& query)
{
    validate(query.model, query.policy, query.receiver);
    if (!(query.threshold_linear > 0.0) || !std::isfinite(query.threshold_linear))
        throw ValidationError(Violation::Threshold, "SIR threshold must be positive");
}

void validate(const QuadratureSettings& q)
{
    if (!(q.rel_tol > 0.0) || !(q.abs_tol > 0.0) || q.max_subdivisions < 1)
        throw ValidationError(Violation::Quadrature,
                              "quadrature tolerances must be positive and budget at least 1");
}

double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

bool is_uniform(const TxSelectionPolicy& policy) noexcept
{
    return std::holds_alternative<UniformSelection>(policy);
}

int serving_order(const TxSelectionPolicy& policy) noexcept
{
    if (const auto* kc = std::get_if<KClosestSelection>(&policy))
        return kc->k;
    return 0;
}

std::string to_string(const TxSelectionPolicy& policy)
{
    return is_uniform(policy) ? "uniform" : "kclosest";
}

std::string to_string(const ReceiverLocation& receiver)
{
    struct Visitor {
        std::string operator()(const CentralReceiver&) const { return "central"; }
        std::string operator()(const ReceiverAtRadius&) const { return "at"; }
        std::string operator()(const RandomReceiver&) const { return "random"; }
    };
    return std::visit(Visitor{}, receiver);
}

std::string to_string(InterfererWeighting weighting)
{
    return weighting == InterfererWeighting::PaperBinomialTruncated ? "paper" : "hypergeometric";
}

} // namespace bppnet
