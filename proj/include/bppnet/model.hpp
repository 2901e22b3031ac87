#pragma once

#include <string>
#include <variant>

#include "bppnet/error.hpp"

namespace bppnet {

// The physical scenario: n_tx nodes uniform on a disk, n_active of them
// (the serving node included) sharing one resource block.
struct NetworkModel {
    double disk_radius = 1.0;
    int n_tx = 1;
    int n_active = 1;
    double path_loss_exponent = 4.0;

    int interferer_count() const noexcept { return n_active - 1; }
};

struct CentralReceiver {};
struct ReceiverAtRadius {
    double nu0 = 0.0;
};
struct RandomReceiver {};

using ReceiverLocation = std::variant<CentralReceiver, ReceiverAtRadius, RandomReceiver>;

struct UniformSelection {};
struct KClosestSelection {
    int k = 1;
};

using TxSelectionPolicy = std::variant<UniformSelection, KClosestSelection>;

// How the number of interferers closer than the serving node is weighted
// for k-closest selection.
enum class InterfererWeighting {
    PaperBinomialTruncated,
    Hypergeometric,
};

struct QuadratureSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int max_subdivisions = 200;
};

struct SirQuery {
    double threshold_linear = 1.0;
    NetworkModel model;
    TxSelectionPolicy policy = UniformSelection{};
    ReceiverLocation receiver = CentralReceiver{};
    InterfererWeighting weighting = InterfererWeighting::PaperBinomialTruncated;
};

void validate(const NetworkModel& model);
void validate(const NetworkModel& model, const TxSelectionPolicy& policy,
              const ReceiverLocation& receiver);
void validate(const SirQuery& query);
void validate(const QuadratureSettings& q);

double db_to_linear(double x_db);

bool is_uniform(const TxSelectionPolicy& policy) noexcept;
// 0 for uniform selection.
int serving_order(const TxSelectionPolicy& policy) noexcept;

std::string to_string(const TxSelectionPolicy& policy);
std::string to_string(const ReceiverLocation& receiver);
std::string to_string(InterfererWeighting weighting);

} // namespace bppnet
