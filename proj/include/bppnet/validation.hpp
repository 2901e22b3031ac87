#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "bppnet/parallel.hpp"

namespace bppnet {

struct ValidationOptions {
    bool quick = false;          // 1e5 Monte Carlo trials instead of 1e6
    std::uint64_t seed = 20161016;
    int lanes = default_lanes();

    long trials() const { return quick ? 100000 : 1000000; }
};

struct CheckResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

constexpr int kCheckCount = 9;

// Runs one acceptance check, 1..kCheckCount.
CheckResult run_check(int id, const ValidationOptions& options);

// Runs the given checks (all when empty) in order; each result is written
// to `progress` as soon as it is known.
std::vector<CheckResult> run_validation(const ValidationOptions& options,
                                        const std::vector<int>& ids = {},
                                        std::ostream* progress = nullptr);

// "PASS  3  special functions ... (detail)"
std::string format_check(const CheckResult& result);

} // namespace bppnet
