#pragma once

#include <cstdint>
#include <string>

namespace msrcpsp {

/// One solver execution, flattened for CSV/logging. Wall time is carried
/// for the run log and reports but never serialized into CSV artifacts,
/// which must be byte-reproducible.
struct RunStats {
    std::string instance;
    std::string solver;
    std::string mode;
    std::string strategy;  // "-" for deterministic heuristics
    std::uint64_t seed = 0;
    int days = 0;
    double cost = 0.0;
    double score = 0.0;
    int iterations = 0;
    long long dominant_ops = 0;
    double wall_seconds = 0.0;
};

/// Per (instance, solver, mode, strategy) aggregate over repetitions.
struct AggregateRow {
    std::string instance;
    std::string solver;
    std::string mode;
    std::string strategy;
    int runs = 0;
    int best_days = 0;       // days/cost of the best run by the mode's primary criterion
    double best_cost = 0.0;
    double avg_days = 0.0;
    double sigma_days_pct = 0.0;  // population sigma as % of the average
    double avg_cost = 0.0;
    double sigma_cost_pct = 0.0;
    double avg_score = 0.0;
    double avg_iterations = 0.0;
    double avg_dominant_ops = 0.0;
    std::string best_strategy;  // marker across strategies of the same cell group
};

}  // namespace msrcpsp
