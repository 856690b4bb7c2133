#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msrcpsp/aco.hpp"
#include "msrcpsp/heuristics.hpp"
#include "msrcpsp/run_stats.hpp"

namespace msrcpsp {

/// Which engine a plan cell runs. `heuristic` resolves by mode: SLS
/// descending for DO, RS ascending for CO (skipped for BO).
enum class Solver { heuristic, sls_asc, sls_desc, rs_asc, rs_desc, aco, hantco };

std::string to_string(Solver solver);
Solver solver_from_label(const std::string& name);
bool solver_is_deterministic(Solver solver);

struct ExperimentPlan {
    std::vector<std::string> instances;  // paths, resolved by the caller
    std::vector<OptimizationMode> modes;
    std::vector<UpdateStrategy> strategies;
    std::vector<Solver> solvers;
    int repetitions = 10;
    std::uint64_t base_seed = 0;
    AcoParams params;
};

/// Key/value plan text:
///   instances = a.msr, b.msr
///   solvers = heuristic, aco, hantco
///   modes = do, bo, co
///   strategies = all, elite, diff
///   repetitions = 10
///   seed = 7
/// plus any AcoParams override (ants, mu, p_init, alpha, delta, p_min,
/// gamma, psi, kappa, h_init).
ExperimentPlan parse_plan(std::string_view text);

struct ExperimentResult {
    std::vector<RunStats> runs;          // plan order
    std::vector<AggregateRow> aggregate; // plan order, marker column filled
    std::vector<std::string> log;        // one line per unit, plan order
    int failed_cells = 0;
};

/// Runs every (instance x solver x mode x strategy x repetition) cell.
/// Deterministic heuristics collapse to a single repetition and carry
/// strategy "-". Failures are logged and counted, never fatal. Results are
/// identical for any worker count.
ExperimentResult execute_plan(const ExperimentPlan& plan, int workers = 1);

/// Fills best_strategy across each (instance, solver, mode) group: the
/// winner by primary average (days for DO, cost for CO, score for BO),
/// ties by the secondary aspect, remaining ties by the primary's sigma.
/// Joint winners are joined "A/E/D"-style; "*" marks a three-way tie.
void annotate_best_strategy(std::vector<AggregateRow>& rows);

/// The mode-matched seed heuristic of the hybrid: SLS(D) for DO, RS(A) for
/// CO. Throws for other modes.
Schedule hantco_seed_schedule(const ProjectInstance& instance, const OptimizationMode& mode);

struct SeedMargin {
    std::uint64_t seed = 0;
    double seed_score = 0.0;
    double hybrid_score = 0.0;
    double margin = 0.0;  // seed_score - hybrid_score, >= 0 when the hybrid dominates
};

struct SeedComparison {
    std::string mode;
    std::vector<SeedMargin> margins;
    bool all_dominated = true;  // no repetition ended worse than its seed
};

/// Runs the hybrid `repetitions` times against its seed heuristic and
/// reports score margins per repetition.
SeedComparison compare_vs_seed(const ProjectInstance& instance, const OptimizationMode& mode,
                               const AcoParams& params, UpdateStrategy strategy,
                               int repetitions, std::uint64_t base_seed);

std::string params_digest(const AcoParams& params);

}  // namespace msrcpsp
