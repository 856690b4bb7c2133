#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "msrcpsp/model.hpp"

namespace msrcpsp {

/// Resource index chosen for each task, indexed by task definition order.
using Assignment = std::vector<std::size_t>;

struct Schedule {
    Assignment assignment;
    std::vector<int> start;   // per task, project origin is 0
    std::vector<int> finish;  // start + duration, non-preemptive
};

/// Weights of the duration/cost components. DO = 1.0, BO = 0.5, CO = 0.0.
struct OptimizationMode {
    double w_tau = 1.0;

    std::string label() const;
    static OptimizationMode duration();  // DO
    static OptimizationMode balanced();  // BO
    static OptimizationMode cost();      // CO
    static OptimizationMode from_label(const std::string& name);
};

struct EvalResult {
    int duration = 0;    // tau = max finish
    double cost = 0.0;   // sum of d_j * salary(assigned)
    double f_tau = 0.0;  // tau / tau_max
    double f_cost = 0.0;
    double score = 0.0;  // w_tau * f_tau + (1 - w_tau) * f_cost, lower is better
    bool degenerate_cost_range = false;  // all salaries equal: f_cost forced to 0
};

/// Sum of all durations: the fully serial (pessimistic) duration bound.
int serial_duration_bound(const ProjectInstance& instance);

/// A topological order of all tasks that keeps the given priority ranking
/// among tasks whose predecessors are already placed. `rank` must be a
/// permutation value per task (lower rank = scheduled earlier when free).
std::vector<std::size_t> precedence_repaired_order(const ProjectInstance& instance,
                                                   const std::vector<std::size_t>& rank);

/// Definition order, repaired to respect precedence.
std::vector<std::size_t> definition_task_order(const ProjectInstance& instance);

/// Serial generation: every task tentatively starts when its predecessors
/// finish, then resource conflicts are fixed by shifting. task_order must be
/// a precedence-consistent permutation and the assignment total and
/// skill-feasible; throws std::invalid_argument otherwise.
Schedule build_schedule(const ProjectInstance& instance, const Assignment& assignment,
                        const std::vector<std::size_t>& task_order);

/// Resolve all same-resource overlaps: the later-starting task of a
/// conflicting pair moves to the earlier one's finish (equal starts keep the
/// task defined first in place), and every shift cascades forward through
/// the successors so precedence stays intact. Idempotent.
Schedule fix_conflicts(Schedule schedule, const ProjectInstance& instance);

int makespan(const Schedule& schedule);

double total_cost(const Schedule& schedule, const ProjectInstance& instance);

EvalResult evaluate(const Schedule& schedule, const ProjectInstance& instance,
                    const OptimizationMode& mode);

/// Feasibility of a finished schedule: precedence, skills, one task per
/// resource at a time, every task assigned, consistent finish times.
std::vector<Violation> validate_schedule(const Schedule& schedule,
                                         const ProjectInstance& instance);

}  // namespace msrcpsp
