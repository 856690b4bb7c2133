#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "msrcpsp/model.hpp"
#include "msrcpsp/scheduling.hpp"

namespace msrcpsp {

struct AcoParams {
    int ants = 12;             // p
    double mu = 0.1;           // evaporation rate
    double p_init = 1.5;       // initial pheromone per edge
    double alpha = 1.0;        // pheromone exponent in roulette selection
    double delta = 0.05;       // deposit amount
    double p_min = 0.05;       // pheromone floor
    int gamma = 150;           // stop after this many iterations without global improvement
    double psi = 0.1;          // population variety threshold (DIFF)
    int kappa_init = 20;       // worst-deposit budget seed (DIFF)
    double h_init = 1.0;       // heuristic seed pheromone multiplier
    double beta = 0.0;         // reserved; only 0 is supported
    std::uint64_t seed = 0;
};

/// Throws std::invalid_argument on out-of-range parameters.
void validate_params(const AcoParams& params);

enum class UpdateStrategy { all, elite, diff };

std::string to_string(UpdateStrategy strategy);
UpdateStrategy strategy_from_label(const std::string& name);

/// Deterministic random stream; derived values do not depend on the
/// standard library's distribution implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double next_unit();                    // [0, 1)
    std::size_t next_index(std::size_t n); // uniform in [0, n)

private:
    std::mt19937_64 engine_;
};

/// Per-task pheromone over the capable resources of that task. The edge set
/// is the union of all (task, capable resource) pairs; values never drop
/// below the floor.
class PheromoneSurface {
public:
    PheromoneSurface(const ProjectInstance& instance, double initial, double floor);

    std::size_t task_count() const { return values_.size(); }
    const std::vector<std::size_t>& capable(std::size_t task) const { return capable_[task]; }
    const std::vector<double>& values(std::size_t task) const { return values_[task]; }
    double floor() const { return floor_; }

    /// Slot of a resource inside the task's capable list, npos if incapable.
    std::size_t slot_of(std::size_t task, std::size_t resource) const;

    void add(std::size_t task, std::size_t slot, double amount);
    void set(std::size_t task, std::size_t slot, double value);
    void evaporate(double mu);

    double min_value() const;
    double total() const;
    std::size_t edge_count() const;

private:
    std::vector<std::vector<std::size_t>> capable_;
    std::vector<std::vector<std::size_t>> slot_lookup_;  // resource -> slot, npos when incapable
    std::vector<std::vector<double>> values_;
    double floor_ = 0.0;
};

struct Ant {
    Assignment path;
    Schedule schedule;
    EvalResult eval;

    double score() const { return eval.score; }
};

/// Snapshots and counters carried across iterations (Alg.-style state).
struct ColonyState {
    Ant best_local;
    Ant best_global;
    Ant worst_local;
    Ant worst_global;
    int kappa = 0;
    int iterations_since_improvement = 0;
    int iteration_count = 0;
};

/// Plain init: every edge gets p_init. Seeded init (the hybrid): edges on
/// the seed path get a boost that makes their roulette probability at
/// alpha = 1 exceed 0.95, all other edges get the floor.
PheromoneSurface init_surface(const ProjectInstance& instance, const AcoParams& params,
                              const std::optional<Schedule>& seed_schedule = std::nullopt);

/// Roulette selection: probability of a capable resource is its pheromone
/// value to the alpha-th power, normalized. alpha = 0 is uniform.
std::size_t select_resource(std::size_t task, const PheromoneSurface& surface,
                            const AcoParams& params, RandomStream& rng);

/// One full path: roulette per task, schedule built in (repaired)
/// definition order, evaluated under the mode.
Ant construct_solution(const ProjectInstance& instance, const PheromoneSurface& surface,
                       const AcoParams& params, const OptimizationMode& mode, RandomStream& rng);

/// Rank-weighted deposit: ants must be sorted ascending by score (best
/// first); the ant at 1-based position pos adds delta/pos along its path.
void update_all(PheromoneSurface& surface, const std::vector<const Ant*>& ranked, double delta);

/// Elite deposit: the iteration best and the global best each add delta
/// along their paths.
void update_elite(PheromoneSurface& surface, const Ant& best_local, const Ant& best_global,
                  double delta);

enum class DiffBranch { best, worst, fallback_best };

struct DiffOutcome {
    DiffBranch branch = DiffBranch::best;
    double variety = 0.0;          // pi
    bool degenerate_variety = false;  // worst score was 0 or best == worst
};

/// Variety-driven deposit: population variety pi = (f_w - f_b) / f_w picks
/// between rewarding the best pair (pi > psi, kappa incremented) and the
/// worst pair (pi <= psi while kappa >= 0, kappa decremented; ELITE-style
/// best deposits once kappa goes negative). Local paths gain delta/pi,
/// global paths delta/max(1, iterations since the global best improved).
DiffOutcome update_diff(PheromoneSurface& surface, ColonyState& state, const AcoParams& params);

struct RunTrace {
    int iterations = 0;
    std::vector<double> best_score_history;      // global best after each iteration
    std::vector<double> min_pheromone_history;   // surface minimum after each iteration
    long long dominant_ops = 0;                  // possible assignments x iterations
    double wall_seconds = 0.0;
};

struct AcoResult {
    Schedule best_schedule;
    EvalResult best_eval;
    RunTrace trace;
};

/// Full colony run. With a seed schedule the surface is seeded and one
/// initial ant carries the seed, so the returned best is never worse than
/// the seed. Stops after params.gamma iterations without improvement.
AcoResult run(const ProjectInstance& instance, const AcoParams& params,
              const OptimizationMode& mode, UpdateStrategy strategy,
              const std::optional<Schedule>& seed_schedule = std::nullopt);

/// Sum over tasks of the number of capable resources: the per-iteration
/// dominant-operation count.
long long count_possible_assignments(const ProjectInstance& instance);

}  // namespace msrcpsp
