#include "msrcpsp/aco.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace msrcpsp {

void validate_params(const AcoParams& params) {
    if (params.ants < 2) throw std::invalid_argument("ants must be >= 2");
    if (!(params.mu > 0.0 && params.mu < 1.0))
        throw std::invalid_argument("mu must be in (0, 1)");
    if (!(params.p_min < params.p_init))
        throw std::invalid_argument("p_min must be below p_init");
    if (params.p_min < 0.0) throw std::invalid_argument("p_min must be >= 0");
    if (params.gamma < 1) throw std::invalid_argument("gamma must be >= 1");
    if (!(params.psi > 0.0 && params.psi < 1.0))
        throw std::invalid_argument("psi must be in (0, 1)");
    if (params.alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
    if (params.delta <= 0.0) throw std::invalid_argument("delta must be > 0");
    if (params.beta != 0.0)
        throw std::invalid_argument("beta != 0 is unsupported: no desirability term is defined");
}

std::string to_string(UpdateStrategy strategy) {
    switch (strategy) {
        case UpdateStrategy::all: return "all";
        case UpdateStrategy::elite: return "elite";
        case UpdateStrategy::diff: return "diff";
    }
    return "?";
}

UpdateStrategy strategy_from_label(const std::string& name) {
    if (name == "all") return UpdateStrategy::all;
    if (name == "elite") return UpdateStrategy::elite;
    if (name == "diff") return UpdateStrategy::diff;
    throw std::invalid_argument("unknown update strategy '" + name + "'");
}

double RandomStream::next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t RandomStream::next_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("next_index on empty range");
    auto idx = static_cast<std::size_t>(next_unit() * static_cast<double>(n));
    return idx < n ? idx : n - 1;
}

PheromoneSurface::PheromoneSurface(const ProjectInstance& instance, double initial, double floor)
    : floor_(floor) {
    const std::size_t n = instance.task_count();
    const std::size_t m = instance.resource_count();
    capable_.resize(n);
    slot_lookup_.assign(n, std::vector<std::size_t>(m, static_cast<std::size_t>(-1)));
    values_.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        capable_[t] = capable_resources(instance, instance.tasks()[t]);
        values_[t].assign(capable_[t].size(), initial);
        for (std::size_t slot = 0; slot < capable_[t].size(); ++slot)
            slot_lookup_[t][capable_[t][slot]] = slot;
    }
}

std::size_t PheromoneSurface::slot_of(std::size_t task, std::size_t resource) const {
    return slot_lookup_[task][resource];
}

void PheromoneSurface::add(std::size_t task, std::size_t slot, double amount) {
    values_[task][slot] += amount;
}

void PheromoneSurface::set(std::size_t task, std::size_t slot, double value) {
    values_[task][slot] = value;
}

void PheromoneSurface::evaporate(double mu) {
    const double keep = 1.0 - mu;
    for (auto& row : values_)
        for (auto& v : row) v = std::max(v * keep, floor_);
}

double PheromoneSurface::min_value() const {
    double out = std::numeric_limits<double>::infinity();
    for (const auto& row : values_)
        for (double v : row) out = std::min(out, v);
    return out;
}

double PheromoneSurface::total() const {
    double out = 0.0;
    for (const auto& row : values_)
        for (double v : row) out += v;
    return out;
}

std::size_t PheromoneSurface::edge_count() const {
    std::size_t out = 0;
    for (const auto& row : values_) out += row.size();
    return out;
}

PheromoneSurface init_surface(const ProjectInstance& instance, const AcoParams& params,
                              const std::optional<Schedule>& seed_schedule) {
    if (!seed_schedule) return PheromoneSurface(instance, params.p_init, params.p_min);

    PheromoneSurface surface(instance, params.p_min, params.p_min);
    const auto& assignment = seed_schedule->assignment;
    if (assignment.size() != instance.task_count())
        throw std::invalid_argument("seed schedule does not cover every task");
    for (std::size_t t = 0; t < assignment.size(); ++t) {
        const std::size_t slot = surface.slot_of(t, assignment[t]);
        if (slot == static_cast<std::size_t>(-1))
            throw std::invalid_argument("seed schedule assigns an incapable resource to task '" +
                                        instance.tasks()[t].id + "'");
        // Boost so the seed edge wins the roulette with probability > 0.95
        // at alpha = 1 no matter how many rivals share the floor value.
        const auto rivals = static_cast<double>(surface.capable(t).size() - 1);
        const double boost =
            std::max(params.h_init * params.p_init * surface.capable(t).size() * 20.0,
                     20.0 * rivals * params.p_min);
        surface.set(t, slot, std::max(boost, params.p_init));
    }
    return surface;
}

std::size_t select_resource(std::size_t task, const PheromoneSurface& surface,
                            const AcoParams& params, RandomStream& rng) {
    const auto& values = surface.values(task);
    const auto& capable = surface.capable(task);
    if (capable.empty()) throw std::invalid_argument("task has no capable resource");
    if (capable.size() == 1) return capable[0];

    double total = 0.0;
    thread_local std::vector<double> weights;
    weights.assign(values.size(), 0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        double w;
        if (params.alpha == 1.0) w = values[i];
        else if (params.alpha == 0.0) w = 1.0;
        else w = std::pow(values[i], params.alpha);
        weights[i] = w;
        total += w;
    }
    if (total <= 0.0) return capable[rng.next_index(capable.size())];

    const double pick = rng.next_unit() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (pick < acc) return capable[i];
    }
    return capable.back();
}

namespace {

Ant make_ant(const ProjectInstance& instance, Assignment assignment,
             const std::vector<std::size_t>& task_order, const OptimizationMode& mode) {
    Ant ant;
    ant.path = std::move(assignment);
    ant.schedule = build_schedule(instance, ant.path, task_order);
    ant.eval = evaluate(ant.schedule, instance, mode);
    return ant;
}

Ant construct_with_order(const ProjectInstance& instance, const PheromoneSurface& surface,
                         const AcoParams& params, const OptimizationMode& mode,
                         const std::vector<std::size_t>& task_order, RandomStream& rng) {
    Assignment assignment(instance.task_count());
    for (std::size_t t = 0; t < assignment.size(); ++t)
        assignment[t] = select_resource(t, surface, params, rng);
    return make_ant(instance, std::move(assignment), task_order, mode);
}

void deposit_on_path(PheromoneSurface& surface, const Assignment& path, double amount) {
    for (std::size_t t = 0; t < path.size(); ++t) {
        const std::size_t slot = surface.slot_of(t, path[t]);
        surface.add(t, slot, amount);
    }
}

}  // namespace

Ant construct_solution(const ProjectInstance& instance, const PheromoneSurface& surface,
                       const AcoParams& params, const OptimizationMode& mode, RandomStream& rng) {
    return construct_with_order(instance, surface, params, mode, definition_task_order(instance),
                                rng);
}

void update_all(PheromoneSurface& surface, const std::vector<const Ant*>& ranked, double delta) {
    for (std::size_t pos = 0; pos < ranked.size(); ++pos)
        deposit_on_path(surface, ranked[pos]->path, delta / static_cast<double>(pos + 1));
}

void update_elite(PheromoneSurface& surface, const Ant& best_local, const Ant& best_global,
                  double delta) {
    deposit_on_path(surface, best_local.path, delta);
    deposit_on_path(surface, best_global.path, delta);
}

DiffOutcome update_diff(PheromoneSurface& surface, ColonyState& state, const AcoParams& params) {
    DiffOutcome out;
    const double f_b = state.best_local.score();
    const double f_w = state.worst_local.score();
    if (f_w <= 0.0 || f_w <= f_b) {
        out.variety = 0.0;
        out.degenerate_variety = true;
    } else {
        out.variety = (f_w - f_b) / f_w;
    }

    const double global_amount =
        params.delta / std::max(1, state.iterations_since_improvement);
    const double local_amount = out.variety > 0.0 ? params.delta / out.variety : params.delta;

    if (out.variety > params.psi) {
        out.branch = DiffBranch::best;
        deposit_on_path(surface, state.best_local.path, local_amount);
        deposit_on_path(surface, state.best_global.path, global_amount);
        state.kappa += 1;
    } else if (state.kappa >= 0) {
        out.branch = DiffBranch::worst;
        deposit_on_path(surface, state.worst_local.path, local_amount);
        deposit_on_path(surface, state.worst_global.path, global_amount);
        state.kappa -= 1;
    } else {
        out.branch = DiffBranch::fallback_best;
        deposit_on_path(surface, state.best_local.path, local_amount);
        deposit_on_path(surface, state.best_global.path, global_amount);
    }
    return out;
}

long long count_possible_assignments(const ProjectInstance& instance) {
    long long total = 0;
    for (const auto& task : instance.tasks())
        total += static_cast<long long>(capable_resources(instance, task).size());
    return total;
}

AcoResult run(const ProjectInstance& instance, const AcoParams& params,
              const OptimizationMode& mode, UpdateStrategy strategy,
              const std::optional<Schedule>& seed_schedule) {
    validate_params(params);
    {
        auto violations = validate_instance(instance);
        if (!violations.empty())
            throw std::invalid_argument("invalid instance: " + violations.front().rule + " (" +
                                        violations.front().subject + ")");
    }

    const auto started = std::chrono::steady_clock::now();
    const auto task_order = definition_task_order(instance);
    RandomStream rng(params.seed);

    PheromoneSurface surface = init_surface(instance, params, seed_schedule);

    // Initial colony: random capable picks, plus the seed ant in the hybrid.
    std::vector<Ant> ants;
    ants.reserve(params.ants);
    if (seed_schedule) {
        Ant seed_ant;
        seed_ant.path = seed_schedule->assignment;
        seed_ant.schedule = *seed_schedule;
        seed_ant.eval = evaluate(seed_ant.schedule, instance, mode);
        ants.push_back(std::move(seed_ant));
    }
    while (ants.size() < static_cast<std::size_t>(params.ants)) {
        Assignment assignment(instance.task_count());
        for (std::size_t t = 0; t < assignment.size(); ++t) {
            const auto& capable = surface.capable(t);
            if (capable.empty())
                throw std::invalid_argument("task '" + instance.tasks()[t].id +
                                            "' has no capable resource");
            assignment[t] = capable[rng.next_index(capable.size())];
        }
        ants.push_back(make_ant(instance, std::move(assignment), task_order, mode));
    }

    auto rank_ants = [](const std::vector<Ant>& colony) {
        std::vector<const Ant*> ranked(colony.size());
        for (std::size_t i = 0; i < colony.size(); ++i) ranked[i] = &colony[i];
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const Ant* a, const Ant* b) { return a->score() < b->score(); });
        return ranked;
    };

    ColonyState state;
    {
        auto ranked = rank_ants(ants);
        state.best_local = *ranked.front();
        state.worst_local = *ranked.back();
        state.best_global = state.best_local;
        state.worst_global = state.worst_local;
        state.kappa = params.kappa_init;
    }

    RunTrace trace;
    trace.best_score_history.push_back(state.best_global.score());
    trace.min_pheromone_history.push_back(surface.min_value());

    while (state.iterations_since_improvement < params.gamma) {
        state.iteration_count += 1;
        for (auto& ant : ants)
            ant = construct_with_order(instance, surface, params, mode, task_order, rng);

        auto ranked = rank_ants(ants);
        state.best_local = *ranked.front();
        state.worst_local = *ranked.back();

        surface.evaporate(params.mu);
        switch (strategy) {
            case UpdateStrategy::all:
                update_all(surface, ranked, params.delta);
                break;
            case UpdateStrategy::elite:
                update_elite(surface, state.best_local, state.best_global, params.delta);
                break;
            case UpdateStrategy::diff:
                update_diff(surface, state, params);
                break;
        }

        const bool improved = state.best_local.score() < state.best_global.score();
        if (improved) state.best_global = state.best_local;
        if (state.worst_local.score() > state.worst_global.score())
            state.worst_global = state.worst_local;
        state.iterations_since_improvement = improved ? 0 : state.iterations_since_improvement + 1;

        trace.best_score_history.push_back(state.best_global.score());
        trace.min_pheromone_history.push_back(surface.min_value());
    }

    trace.iterations = state.iteration_count;
    trace.dominant_ops = count_possible_assignments(instance) * state.iteration_count;
    trace.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    AcoResult result;
    result.best_schedule = state.best_global.schedule;
    result.best_eval = state.best_global.eval;
    result.trace = std::move(trace);
    return result;
}

}  // namespace msrcpsp
