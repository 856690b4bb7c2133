#include "msrcpsp/scheduling.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace msrcpsp {

std::string OptimizationMode::label() const {
    if (w_tau == 1.0) return "do";
    if (w_tau == 0.5) return "bo";
    if (w_tau == 0.0) return "co";
    return "w" + std::to_string(w_tau);
}

OptimizationMode OptimizationMode::duration() { return {1.0}; }
OptimizationMode OptimizationMode::balanced() { return {0.5}; }
OptimizationMode OptimizationMode::cost() { return {0.0}; }

OptimizationMode OptimizationMode::from_label(const std::string& name) {
    if (name == "do") return duration();
    if (name == "bo") return balanced();
    if (name == "co") return cost();
    throw std::invalid_argument("unknown optimization mode '" + name + "'");
}

int serial_duration_bound(const ProjectInstance& instance) {
    int sum = 0;
    for (const auto& t : instance.tasks()) sum += t.duration;
    return sum;
}

std::vector<std::size_t> precedence_repaired_order(const ProjectInstance& instance,
                                                   const std::vector<std::size_t>& rank) {
    const std::size_t n = instance.task_count();
    if (rank.size() != n) throw std::invalid_argument("rank size mismatch");
    const auto& preds = instance.predecessors_of();
    const auto& succs = instance.successors_of();

    std::vector<std::size_t> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = preds[i].size();

    using Entry = std::pair<std::size_t, std::size_t>;  // (rank, task)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (remaining[i] == 0) ready.emplace(rank[i], i);

    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        auto [r, t] = ready.top();
        ready.pop();
        order.push_back(t);
        for (std::size_t s : succs[t]) {
            if (--remaining[s] == 0) ready.emplace(rank[s], s);
        }
    }
    if (order.size() != n) throw std::invalid_argument("precedence graph has a cycle");
    return order;
}

std::vector<std::size_t> definition_task_order(const ProjectInstance& instance) {
    std::vector<std::size_t> rank(instance.task_count());
    for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
    return precedence_repaired_order(instance, rank);
}

namespace {

// Push all transitive successors of `root` late enough to satisfy
// precedence again. Only ever delays, never advances.
void cascade_successors(Schedule& schedule, const ProjectInstance& instance, std::size_t root) {
    const auto& succs = instance.successors_of();
    const auto& preds = instance.predecessors_of();
    const auto& tasks = instance.tasks();

    std::vector<std::size_t> queue{root};
    std::vector<char> queued(tasks.size(), 0);
    queued[root] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::size_t v = queue[head];
        for (std::size_t s : succs[v]) {
            int ready = 0;
            for (std::size_t p : preds[s]) ready = std::max(ready, schedule.finish[p]);
            if (ready > schedule.start[s]) {
                schedule.start[s] = ready;
                schedule.finish[s] = ready + tasks[s].duration;
                if (!queued[s]) {
                    queued[s] = 1;
                    queue.push_back(s);
                }
            }
        }
    }
}

}  // namespace

Schedule fix_conflicts(Schedule schedule, const ProjectInstance& instance) {
    const auto& tasks = instance.tasks();
    const std::size_t n = tasks.size();

    std::vector<std::vector<std::size_t>> on_resource(instance.resource_count());
    for (std::size_t i = 0; i < n; ++i) on_resource[schedule.assignment[i]].push_back(i);

    auto earlier = [&](std::size_t a, std::size_t b) {
        if (schedule.start[a] != schedule.start[b]) return schedule.start[a] < schedule.start[b];
        return tasks[a].definition_index < tasks[b].definition_index;
    };

    // Safety valve: each shift strictly increases a start time and starts
    // stay inside the serial bound, so this can never trip on valid input.
    const long long shift_cap =
        static_cast<long long>(n + 1) * (serial_duration_bound(instance) + 1) + 16;
    long long shifts = 0;

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& group : on_resource) {
            if (group.size() < 2) continue;
            bool group_dirty = true;
            while (group_dirty) {
                group_dirty = false;
                std::sort(group.begin(), group.end(), earlier);
                for (std::size_t i = 0; i + 1 < group.size(); ++i) {
                    std::size_t a = group[i], b = group[i + 1];
                    if (schedule.start[b] < schedule.finish[a]) {
                        schedule.start[b] = schedule.finish[a];
                        schedule.finish[b] = schedule.start[b] + tasks[b].duration;
                        cascade_successors(schedule, instance, b);
                        if (++shifts > shift_cap)
                            throw std::logic_error("conflict fixing did not converge");
                        group_dirty = true;
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
    return schedule;
}

Schedule build_schedule(const ProjectInstance& instance, const Assignment& assignment,
                        const std::vector<std::size_t>& task_order) {
    const auto& tasks = instance.tasks();
    const std::size_t n = tasks.size();
    if (assignment.size() != n) throw std::invalid_argument("assignment is not total");
    if (task_order.size() != n) throw std::invalid_argument("task_order is not a permutation");

    for (std::size_t i = 0; i < n; ++i) {
        if (assignment[i] >= instance.resource_count())
            throw std::invalid_argument("assignment references unknown resource");
        if (!can_perform(instance.resources()[assignment[i]], tasks[i]))
            throw std::invalid_argument("resource '" + instance.resources()[assignment[i]].id +
                                        "' cannot perform task '" + tasks[i].id + "'");
    }

    const auto& preds = instance.predecessors_of();
    std::vector<char> placed(n, 0);
    Schedule schedule;
    schedule.assignment = assignment;
    schedule.start.assign(n, 0);
    schedule.finish.assign(n, 0);

    for (std::size_t t : task_order) {
        if (t >= n || placed[t]) throw std::invalid_argument("task_order is not a permutation");
        int ready = 0;
        for (std::size_t p : preds[t]) {
            if (!placed[p])
                throw std::invalid_argument("task_order violates precedence at task '" +
                                            tasks[t].id + "'");
            ready = std::max(ready, schedule.finish[p]);
        }
        schedule.start[t] = ready;
        schedule.finish[t] = ready + tasks[t].duration;
        placed[t] = 1;
    }

    return fix_conflicts(std::move(schedule), instance);
}

int makespan(const Schedule& schedule) {
    int out = 0;
    for (int f : schedule.finish) out = std::max(out, f);
    return out;
}

double total_cost(const Schedule& schedule, const ProjectInstance& instance) {
    double cost = 0.0;
    const auto& tasks = instance.tasks();
    for (std::size_t i = 0; i < tasks.size(); ++i)
        cost += tasks[i].duration * instance.resources()[schedule.assignment[i]].salary;
    return cost;
}

EvalResult evaluate(const Schedule& schedule, const ProjectInstance& instance,
                    const OptimizationMode& mode) {
    EvalResult out;
    out.duration = makespan(schedule);
    out.cost = total_cost(schedule, instance);

    const int tau_max = serial_duration_bound(instance);
    out.f_tau = tau_max > 0 ? static_cast<double>(out.duration) / tau_max : 0.0;

    // c_min / c_max put every task on the cheapest / most expensive
    // resource with skills ignored, so the denominator is a constant of
    // the instance.
    double s_min = std::numeric_limits<double>::infinity();
    double s_max = -std::numeric_limits<double>::infinity();
    for (const auto& r : instance.resources()) {
        s_min = std::min(s_min, r.salary);
        s_max = std::max(s_max, r.salary);
    }
    const double c_min = tau_max * s_min;
    const double c_max = tau_max * s_max;
    if (c_max > c_min) {
        out.f_cost = out.cost / (c_max - c_min);
    } else {
        out.f_cost = 0.0;
        out.degenerate_cost_range = true;
    }

    out.score = mode.w_tau * out.f_tau + (1.0 - mode.w_tau) * out.f_cost;
    return out;
}

std::vector<Violation> validate_schedule(const Schedule& schedule,
                                         const ProjectInstance& instance) {
    std::vector<Violation> out;
    const auto& tasks = instance.tasks();
    const std::size_t n = tasks.size();

    if (schedule.assignment.size() != n || schedule.start.size() != n ||
        schedule.finish.size() != n) {
        out.push_back({"assignment-total", "", "schedule does not cover every task exactly once"});
        return out;
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (schedule.assignment[i] >= instance.resource_count()) {
            out.push_back({"assignment-total", tasks[i].id, "unknown resource index"});
            continue;
        }
        const auto& res = instance.resources()[schedule.assignment[i]];
        if (!can_perform(res, tasks[i]))
            out.push_back({"skill-capability", tasks[i].id,
                           "resource '" + res.id + "' lacks " + tasks[i].required_skill.kind + ":" +
                               std::to_string(tasks[i].required_skill.level)});
        if (schedule.start[i] < 0)
            out.push_back({"start-non-negative", tasks[i].id, "negative start"});
        if (schedule.finish[i] != schedule.start[i] + tasks[i].duration)
            out.push_back({"non-preemption", tasks[i].id, "finish != start + duration"});
    }

    const auto& preds = instance.predecessors_of();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p : preds[i]) {
            if (schedule.start[i] < schedule.finish[p])
                out.push_back({"precedence", tasks[i].id,
                               "starts before predecessor '" + tasks[p].id + "' finishes"});
        }
    }

    std::vector<std::vector<std::size_t>> on_resource(instance.resource_count());
    for (std::size_t i = 0; i < n; ++i)
        if (schedule.assignment[i] < instance.resource_count())
            on_resource[schedule.assignment[i]].push_back(i);
    for (std::size_t k = 0; k < on_resource.size(); ++k) {
        auto& group = on_resource[k];
        std::sort(group.begin(), group.end(),
                  [&](std::size_t a, std::size_t b) { return schedule.start[a] < schedule.start[b]; });
        for (std::size_t i = 0; i + 1 < group.size(); ++i) {
            std::size_t a = group[i], b = group[i + 1];
            if (schedule.start[b] < schedule.finish[a])
                out.push_back({"resource-overlap", instance.resources()[k].id,
                               "tasks '" + tasks[a].id + "' and '" + tasks[b].id + "' overlap"});
        }
    }

    return out;
}

}  // namespace msrcpsp
