#include "msrcpsp/heuristics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace msrcpsp {

std::string to_string(SortOrder order) {
    return order == SortOrder::ascending ? "asc" : "desc";
}

SortOrder sort_order_from_label(const std::string& name) {
    if (name == "asc" || name == "ascending" || name == "a") return SortOrder::ascending;
    if (name == "desc" || name == "descending" || name == "d") return SortOrder::descending;
    throw std::invalid_argument("unknown sort order '" + name + "'");
}

std::vector<int> successor_counts(const ProjectInstance& instance, bool transitive) {
    const auto& succs = instance.successors_of();
    const std::size_t n = instance.task_count();
    std::vector<int> counts(n, 0);
    if (!transitive) {
        for (std::size_t i = 0; i < n; ++i) counts[i] = static_cast<int>(succs[i].size());
        return counts;
    }
    // Downstream closure per task via DFS; instances are small enough that
    // the quadratic worst case does not matter.
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack(succs[i].begin(), succs[i].end());
        int count = 0;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            if (seen[v]) continue;
            seen[v] = 1;
            ++count;
            for (std::size_t s : succs[v]) stack.push_back(s);
        }
        counts[i] = count;
    }
    return counts;
}

namespace {

void require_valid(const ProjectInstance& instance) {
    auto violations = validate_instance(instance);
    if (!violations.empty())
        throw std::invalid_argument("invalid instance: " + violations.front().rule + " (" +
                                    violations.front().subject + ")");
}

// Positions after sorting task indices by key; lower rank = higher priority.
std::vector<std::size_t> ranks_by(const std::vector<std::size_t>& sorted) {
    std::vector<std::size_t> rank(sorted.size());
    for (std::size_t pos = 0; pos < sorted.size(); ++pos) rank[sorted[pos]] = pos;
    return rank;
}

}  // namespace

Schedule sls_schedule(const ProjectInstance& instance, SortOrder order,
                      bool transitive_successors) {
    require_valid(instance);
    const auto counts = successor_counts(instance, transitive_successors);
    const std::size_t n = instance.task_count();

    std::vector<std::size_t> sorted(n);
    std::iota(sorted.begin(), sorted.end(), 0);
    std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        if (counts[a] != counts[b])
            return order == SortOrder::descending ? counts[a] > counts[b] : counts[a] < counts[b];
        return a < b;
    });

    const auto task_order = precedence_repaired_order(instance, ranks_by(sorted));

    // Greedy pass tracking when each resource frees up; the task goes to the
    // capable resource available earliest.
    const auto& tasks = instance.tasks();
    const auto& preds = instance.predecessors_of();
    std::vector<int> available(instance.resource_count(), 0);
    std::vector<int> finish(n, 0);
    Assignment assignment(n, 0);
    for (std::size_t t : task_order) {
        const auto capable = capable_resources(instance, tasks[t]);
        std::size_t best = capable.front();
        for (std::size_t k : capable)
            if (available[k] < available[best]) best = k;
        int start = available[best];
        for (std::size_t p : preds[t]) start = std::max(start, finish[p]);
        finish[t] = start + tasks[t].duration;
        available[best] = finish[t];
        assignment[t] = best;
    }

    return build_schedule(instance, assignment, task_order);
}

Schedule rs_schedule(const ProjectInstance& instance, SortOrder order) {
    require_valid(instance);
    const auto& resources = instance.resources();

    std::vector<std::size_t> by_salary(resources.size());
    std::iota(by_salary.begin(), by_salary.end(), 0);
    std::stable_sort(by_salary.begin(), by_salary.end(), [&](std::size_t a, std::size_t b) {
        if (resources[a].salary != resources[b].salary)
            return order == SortOrder::ascending ? resources[a].salary < resources[b].salary
                                                 : resources[a].salary > resources[b].salary;
        return a < b;
    });

    const auto task_order = definition_task_order(instance);
    const auto& tasks = instance.tasks();
    Assignment assignment(tasks.size(), 0);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        bool found = false;
        for (std::size_t k : by_salary) {
            if (can_perform(resources[k], tasks[t])) {
                assignment[t] = k;
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("no capable resource for task " + tasks[t].id);
    }

    return build_schedule(instance, assignment, task_order);
}

}  // namespace msrcpsp
