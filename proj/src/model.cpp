#include "msrcpsp/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace msrcpsp {

ProjectInstance::ProjectInstance(std::vector<Task> tasks, std::vector<Resource> resources)
    : tasks_(std::move(tasks)), resources_(std::move(resources)) {
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        tasks_[i].definition_index = static_cast<int>(i);
        task_idx_.emplace(tasks_[i].id, i);
    }
    for (std::size_t k = 0; k < resources_.size(); ++k) {
        resources_[k].definition_index = static_cast<int>(k);
        resource_idx_.emplace(resources_[k].id, k);
    }

    preds_.resize(tasks_.size());
    succs_.resize(tasks_.size());
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        for (const auto& pid : tasks_[i].predecessors) {
            auto it = task_idx_.find(pid);
            if (it == task_idx_.end() || it->second == i) continue;
            preds_[i].push_back(it->second);
            succs_[it->second].push_back(i);
        }
    }

    std::set<std::string> kinds;
    for (const auto& r : resources_)
        for (const auto& s : r.skills) kinds.insert(s.kind);
    for (const auto& t : tasks_) kinds.insert(t.required_skill.kind);
    skill_types_.assign(kinds.begin(), kinds.end());
}

std::optional<std::size_t> ProjectInstance::task_index(const std::string& id) const {
    auto it = task_idx_.find(id);
    if (it == task_idx_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> ProjectInstance::resource_index(const std::string& id) const {
    auto it = resource_idx_.find(id);
    if (it == resource_idx_.end()) return std::nullopt;
    return it->second;
}

std::size_t ProjectInstance::relation_count() const {
    std::size_t n = 0;
    for (const auto& t : tasks_) n += t.predecessors.size();
    return n;
}

bool can_perform(const Resource& resource, const Task& task) {
    for (const auto& skill : resource.skills) {
        if (skill.kind == task.required_skill.kind && skill.level >= task.required_skill.level)
            return true;
    }
    return false;
}

std::vector<std::size_t> capable_resources(const ProjectInstance& instance, const Task& task) {
    std::vector<std::size_t> out;
    const auto& resources = instance.resources();
    for (std::size_t k = 0; k < resources.size(); ++k) {
        if (can_perform(resources[k], task)) out.push_back(k);
    }
    return out;
}

namespace {

// DFS cycle search over the resolved predecessor graph; returns one cycle
// as "a -> b -> ... -> a" for the violation detail.
std::optional<std::string> find_cycle(const ProjectInstance& instance) {
    const auto& preds = instance.predecessors_of();
    const std::size_t n = instance.task_count();
    std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 done
    std::vector<std::size_t> stack;

    std::vector<std::size_t> order;
    std::string cycle;
    auto dfs = [&](auto&& self, std::size_t v) -> bool {
        state[v] = 1;
        stack.push_back(v);
        for (std::size_t p : preds[v]) {
            if (state[p] == 1) {
                auto it = std::find(stack.begin(), stack.end(), p);
                std::string path;
                for (; it != stack.end(); ++it) {
                    path += instance.tasks()[*it].id;
                    path += " -> ";
                }
                path += instance.tasks()[p].id;
                cycle = path;
                return true;
            }
            if (state[p] == 0 && self(self, p)) return true;
        }
        stack.pop_back();
        state[v] = 2;
        return false;
    };

    for (std::size_t v = 0; v < n; ++v) {
        if (state[v] == 0 && dfs(dfs, v)) return cycle;
    }
    return std::nullopt;
}

}  // namespace

std::vector<Violation> validate_instance(const ProjectInstance& instance) {
    std::vector<Violation> out;

    std::set<std::string> seen_tasks;
    for (const auto& t : instance.tasks()) {
        if (!seen_tasks.insert(t.id).second)
            out.push_back({"task-id-unique", t.id, "duplicate task id"});
        if (t.duration <= 0)
            out.push_back({"duration-positive", t.id,
                           "duration " + std::to_string(t.duration) + " must be > 0"});
        if (t.required_skill.level < 0)
            out.push_back({"level-non-negative", t.id, "required skill level is negative"});
        for (const auto& pid : t.predecessors) {
            if (pid == t.id)
                out.push_back({"self-predecessor", t.id, "task lists itself as predecessor"});
            else if (!instance.task_index(pid))
                out.push_back({"predecessor-exists", t.id, "unknown predecessor '" + pid + "'"});
        }
    }

    std::set<std::string> seen_resources;
    for (const auto& r : instance.resources()) {
        if (!seen_resources.insert(r.id).second)
            out.push_back({"resource-id-unique", r.id, "duplicate resource id"});
        if (r.salary < 0.0)
            out.push_back({"salary-non-negative", r.id, "negative salary"});
        if (r.skills.empty())
            out.push_back({"skills-non-empty", r.id, "resource owns no skills"});
        for (const auto& s : r.skills) {
            if (s.level < 0)
                out.push_back({"level-non-negative", r.id, "skill " + s.kind + " level is negative"});
        }
    }

    if (auto cycle = find_cycle(instance)) {
        out.push_back({"precedence-acyclic", "", "cycle: " + *cycle});
    }

    for (const auto& t : instance.tasks()) {
        if (capable_resources(instance, t).empty())
            out.push_back({"task-schedulable", t.id, "no capable resource"});
    }

    return out;
}

BigUint solution_space_size(std::size_t task_count, std::size_t resource_count) {
    if (task_count < 1 || resource_count < 1)
        throw std::invalid_argument("solution_space_size requires n >= 1 and m >= 1");
    return BigUint::factorial(static_cast<unsigned>(task_count)) *
           BigUint::pow(resource_count, static_cast<unsigned>(task_count));
}

}  // namespace msrcpsp
