#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "msrcpsp/bignum.hpp"

namespace msrcpsp {

/// A skill type together with a familiarity level. A resource owning
/// {kind, level} can serve any requirement {kind, level' <= level}.
struct Skill {
    std::string kind;
    int level = 0;

    bool operator==(const Skill&) const = default;
};

struct Task {
    std::string id;
    int duration = 0;
    Skill required_skill;
    std::vector<std::string> predecessors;
    int definition_index = 0;  // position in the instance file; used for tie-breaking

    bool operator==(const Task&) const = default;
};

struct Resource {
    std::string id;
    double salary = 0.0;  // rate per time unit
    std::vector<Skill> skills;
    int definition_index = 0;

    bool operator==(const Resource&) const = default;
};

/// One broken rule, reported as data rather than an error.
struct Violation {
    std::string rule;     // e.g. "duration-positive", "precedence-acyclic"
    std::string subject;  // task or resource id
    std::string detail;
};

/// An MS-RCPSP instance. Immutable after construction; index lookups and
/// the successor adjacency are precomputed so schedulers can work with
/// dense indices instead of string ids.
class ProjectInstance {
public:
    ProjectInstance() = default;
    ProjectInstance(std::vector<Task> tasks, std::vector<Resource> resources);

    const std::vector<Task>& tasks() const { return tasks_; }
    const std::vector<Resource>& resources() const { return resources_; }
    const std::vector<std::string>& skill_types() const { return skill_types_; }

    std::size_t task_count() const { return tasks_.size(); }
    std::size_t resource_count() const { return resources_.size(); }

    std::optional<std::size_t> task_index(const std::string& id) const;
    std::optional<std::size_t> resource_index(const std::string& id) const;

    /// Direct predecessor indices per task. Ids that resolve to no task are
    /// dropped here and reported by validate_instance.
    const std::vector<std::vector<std::size_t>>& predecessors_of() const { return preds_; }
    const std::vector<std::vector<std::size_t>>& successors_of() const { return succs_; }

    std::size_t relation_count() const;

    bool operator==(const ProjectInstance& other) const {
        return tasks_ == other.tasks_ && resources_ == other.resources_;
    }

private:
    std::vector<Task> tasks_;
    std::vector<Resource> resources_;
    std::vector<std::string> skill_types_;  // sorted, distinct
    std::unordered_map<std::string, std::size_t> task_idx_;
    std::unordered_map<std::string, std::size_t> resource_idx_;
    std::vector<std::vector<std::size_t>> preds_;
    std::vector<std::vector<std::size_t>> succs_;
};

/// True iff the resource owns the task's required skill kind at the
/// required level or above.
bool can_perform(const Resource& resource, const Task& task);

/// Indices of all capable resources, in instance resource order.
std::vector<std::size_t> capable_resources(const ProjectInstance& instance, const Task& task);

/// Static well-formedness: positive durations, non-negative salaries and
/// levels, non-empty skill sets, resolvable acyclic precedence, unique ids,
/// and at least one capable resource per task. Empty result == valid.
std::vector<Violation> validate_instance(const ProjectInstance& instance);

/// n! * m^n — the count of all task orderings times all resource
/// assignments, feasible or not.
BigUint solution_space_size(std::size_t task_count, std::size_t resource_count);

}  // namespace msrcpsp
