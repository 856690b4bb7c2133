#pragma once

#include "msrcpsp/model.hpp"
#include "msrcpsp/scheduling.hpp"

namespace msrcpsp {

enum class SortOrder { ascending, descending };

std::string to_string(SortOrder order);
SortOrder sort_order_from_label(const std::string& name);

/// Direct successor count per task; transitive counts the whole downstream
/// closure instead of the literal successor list.
std::vector<int> successor_counts(const ProjectInstance& instance, bool transitive = false);

/// Successors-list-size rule: tasks ranked by successor count (ties by
/// definition index), precedence-repaired, each task greedily assigned the
/// capable resource that frees up earliest (ties by resource definition
/// order). Deterministic.
Schedule sls_schedule(const ProjectInstance& instance, SortOrder order,
                      bool transitive_successors = false);

/// Resource-salary rule: resources ranked by salary (ties by definition
/// order), tasks taken in definition order (precedence-repaired), each task
/// assigned the first capable resource in that ranking. Deterministic.
Schedule rs_schedule(const ProjectInstance& instance, SortOrder order);

}  // namespace msrcpsp
