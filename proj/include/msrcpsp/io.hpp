#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "msrcpsp/model.hpp"
#include "msrcpsp/run_stats.hpp"
#include "msrcpsp/scheduling.hpp"

namespace msrcpsp {

struct ParseError : std::runtime_error {
    enum class Kind {
        malformed_header,
        missing_section,
        malformed_line,
        bad_number,
        duplicate_task_id,
        duplicate_resource_id,
        dangling_predecessor,
        unknown_task,
        unknown_resource,
        count_mismatch,
    };

    ParseError(Kind kind, int line, int column, const std::string& message);

    Kind kind;
    int line;    // 1-based, 0 when not tied to a line
    int column;  // 1-based, 0 when not tied to a column
};

const char* to_string(ParseError::Kind kind);

// ---- instance files (native grammar) ----
//
//   # comment
//   MSRCPSP <tasks> <resources> <relations> <skill types>
//   Resources:
//   <id> <salary> <kind>:<level> [<kind>:<level> ...]
//   Tasks:
//   <id> <duration> <kind>:<level> [<predecessor id> ...]
//
// Ids are whitespace-free tokens without ':'. Header counts must match the
// section contents (relations = total predecessor entries, skill types =
// distinct kinds used).

ProjectInstance parse_instance(std::string_view text);
std::string write_instance(const ProjectInstance& instance);

/// Converter for the official iMOPSE ".def" layout (General characteristics
/// header, ResourceID/TaskID sections separated by ==== rules).
ProjectInstance parse_imopse_def(std::string_view text);

ProjectInstance load_instance(const std::string& path);  // dispatches on .def extension

// ---- solution files ----

struct SolutionMeta {
    std::string instance_name;
    std::string solver;
    std::string mode;
    std::string strategy;
    std::string params_digest;
    std::uint64_t seed = 0;
};

std::string write_solution(const Schedule& schedule, const ProjectInstance& instance,
                           const SolutionMeta& meta);

struct ParsedSolution {
    Schedule schedule;
    SolutionMeta meta;
    int footer_makespan = 0;
    double footer_cost = 0.0;
};

ParsedSolution read_solution(std::string_view text, const ProjectInstance& instance);

// ---- CSV artifacts ----

/// Raw per-run rows. Header:
///   instance,solver,mode,strategy,seed,days,cost,score,iterations,dominant_ops
std::string write_runs_csv(const std::vector<RunStats>& rows);

/// Aggregate rows mirroring the averaged-results table shape. Header:
///   instance,solver,mode,strategy,runs,best_days,best_cost,avg_days,
///   sigma_days_pct,avg_cost,sigma_cost_pct,avg_score,avg_iterations,
///   avg_dominant_ops,best_strategy
std::string write_results_csv(const std::vector<AggregateRow>& rows);

/// Integral values print without decimals, everything else with two.
std::string format_number(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace msrcpsp
