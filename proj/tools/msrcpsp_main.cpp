#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "msrcpsp/aco.hpp"
#include "msrcpsp/harness.hpp"
#include "msrcpsp/heuristics.hpp"
#include "msrcpsp/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;       // parse / IO failures
constexpr int kExitInvalid = 2;     // validation violations
constexpr int kExitUsage = 64;      // bad flag combinations
constexpr int kExitInfeasible = 70; // solver produced an infeasible schedule (self-check)

std::string resolve_instance_path(const std::string& given) {
    namespace fs = std::filesystem;
    if (fs::exists(given)) return given;
    if (const char* dir = std::getenv("MSRCPSP_INSTANCE_DIR")) {
        const fs::path candidate = fs::path(dir) / given;
        if (fs::exists(candidate)) return candidate.string();
    }
    return given;  // let the open fail with a clear message
}

std::string instance_label(const std::string& path) {
    const std::filesystem::path p(path);
    return p.stem().string();
}

int cmd_validate(const std::string& instance_arg) {
    const std::string path = resolve_instance_path(instance_arg);
    msrcpsp::ProjectInstance instance;
    try {
        instance = msrcpsp::load_instance(path);
    } catch (const msrcpsp::ParseError& e) {
        std::cerr << path << ": " << to_string(e.kind) << ": " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }
    const auto violations = msrcpsp::validate_instance(instance);
    for (const auto& v : violations)
        std::cout << v.rule << (v.subject.empty() ? "" : " " + v.subject) << ": " << v.detail
                  << "\n";
    if (!violations.empty()) return kExitInvalid;
    const auto space = msrcpsp::magnitude(
        msrcpsp::solution_space_size(instance.task_count(), instance.resource_count()));
    std::cout << "ok: " << instance.task_count() << " tasks, " << instance.resource_count()
              << " resources, " << instance.relation_count() << " relations, "
              << instance.skill_types().size() << " skill types, solution space ~"
              << space.to_string() << "\n";
    return kExitOk;
}

struct SolveArgs {
    std::string instance;
    std::string solver = "aco";
    std::string mode = "do";
    std::string strategy = "elite";
    std::string rule;
    std::string order;
    std::string out;
    msrcpsp::AcoParams params;
};

int cmd_solve(const SolveArgs& args) {
    using namespace msrcpsp;

    const std::string path = resolve_instance_path(args.instance);
    ProjectInstance instance;
    try {
        instance = load_instance(path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }
    if (const auto violations = validate_instance(instance); !violations.empty()) {
        for (const auto& v : violations) std::cerr << v.rule << " " << v.subject << "\n";
        return kExitInvalid;
    }

    OptimizationMode mode;
    try {
        mode = OptimizationMode::from_label(args.mode);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    Schedule schedule;
    SolutionMeta meta;
    meta.instance_name = instance_label(path);
    meta.mode = mode.label();
    meta.params_digest = "-";
    meta.strategy = "-";
    int iterations = 1;
    double score = 0.0;

    try {
        if (args.solver == "heuristic") {
            std::string rule = args.rule;
            if (rule.empty()) {
                if (mode.w_tau == 1.0) rule = "sls";
                else if (mode.w_tau == 0.0) rule = "rs";
                else {
                    std::cerr << "no default heuristic exists for mode bo; pass --rule\n";
                    return kExitUsage;
                }
            }
            SortOrder order;
            if (!args.order.empty()) order = sort_order_from_label(args.order);
            else order = rule == "sls" ? SortOrder::descending : SortOrder::ascending;
            if (rule == "sls") schedule = sls_schedule(instance, order);
            else if (rule == "rs") schedule = rs_schedule(instance, order);
            else {
                std::cerr << "unknown rule '" << rule << "' (use sls or rs)\n";
                return kExitUsage;
            }
            meta.solver = rule + "(" + (order == SortOrder::ascending ? "a" : "d") + ")";
            score = evaluate(schedule, instance, mode).score;
        } else if (args.solver == "aco" || args.solver == "hantco") {
            if (!args.rule.empty() || !args.order.empty()) {
                std::cerr << "--rule/--order apply only to --solver heuristic\n";
                return kExitUsage;
            }
            UpdateStrategy strategy = strategy_from_label(args.strategy);
            std::optional<Schedule> seed_schedule;
            if (args.solver == "hantco") {
                if (mode.w_tau != 1.0 && mode.w_tau != 0.0) {
                    std::cerr << "hantco runs only with --mode do or --mode co\n";
                    return kExitUsage;
                }
                seed_schedule = hantco_seed_schedule(instance, mode);
            }
            validate_params(args.params);
            const auto result = run(instance, args.params, mode, strategy, seed_schedule);
            schedule = result.best_schedule;
            iterations = result.trace.iterations;
            score = result.best_eval.score;
            meta.solver = args.solver;
            meta.strategy = to_string(strategy);
            meta.seed = args.params.seed;
            meta.params_digest = params_digest(args.params);
        } else {
            std::cerr << "unknown solver '" << args.solver << "' (heuristic|aco|hantco)\n";
            return kExitUsage;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    if (!validate_schedule(schedule, instance).empty()) {
        std::cerr << "internal error: produced schedule failed self-validation\n";
        return kExitInfeasible;
    }

    std::string out_path = args.out;
    if (out_path.empty())
        out_path = meta.instance_name + "_" + args.solver + "_" + meta.mode + ".sol";
    try {
        write_text_file(out_path, write_solution(schedule, instance, meta));
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }

    const auto eval = evaluate(schedule, instance, mode);
    char score_buf[32];
    std::snprintf(score_buf, sizeof(score_buf), "%.6f", eval.score);
    std::cout << "days=" << eval.duration << " cost=" << format_number(eval.cost)
              << " score=" << score_buf << " iters=" << iterations << "\n";
    return kExitOk;
}

int cmd_experiment(const std::string& plan_path, const std::string& out_dir, int workers) {
    using namespace msrcpsp;
    namespace fs = std::filesystem;

    ExperimentPlan plan;
    try {
        plan = parse_plan(read_text_file(plan_path));
    } catch (const std::exception& e) {
        std::cerr << "plan: " << e.what() << "\n";
        return kExitError;
    }

    // Instance paths resolve against the plan's directory, then the
    // instance-dir environment variable.
    const fs::path plan_dir = fs::path(plan_path).parent_path();
    for (auto& path : plan.instances) {
        if (fs::exists(path)) continue;
        if (const fs::path local = plan_dir / path; fs::exists(local)) {
            path = local.string();
            continue;
        }
        path = resolve_instance_path(path);
    }

    ExperimentResult result;
    try {
        result = execute_plan(plan, workers);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }

    try {
        fs::create_directories(out_dir);
        write_text_file((fs::path(out_dir) / "runs.csv").string(), write_runs_csv(result.runs));
        write_text_file((fs::path(out_dir) / "aggregate.csv").string(),
                        write_results_csv(result.aggregate));
        std::string log;
        for (const auto& line : result.log) log += line + "\n";
        write_text_file((fs::path(out_dir) / "run.log").string(), log);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }

    std::cout << result.runs.size() << " runs, " << result.aggregate.size()
              << " aggregate rows -> " << out_dir << "\n";
    if (result.failed_cells > 0)
        std::cerr << "warning: " << result.failed_cells << " cell(s) failed, see run.log\n";
    return kExitOk;
}

int cmd_convert(const std::string& in_path, const std::string& out_path) {
    using namespace msrcpsp;
    try {
        const ProjectInstance instance = parse_imopse_def(read_text_file(in_path));
        write_text_file(out_path, write_instance(instance));
        std::cout << "wrote " << out_path << " (" << instance.task_count() << " tasks, "
                  << instance.resource_count() << " resources)\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MS-RCPSP solver: priority-rule heuristics, ant colony optimization, and the "
                 "heuristic-seeded hybrid"};
    app.require_subcommand(1);

    std::string validate_instance_arg;
    auto* validate = app.add_subcommand("validate", "Parse an instance and check well-formedness");
    validate->add_option("instance", validate_instance_arg, "instance file (.msr or .def)")
        ->required();

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Schedule one instance and write a solution file");
    solve->add_option("instance", solve_args.instance, "instance file (.msr or .def)")->required();
    solve->add_option("--solver", solve_args.solver, "heuristic|aco|hantco")
        ->check(CLI::IsMember({"heuristic", "aco", "hantco"}));
    solve->add_option("--mode", solve_args.mode, "do|bo|co (duration, balanced, cost)")
        ->check(CLI::IsMember({"do", "bo", "co"}));
    solve->add_option("--strategy", solve_args.strategy, "pheromone update: all|elite|diff")
        ->check(CLI::IsMember({"all", "elite", "diff"}));
    solve->add_option("--rule", solve_args.rule, "heuristic rule: sls|rs");
    solve->add_option("--order", solve_args.order, "heuristic sort order: asc|desc");
    solve->add_option("--seed", solve_args.params.seed, "random seed");
    solve->add_option("--ants", solve_args.params.ants, "colony size");
    solve->add_option("--mu", solve_args.params.mu, "evaporation rate");
    solve->add_option("--delta", solve_args.params.delta, "deposit amount");
    solve->add_option("--alpha", solve_args.params.alpha, "pheromone exponent");
    solve->add_option("--p-init", solve_args.params.p_init, "initial pheromone");
    solve->add_option("--p-min", solve_args.params.p_min, "pheromone floor");
    solve->add_option("--gamma", solve_args.params.gamma, "no-improvement stop limit");
    solve->add_option("--psi", solve_args.params.psi, "population variety threshold");
    solve->add_option("--kappa", solve_args.params.kappa_init, "worst-deposit budget");
    solve->add_option("--h-init", solve_args.params.h_init, "seed pheromone multiplier");
    solve->add_option("--out", solve_args.out, "solution file path");

    std::string plan_path, experiment_out = "results";
    int workers = 1;
    auto* experiment = app.add_subcommand("experiment", "Run a batch plan and emit CSV artifacts");
    experiment->add_option("--plan", plan_path, "plan file")->required();
    experiment->add_option("--out", experiment_out, "output directory");
    experiment->add_option("--workers", workers, "parallel cell workers")
        ->check(CLI::PositiveNumber);

    std::string convert_in, convert_out;
    auto* convert =
        app.add_subcommand("convert", "Convert an official-format .def instance to native form");
    convert->add_option("input", convert_in, "instance in official .def layout")->required();
    convert->add_option("output", convert_out, "native instance file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    if (validate->parsed()) return cmd_validate(validate_instance_arg);
    if (solve->parsed()) return cmd_solve(solve_args);
    if (experiment->parsed()) return cmd_experiment(plan_path, experiment_out, workers);
    if (convert->parsed()) return cmd_convert(convert_in, convert_out);
    return kExitUsage;
}
