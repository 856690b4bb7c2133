#include "msrcpsp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>

#include "msrcpsp/io.hpp"

namespace msrcpsp {

std::string to_string(Solver solver) {
    switch (solver) {
        case Solver::heuristic: return "heuristic";
        case Solver::sls_asc: return "sls(a)";
        case Solver::sls_desc: return "sls(d)";
        case Solver::rs_asc: return "rs(a)";
        case Solver::rs_desc: return "rs(d)";
        case Solver::aco: return "aco";
        case Solver::hantco: return "hantco";
    }
    return "?";
}

Solver solver_from_label(const std::string& name) {
    if (name == "heuristic") return Solver::heuristic;
    if (name == "sls" || name == "sls(d)") return Solver::sls_desc;
    if (name == "sls(a)") return Solver::sls_asc;
    if (name == "rs" || name == "rs(a)") return Solver::rs_asc;
    if (name == "rs(d)") return Solver::rs_desc;
    if (name == "aco") return Solver::aco;
    if (name == "hantco") return Solver::hantco;
    throw std::invalid_argument("unknown solver '" + name + "'");
}

bool solver_is_deterministic(Solver solver) {
    return solver != Solver::aco && solver != Solver::hantco;
}

Schedule hantco_seed_schedule(const ProjectInstance& instance, const OptimizationMode& mode) {
    if (mode.w_tau == 1.0) return sls_schedule(instance, SortOrder::descending);
    if (mode.w_tau == 0.0) return rs_schedule(instance, SortOrder::ascending);
    throw std::invalid_argument("the hybrid runs only in duration or cost mode");
}

std::string params_digest(const AcoParams& p) {
    auto fmt = [](double v) {
        char buf[48];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        (void)ec;
        return std::string(buf, ptr);
    };
    const std::string canon = "ants=" + std::to_string(p.ants) + ";mu=" + fmt(p.mu) +
                              ";p_init=" + fmt(p.p_init) + ";alpha=" + fmt(p.alpha) +
                              ";delta=" + fmt(p.delta) + ";p_min=" + fmt(p.p_min) +
                              ";gamma=" + std::to_string(p.gamma) + ";psi=" + fmt(p.psi) +
                              ";kappa=" + std::to_string(p.kappa_init) +
                              ";h_init=" + fmt(p.h_init) + ";beta=" + fmt(p.beta);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        std::size_t comma = value.find(',', pos);
        std::string item = value.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

double to_double(const std::string& value, int line) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ParseError(ParseError::Kind::bad_number, line, 0, "bad number '" + value + "'");
    return out;
}

long long to_int(const std::string& value, int line) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ParseError(ParseError::Kind::bad_number, line, 0, "bad integer '" + value + "'");
    return out;
}

}  // namespace

ExperimentPlan parse_plan(std::string_view text) {
    ExperimentPlan plan;
    plan.modes.clear();
    plan.strategies.clear();

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line(text.substr(
            pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos));
        ++line_no;
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(ParseError::Kind::malformed_line, line_no, 0,
                             "expected 'key = value'");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError(ParseError::Kind::malformed_line, line_no, 0,
                             "expected 'key = value'");

        if (key == "instances") plan.instances = split_list(value);
        else if (key == "solvers") {
            plan.solvers.clear();
            for (const auto& s : split_list(value)) plan.solvers.push_back(solver_from_label(s));
        } else if (key == "modes") {
            for (const auto& s : split_list(value))
                plan.modes.push_back(OptimizationMode::from_label(s));
        } else if (key == "strategies") {
            for (const auto& s : split_list(value))
                plan.strategies.push_back(strategy_from_label(s));
        } else if (key == "repetitions") plan.repetitions = static_cast<int>(to_int(value, line_no));
        else if (key == "seed") plan.base_seed = static_cast<std::uint64_t>(to_int(value, line_no));
        else if (key == "ants") plan.params.ants = static_cast<int>(to_int(value, line_no));
        else if (key == "mu") plan.params.mu = to_double(value, line_no);
        else if (key == "p_init") plan.params.p_init = to_double(value, line_no);
        else if (key == "alpha") plan.params.alpha = to_double(value, line_no);
        else if (key == "delta") plan.params.delta = to_double(value, line_no);
        else if (key == "p_min") plan.params.p_min = to_double(value, line_no);
        else if (key == "gamma") plan.params.gamma = static_cast<int>(to_int(value, line_no));
        else if (key == "psi") plan.params.psi = to_double(value, line_no);
        else if (key == "kappa") plan.params.kappa_init = static_cast<int>(to_int(value, line_no));
        else if (key == "h_init") plan.params.h_init = to_double(value, line_no);
        else if (key == "beta") plan.params.beta = to_double(value, line_no);
        else
            throw ParseError(ParseError::Kind::malformed_line, line_no, 0,
                             "unknown plan key '" + key + "'");
    }

    if (plan.instances.empty())
        throw ParseError(ParseError::Kind::malformed_line, line_no, 0, "plan lists no instances");
    if (plan.solvers.empty())
        throw ParseError(ParseError::Kind::malformed_line, line_no, 0, "plan lists no solvers");
    if (plan.modes.empty()) plan.modes = {OptimizationMode::duration(), OptimizationMode::cost()};
    if (plan.strategies.empty())
        plan.strategies = {UpdateStrategy::all, UpdateStrategy::elite, UpdateStrategy::diff};
    if (plan.repetitions < 1)
        throw ParseError(ParseError::Kind::malformed_line, line_no, 0, "repetitions must be >= 1");
    return plan;
}

namespace {

struct Unit {
    std::size_t instance_idx = 0;
    Solver solver = Solver::aco;
    OptimizationMode mode;
    std::optional<UpdateStrategy> strategy;
    int rep = 0;
    std::uint64_t seed = 0;
};

std::string instance_label(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name.resize(dot);
    return name;
}

RunStats run_unit(const Unit& unit, const ProjectInstance& instance, const std::string& label,
                  const AcoParams& base_params) {
    RunStats stats;
    stats.instance = label;
    stats.mode = unit.mode.label();
    stats.strategy = unit.strategy ? to_string(*unit.strategy) : "-";
    stats.seed = unit.seed;

    const auto started = std::chrono::steady_clock::now();

    Solver solver = unit.solver;
    if (solver == Solver::heuristic)
        solver = unit.mode.w_tau == 1.0 ? Solver::sls_desc : Solver::rs_asc;

    if (solver_is_deterministic(solver)) {
        Schedule schedule;
        switch (solver) {
            case Solver::sls_asc: schedule = sls_schedule(instance, SortOrder::ascending); break;
            case Solver::sls_desc: schedule = sls_schedule(instance, SortOrder::descending); break;
            case Solver::rs_asc: schedule = rs_schedule(instance, SortOrder::ascending); break;
            case Solver::rs_desc: schedule = rs_schedule(instance, SortOrder::descending); break;
            default: throw std::logic_error("unexpected solver");
        }
        const auto eval = evaluate(schedule, instance, unit.mode);
        stats.solver = to_string(solver);
        stats.strategy = "-";
        stats.seed = 0;
        stats.days = eval.duration;
        stats.cost = eval.cost;
        stats.score = eval.score;
        stats.iterations = 1;
        stats.dominant_ops = count_possible_assignments(instance);
    } else {
        AcoParams params = base_params;
        params.seed = unit.seed;
        std::optional<Schedule> seed_schedule;
        if (solver == Solver::hantco) seed_schedule = hantco_seed_schedule(instance, unit.mode);
        const auto result = run(instance, params, unit.mode, *unit.strategy, seed_schedule);
        stats.solver = to_string(solver);
        stats.days = result.best_eval.duration;
        stats.cost = result.best_eval.cost;
        stats.score = result.best_eval.score;
        stats.iterations = result.trace.iterations;
        stats.dominant_ops = result.trace.dominant_ops;
    }

    stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return stats;
}

// Primary/secondary aspect values for the best-run and best-strategy rules.
double primary_of(const OptimizationMode& mode, double days, double cost, double score) {
    if (mode.w_tau == 1.0) return days;
    if (mode.w_tau == 0.0) return cost;
    return score;
}

double secondary_of(const OptimizationMode& mode, double days, double cost) {
    return mode.w_tau == 1.0 ? cost : days;
}

}  // namespace

SeedComparison compare_vs_seed(const ProjectInstance& instance, const OptimizationMode& mode,
                               const AcoParams& params, UpdateStrategy strategy,
                               int repetitions, std::uint64_t base_seed) {
    SeedComparison out;
    out.mode = mode.label();
    const Schedule seed_schedule = hantco_seed_schedule(instance, mode);
    const double seed_score = evaluate(seed_schedule, instance, mode).score;
    for (int rep = 0; rep < repetitions; ++rep) {
        AcoParams p = params;
        p.seed = base_seed + static_cast<std::uint64_t>(rep);
        const auto result = run(instance, p, mode, strategy, seed_schedule);
        SeedMargin margin;
        margin.seed = p.seed;
        margin.seed_score = seed_score;
        margin.hybrid_score = result.best_eval.score;
        margin.margin = seed_score - result.best_eval.score;
        if (margin.margin < 0.0) out.all_dominated = false;
        out.margins.push_back(margin);
    }
    return out;
}

ExperimentResult execute_plan(const ExperimentPlan& plan, int workers) {
    validate_params(plan.params);

    ExperimentResult result;

    // Load each instance once, up front; unloadable instances fail all
    // their cells but never abort the plan.
    std::vector<std::optional<ProjectInstance>> instances(plan.instances.size());
    std::vector<std::string> labels(plan.instances.size());
    std::vector<std::string> load_errors(plan.instances.size());
    for (std::size_t i = 0; i < plan.instances.size(); ++i) {
        labels[i] = instance_label(plan.instances[i]);
        try {
            instances[i] = load_instance(plan.instances[i]);
            auto violations = validate_instance(*instances[i]);
            if (!violations.empty()) {
                instances[i].reset();
                load_errors[i] = "invalid instance: " + violations.front().rule;
            }
        } catch (const std::exception& e) {
            load_errors[i] = e.what();
        }
    }

    std::vector<Unit> units;
    for (std::size_t i = 0; i < plan.instances.size(); ++i) {
        for (Solver solver : plan.solvers) {
            for (const auto& mode : plan.modes) {
                const bool deterministic = solver_is_deterministic(solver) ||
                                           solver == Solver::heuristic;
                if (solver == Solver::heuristic && mode.w_tau != 1.0 && mode.w_tau != 0.0) {
                    result.log.push_back("skip instance=" + labels[i] +
                                         " solver=heuristic mode=" + mode.label() +
                                         " reason=no-heuristic-for-mode");
                    continue;
                }
                if (solver == Solver::hantco && mode.w_tau != 1.0 && mode.w_tau != 0.0) {
                    result.log.push_back("skip instance=" + labels[i] + " solver=hantco mode=" +
                                         mode.label() + " reason=hybrid-needs-do-or-co");
                    continue;
                }
                if (deterministic) {
                    Unit unit;
                    unit.instance_idx = i;
                    unit.solver = solver;
                    unit.mode = mode;
                    units.push_back(unit);
                    continue;
                }
                for (UpdateStrategy strategy : plan.strategies) {
                    for (int rep = 0; rep < plan.repetitions; ++rep) {
                        Unit unit;
                        unit.instance_idx = i;
                        unit.solver = solver;
                        unit.mode = mode;
                        unit.strategy = strategy;
                        unit.rep = rep;
                        unit.seed = plan.base_seed + static_cast<std::uint64_t>(rep);
                        units.push_back(unit);
                    }
                }
            }
        }
    }

    struct Slot {
        bool ok = false;
        RunStats stats;
        std::string error;
    };
    std::vector<Slot> slots(units.size());

    auto work = [&](std::size_t u) {
        const Unit& unit = units[u];
        if (!instances[unit.instance_idx]) {
            slots[u].error = load_errors[unit.instance_idx];
            return;
        }
        try {
            slots[u].stats = run_unit(unit, *instances[unit.instance_idx],
                                      labels[unit.instance_idx], plan.params);
            slots[u].ok = true;
        } catch (const std::exception& e) {
            slots[u].error = e.what();
        }
    };

    const int thread_count =
        std::max(1, std::min<int>(workers, static_cast<int>(units.size())));
    if (thread_count <= 1) {
        for (std::size_t u = 0; u < units.size(); ++u) work(u);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) {
            pool.emplace_back([&] {
                for (std::size_t u = next.fetch_add(1); u < units.size(); u = next.fetch_add(1))
                    work(u);
            });
        }
        for (auto& thread : pool) thread.join();
    }

    for (std::size_t u = 0; u < units.size(); ++u) {
        const Unit& unit = units[u];
        const Slot& slot = slots[u];
        char wall[32] = "";
        if (slot.ok)
            std::snprintf(wall, sizeof(wall), " wall=%.3fs", slot.stats.wall_seconds);
        const std::string head =
            "instance=" + labels[unit.instance_idx] +
            " solver=" + (slot.ok ? slot.stats.solver : to_string(unit.solver)) +
            " mode=" + unit.mode.label() +
            " strategy=" + (unit.strategy ? to_string(*unit.strategy) : "-") +
            " rep=" + std::to_string(unit.rep);
        if (slot.ok) {
            result.runs.push_back(slot.stats);
            result.log.push_back("ok " + head + " days=" + std::to_string(slot.stats.days) +
                                 " cost=" + format_number(slot.stats.cost) + wall);
        } else {
            result.failed_cells += 1;
            result.log.push_back("fail " + head + " error=" + slot.error);
        }
    }

    // Aggregate per (instance, solver, mode, strategy), preserving first
    // appearance order.
    struct Group {
        std::vector<const RunStats*> runs;
        OptimizationMode mode;
    };
    std::vector<std::pair<std::string, Group>> groups;
    auto group_key = [](const RunStats& r) {
        return r.instance + "\x1f" + r.solver + "\x1f" + r.mode + "\x1f" + r.strategy;
    };
    for (const auto& run_row : result.runs) {
        const std::string key = group_key(run_row);
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first == key; });
        if (it == groups.end()) {
            Group g;
            g.mode = OptimizationMode::from_label(run_row.mode);
            groups.emplace_back(key, std::move(g));
            it = groups.end() - 1;
        }
        it->second.runs.push_back(&run_row);
    }

    for (auto& [key, group] : groups) {
        const auto& runs = group.runs;
        AggregateRow row;
        row.instance = runs.front()->instance;
        row.solver = runs.front()->solver;
        row.mode = runs.front()->mode;
        row.strategy = runs.front()->strategy;
        row.runs = static_cast<int>(runs.size());

        const RunStats* best = runs.front();
        for (const RunStats* r : runs) {
            const double rp = primary_of(group.mode, r->days, r->cost, r->score);
            const double bp = primary_of(group.mode, best->days, best->cost, best->score);
            if (rp < bp ||
                (rp == bp && secondary_of(group.mode, r->days, r->cost) <
                                 secondary_of(group.mode, best->days, best->cost)))
                best = r;
        }
        row.best_days = best->days;
        row.best_cost = best->cost;

        auto mean = [&](auto pick) {
            double sum = 0.0;
            for (const RunStats* r : runs) sum += pick(*r);
            return sum / static_cast<double>(runs.size());
        };
        auto sigma_pct = [&](auto pick, double avg) {
            if (avg == 0.0) return 0.0;
            double acc = 0.0;
            for (const RunStats* r : runs) {
                const double d = pick(*r) - avg;
                acc += d * d;
            }
            return std::sqrt(acc / static_cast<double>(runs.size())) / avg * 100.0;
        };
        row.avg_days = mean([](const RunStats& r) { return static_cast<double>(r.days); });
        row.sigma_days_pct =
            sigma_pct([](const RunStats& r) { return static_cast<double>(r.days); }, row.avg_days);
        row.avg_cost = mean([](const RunStats& r) { return r.cost; });
        row.sigma_cost_pct = sigma_pct([](const RunStats& r) { return r.cost; }, row.avg_cost);
        row.avg_score = mean([](const RunStats& r) { return r.score; });
        row.avg_iterations =
            mean([](const RunStats& r) { return static_cast<double>(r.iterations); });
        row.avg_dominant_ops =
            mean([](const RunStats& r) { return static_cast<double>(r.dominant_ops); });
        result.aggregate.push_back(std::move(row));
    }

    annotate_best_strategy(result.aggregate);
    return result;
}

void annotate_best_strategy(std::vector<AggregateRow>& rows) {
    auto strategy_letter = [](const std::string& s) {
        if (s == "all") return std::string("A");
        if (s == "elite") return std::string("E");
        if (s == "diff") return std::string("D");
        return s;
    };
    for (auto& row : rows) {
        if (row.strategy == "-") {
            row.best_strategy = "-";
            continue;
        }
        std::vector<const AggregateRow*> peers;
        for (const auto& other : rows) {
            if (other.instance == row.instance && other.solver == row.solver &&
                other.mode == row.mode && other.strategy != "-")
                peers.push_back(&other);
        }
        const OptimizationMode mode = OptimizationMode::from_label(row.mode);
        auto rank = [&](const AggregateRow* r) {
            const double primary = primary_of(mode, r->avg_days, r->avg_cost, r->avg_score);
            const double secondary = secondary_of(mode, r->avg_days, r->avg_cost);
            const double primary_sigma =
                mode.w_tau == 0.0 ? r->sigma_cost_pct : r->sigma_days_pct;
            return std::tuple<double, double, double>(primary, secondary, primary_sigma);
        };
        auto best_rank = rank(peers.front());
        for (const auto* p : peers) best_rank = std::min(best_rank, rank(p));
        std::vector<std::string> winners;
        static const char* kOrder[] = {"all", "elite", "diff"};
        for (const char* name : kOrder) {
            for (const auto* p : peers) {
                if (p->strategy == name && rank(p) == best_rank)
                    winners.push_back(strategy_letter(p->strategy));
            }
        }
        if (winners.size() >= 3)
            row.best_strategy = "*";
        else {
            std::string marker;
            for (const auto& w : winners) {
                if (!marker.empty()) marker += "/";
                marker += w;
            }
            row.best_strategy = marker;
        }
    }
}

}  // namespace msrcpsp
