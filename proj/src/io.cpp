#include "msrcpsp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace msrcpsp {

ParseError::ParseError(Kind kind_, int line_, int column_, const std::string& message)
    : std::runtime_error("line " + std::to_string(line_) + ": " + message),
      kind(kind_),
      line(line_),
      column(column_) {}

const char* to_string(ParseError::Kind kind) {
    switch (kind) {
        case ParseError::Kind::malformed_header: return "malformed-header";
        case ParseError::Kind::missing_section: return "missing-section";
        case ParseError::Kind::malformed_line: return "malformed-line";
        case ParseError::Kind::bad_number: return "bad-number";
        case ParseError::Kind::duplicate_task_id: return "duplicate-task-id";
        case ParseError::Kind::duplicate_resource_id: return "duplicate-resource-id";
        case ParseError::Kind::dangling_predecessor: return "dangling-predecessor";
        case ParseError::Kind::unknown_task: return "unknown-task";
        case ParseError::Kind::unknown_resource: return "unknown-resource";
        case ParseError::Kind::count_mismatch: return "count-mismatch";
    }
    return "?";
}

namespace {

struct Token {
    std::string text;
    int column;  // 1-based
};

struct Line {
    int number = 0;
    std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        ++number;
        Line line;
        line.number = number;
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
            std::size_t start = i;
            while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') ++i;
            if (i > start)
                line.tokens.push_back(
                    {std::string(raw.substr(start, i - start)), static_cast<int>(start + 1)});
        }
        if (!line.tokens.empty() && !line.tokens.front().text.starts_with('#'))
            lines.push_back(std::move(line));
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
    return lines;
}

long long parse_int(const Token& token, int line) {
    long long value = 0;
    auto [ptr, ec] =
        std::from_chars(token.text.data(), token.text.data() + token.text.size(), value);
    if (ec != std::errc() || ptr != token.text.data() + token.text.size())
        throw ParseError(ParseError::Kind::bad_number, line, token.column,
                         "expected an integer, got '" + token.text + "'");
    return value;
}

double parse_double(const Token& token, int line) {
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(token.text.data(), token.text.data() + token.text.size(), value);
    if (ec != std::errc() || ptr != token.text.data() + token.text.size())
        throw ParseError(ParseError::Kind::bad_number, line, token.column,
                         "expected a number, got '" + token.text + "'");
    return value;
}

Skill parse_skill_token(const Token& token, int line) {
    auto colon = token.text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == token.text.size())
        throw ParseError(ParseError::Kind::malformed_line, line, token.column,
                         "expected <kind>:<level>, got '" + token.text + "'");
    Skill skill;
    skill.kind = token.text.substr(0, colon);
    Token level_tok{token.text.substr(colon + 1), token.column + static_cast<int>(colon) + 1};
    skill.level = static_cast<int>(parse_int(level_tok, line));
    return skill;
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

void check_counts(const ProjectInstance& instance, long long tasks, long long resources,
                  long long relations, long long skill_types, int header_line) {
    if (static_cast<long long>(instance.task_count()) != tasks)
        throw ParseError(ParseError::Kind::count_mismatch, header_line, 0,
                         "header declares " + std::to_string(tasks) + " tasks, found " +
                             std::to_string(instance.task_count()));
    if (static_cast<long long>(instance.resource_count()) != resources)
        throw ParseError(ParseError::Kind::count_mismatch, header_line, 0,
                         "header declares " + std::to_string(resources) + " resources, found " +
                             std::to_string(instance.resource_count()));
    if (static_cast<long long>(instance.relation_count()) != relations)
        throw ParseError(ParseError::Kind::count_mismatch, header_line, 0,
                         "header declares " + std::to_string(relations) + " relations, found " +
                             std::to_string(instance.relation_count()));
    if (static_cast<long long>(instance.skill_types().size()) != skill_types)
        throw ParseError(ParseError::Kind::count_mismatch, header_line, 0,
                         "header declares " + std::to_string(skill_types) +
                             " skill types, found " +
                             std::to_string(instance.skill_types().size()));
}

void check_references(const std::vector<Task>& tasks, const std::vector<Resource>& resources,
                      int last_line) {
    std::set<std::string> task_ids, resource_ids;
    for (const auto& r : resources) {
        if (!resource_ids.insert(r.id).second)
            throw ParseError(ParseError::Kind::duplicate_resource_id, last_line, 0,
                             "duplicate resource id '" + r.id + "'");
    }
    for (const auto& t : tasks) {
        if (!task_ids.insert(t.id).second)
            throw ParseError(ParseError::Kind::duplicate_task_id, last_line, 0,
                             "duplicate task id '" + t.id + "'");
    }
    for (const auto& t : tasks) {
        for (const auto& p : t.predecessors) {
            if (!task_ids.count(p))
                throw ParseError(ParseError::Kind::dangling_predecessor, last_line, 0,
                                 "task '" + t.id + "' references unknown predecessor '" + p + "'");
        }
    }
}

}  // namespace

ProjectInstance parse_instance(std::string_view text) {
    const auto lines = tokenize(text);
    if (lines.empty())
        throw ParseError(ParseError::Kind::malformed_header, 1, 1, "empty input, expected header");

    std::size_t cursor = 0;
    const Line& header = lines[cursor];
    if (header.tokens.size() != 5 || header.tokens[0].text != "MSRCPSP")
        throw ParseError(ParseError::Kind::malformed_header, header.number,
                         header.tokens.empty() ? 1 : header.tokens[0].column,
                         "expected 'MSRCPSP <tasks> <resources> <relations> <skill types>'");
    const long long n_tasks = parse_int(header.tokens[1], header.number);
    const long long n_resources = parse_int(header.tokens[2], header.number);
    const long long n_relations = parse_int(header.tokens[3], header.number);
    const long long n_skill_types = parse_int(header.tokens[4], header.number);
    ++cursor;

    if (cursor >= lines.size() || lines[cursor].tokens[0].text != "Resources:" ||
        lines[cursor].tokens.size() != 1)
        throw ParseError(ParseError::Kind::missing_section,
                         cursor < lines.size() ? lines[cursor].number : header.number + 1, 1,
                         "expected 'Resources:' section");
    ++cursor;

    std::vector<Resource> resources;
    while (cursor < lines.size() && lines[cursor].tokens[0].text != "Tasks:") {
        const Line& line = lines[cursor];
        if (line.tokens.size() < 3)
            throw ParseError(ParseError::Kind::malformed_line, line.number, line.tokens[0].column,
                             "resource line needs '<id> <salary> <kind>:<level> ...'");
        Resource r;
        r.id = line.tokens[0].text;
        if (r.id.find(':') != std::string::npos)
            throw ParseError(ParseError::Kind::malformed_line, line.number, line.tokens[0].column,
                             "resource id must not contain ':'");
        r.salary = parse_double(line.tokens[1], line.number);
        for (std::size_t i = 2; i < line.tokens.size(); ++i)
            r.skills.push_back(parse_skill_token(line.tokens[i], line.number));
        resources.push_back(std::move(r));
        ++cursor;
    }

    if (cursor >= lines.size())
        throw ParseError(ParseError::Kind::missing_section, lines.back().number, 1,
                         "expected 'Tasks:' section");
    if (lines[cursor].tokens.size() != 1)
        throw ParseError(ParseError::Kind::malformed_line, lines[cursor].number, 1,
                         "'Tasks:' takes no arguments");
    ++cursor;

    std::vector<Task> tasks;
    for (; cursor < lines.size(); ++cursor) {
        const Line& line = lines[cursor];
        if (line.tokens.size() < 3)
            throw ParseError(ParseError::Kind::malformed_line, line.number, line.tokens[0].column,
                             "task line needs '<id> <duration> <kind>:<level> [preds...]'");
        Task t;
        t.id = line.tokens[0].text;
        if (t.id.find(':') != std::string::npos)
            throw ParseError(ParseError::Kind::malformed_line, line.number, line.tokens[0].column,
                             "task id must not contain ':'");
        t.duration = static_cast<int>(parse_int(line.tokens[1], line.number));
        t.required_skill = parse_skill_token(line.tokens[2], line.number);
        for (std::size_t i = 3; i < line.tokens.size(); ++i) {
            if (line.tokens[i].text.find(':') != std::string::npos)
                throw ParseError(ParseError::Kind::malformed_line, line.number,
                                 line.tokens[i].column,
                                 "predecessor id must not contain ':' (one required skill per task)");
            t.predecessors.push_back(line.tokens[i].text);
        }
        tasks.push_back(std::move(t));
    }

    check_references(tasks, resources, lines.back().number);
    ProjectInstance instance(std::move(tasks), std::move(resources));
    check_counts(instance, n_tasks, n_resources, n_relations, n_skill_types, header.number);
    return instance;
}

std::string write_instance(const ProjectInstance& instance) {
    std::string out;
    out += "MSRCPSP " + std::to_string(instance.task_count()) + " " +
           std::to_string(instance.resource_count()) + " " +
           std::to_string(instance.relation_count()) + " " +
           std::to_string(instance.skill_types().size()) + "\n";
    out += "Resources:\n";
    for (const auto& r : instance.resources()) {
        out += r.id + " " + format_double(r.salary);
        for (const auto& s : r.skills) out += " " + s.kind + ":" + std::to_string(s.level);
        out += "\n";
    }
    out += "Tasks:\n";
    for (const auto& t : instance.tasks()) {
        out += t.id + " " + std::to_string(t.duration) + " " + t.required_skill.kind + ":" +
               std::to_string(t.required_skill.level);
        for (const auto& p : t.predecessors) out += " " + p;
        out += "\n";
    }
    return out;
}

ProjectInstance parse_imopse_def(std::string_view text) {
    const auto lines = tokenize(text);
    long long n_tasks = -1, n_resources = -1, n_relations = -1, n_skill_types = -1;

    enum class Section { header, resources, tasks };
    Section section = Section::header;
    std::vector<Resource> resources;
    std::vector<Task> tasks;

    auto parse_skill_pairs = [&](const Line& line, std::size_t from, std::size_t to,
                                 std::vector<Skill>& out) {
        for (std::size_t i = from; i < to;) {
            const Token& tok = line.tokens[i];
            if (tok.text.back() == ':') {
                // "Q0:" "2" split across tokens
                if (i + 1 >= to)
                    throw ParseError(ParseError::Kind::malformed_line, line.number, tok.column,
                                     "skill '" + tok.text + "' is missing its level");
                Skill s;
                s.kind = tok.text.substr(0, tok.text.size() - 1);
                s.level = static_cast<int>(parse_int(line.tokens[i + 1], line.number));
                out.push_back(std::move(s));
                i += 2;
            } else {
                out.push_back(parse_skill_token(tok, line.number));
                i += 1;
            }
        }
    };

    for (const auto& line : lines) {
        const std::string& first = line.tokens[0].text;
        if (first.starts_with("===")) continue;

        if (section == Section::header) {
            // "Tasks: 100", "Resources: 10", "Precedence relations: 27",
            // "Number of skill types: 9"
            std::string joined;
            for (const auto& t : line.tokens) {
                if (!joined.empty()) joined += ' ';
                joined += t.text;
            }
            auto trailing_int = [&]() { return parse_int(line.tokens.back(), line.number); };
            if (joined.rfind("Tasks:", 0) == 0 && line.tokens.size() == 2)
                n_tasks = trailing_int();
            else if (joined.rfind("Resources:", 0) == 0 && line.tokens.size() == 2)
                n_resources = trailing_int();
            else if (joined.rfind("Precedence relations:", 0) == 0)
                n_relations = trailing_int();
            else if (joined.rfind("Number of skill types:", 0) == 0)
                n_skill_types = trailing_int();
            else if (first == "ResourceID")
                section = Section::resources;
            else if (first == "TaskID")
                section = Section::tasks;
            // anything else ("General characteristics:") is noise
            continue;
        }

        if (first == "TaskID") {
            section = Section::tasks;
            continue;
        }
        if (first == "ResourceID") {
            section = Section::resources;
            continue;
        }

        if (section == Section::resources) {
            if (line.tokens.size() < 3)
                throw ParseError(ParseError::Kind::malformed_line, line.number,
                                 line.tokens[0].column, "resource row needs id, salary, skills");
            Resource r;
            r.id = line.tokens[0].text;
            r.salary = parse_double(line.tokens[1], line.number);
            parse_skill_pairs(line, 2, line.tokens.size(), r.skills);
            resources.push_back(std::move(r));
        } else {
            if (line.tokens.size() < 2)
                throw ParseError(ParseError::Kind::malformed_line, line.number,
                                 line.tokens[0].column, "task row needs id and duration");
            Task t;
            t.id = line.tokens[0].text;
            t.duration = static_cast<int>(parse_int(line.tokens[1], line.number));
            // one skill pair, then integer predecessor ids
            std::size_t i = 2;
            std::vector<Skill> req;
            if (i < line.tokens.size() &&
                line.tokens[i].text.find(':') != std::string::npos) {
                std::size_t span = line.tokens[i].text.back() == ':' ? 2 : 1;
                parse_skill_pairs(line, i, i + span, req);
                i += span;
            }
            if (req.empty())
                throw ParseError(ParseError::Kind::malformed_line, line.number,
                                 line.tokens[0].column,
                                 "task row '" + t.id + "' is missing its required skill");
            t.required_skill = req.front();
            for (; i < line.tokens.size(); ++i) t.predecessors.push_back(line.tokens[i].text);
            tasks.push_back(std::move(t));
        }
    }

    if (n_tasks < 0 || n_resources < 0 || n_relations < 0 || n_skill_types < 0)
        throw ParseError(ParseError::Kind::malformed_header, 1, 1,
                         "missing one of the 'General characteristics' counts");
    if (tasks.empty() || resources.empty())
        throw ParseError(ParseError::Kind::missing_section, 1, 1,
                         "no ResourceID / TaskID sections found");

    check_references(tasks, resources, lines.back().number);
    ProjectInstance instance(std::move(tasks), std::move(resources));
    check_counts(instance, n_tasks, n_resources, n_relations, n_skill_types, 1);
    return instance;
}

ProjectInstance load_instance(const std::string& path) {
    const std::string text = read_text_file(path);
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".def") == 0)
        return parse_imopse_def(text);
    return parse_instance(text);
}

std::string write_solution(const Schedule& schedule, const ProjectInstance& instance,
                           const SolutionMeta& meta) {
    std::string out;
    out += "MSRCPSP-SOLUTION " + meta.instance_name + "\n";
    out += "Assignments:\n";
    const auto& tasks = instance.tasks();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        out += tasks[i].id + " " + instance.resources()[schedule.assignment[i]].id + " " +
               std::to_string(schedule.start[i]) + " " + std::to_string(schedule.finish[i]) + "\n";
    }
    out += "Footer:\n";
    out += "makespan " + std::to_string(makespan(schedule)) + "\n";
    out += "cost " + format_number(total_cost(schedule, instance)) + "\n";
    out += "mode " + meta.mode + "\n";
    out += "strategy " + (meta.strategy.empty() ? std::string("-") : meta.strategy) + "\n";
    out += "solver " + meta.solver + "\n";
    out += "params " + meta.params_digest + "\n";
    out += "seed " + std::to_string(meta.seed) + "\n";
    return out;
}

ParsedSolution read_solution(std::string_view text, const ProjectInstance& instance) {
    const auto lines = tokenize(text);
    if (lines.empty() || lines[0].tokens[0].text != "MSRCPSP-SOLUTION")
        throw ParseError(ParseError::Kind::malformed_header, 1, 1,
                         "expected 'MSRCPSP-SOLUTION <instance>'");
    ParsedSolution out;
    if (lines[0].tokens.size() > 1) out.meta.instance_name = lines[0].tokens[1].text;

    const std::size_t n = instance.task_count();
    out.schedule.assignment.assign(n, static_cast<std::size_t>(-1));
    out.schedule.start.assign(n, 0);
    out.schedule.finish.assign(n, 0);

    std::size_t cursor = 1;
    if (cursor >= lines.size() || lines[cursor].tokens[0].text != "Assignments:")
        throw ParseError(ParseError::Kind::missing_section,
                         cursor < lines.size() ? lines[cursor].number : 2, 1,
                         "expected 'Assignments:' section");
    ++cursor;

    std::size_t assigned = 0;
    for (; cursor < lines.size() && lines[cursor].tokens[0].text != "Footer:"; ++cursor) {
        const Line& line = lines[cursor];
        if (line.tokens.size() != 4)
            throw ParseError(ParseError::Kind::malformed_line, line.number, line.tokens[0].column,
                             "expected '<task> <resource> <start> <finish>'");
        auto t_idx = instance.task_index(line.tokens[0].text);
        if (!t_idx)
            throw ParseError(ParseError::Kind::unknown_task, line.number, line.tokens[0].column,
                             "unknown task '" + line.tokens[0].text + "'");
        auto r_idx = instance.resource_index(line.tokens[1].text);
        if (!r_idx)
            throw ParseError(ParseError::Kind::unknown_resource, line.number,
                             line.tokens[1].column,
                             "unknown resource '" + line.tokens[1].text + "'");
        if (out.schedule.assignment[*t_idx] != static_cast<std::size_t>(-1))
            throw ParseError(ParseError::Kind::duplicate_task_id, line.number,
                             line.tokens[0].column,
                             "task '" + line.tokens[0].text + "' assigned twice");
        out.schedule.assignment[*t_idx] = *r_idx;
        out.schedule.start[*t_idx] = static_cast<int>(parse_int(line.tokens[2], line.number));
        out.schedule.finish[*t_idx] = static_cast<int>(parse_int(line.tokens[3], line.number));
        ++assigned;
    }
    if (assigned != n)
        throw ParseError(ParseError::Kind::count_mismatch, lines.back().number, 0,
                         "solution covers " + std::to_string(assigned) + " of " +
                             std::to_string(n) + " tasks");

    for (; cursor < lines.size(); ++cursor) {
        const Line& line = lines[cursor];
        const std::string& key = line.tokens[0].text;
        if (key == "Footer:") continue;
        if (line.tokens.size() < 2) continue;
        const Token& value = line.tokens[1];
        if (key == "makespan") out.footer_makespan = static_cast<int>(parse_int(value, line.number));
        else if (key == "cost") out.footer_cost = parse_double(value, line.number);
        else if (key == "mode") out.meta.mode = value.text;
        else if (key == "strategy") out.meta.strategy = value.text;
        else if (key == "solver") out.meta.solver = value.text;
        else if (key == "params") out.meta.params_digest = value.text;
        else if (key == "seed") out.meta.seed = static_cast<std::uint64_t>(parse_int(value, line.number));
    }
    return out;
}

std::string format_number(double value) {
    const double rounded = std::round(value);
    if (std::abs(value - rounded) < 1e-9 && std::abs(value) < 9e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", rounded);
        return buf;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", value);
    return buf;
}

namespace {

std::string format_score(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

}  // namespace

std::string write_runs_csv(const std::vector<RunStats>& rows) {
    std::string out = "instance,solver,mode,strategy,seed,days,cost,score,iterations,dominant_ops\n";
    for (const auto& r : rows) {
        out += r.instance + "," + r.solver + "," + r.mode + "," + r.strategy + "," +
               std::to_string(r.seed) + "," + std::to_string(r.days) + "," +
               format_number(r.cost) + "," + format_score(r.score) + "," +
               std::to_string(r.iterations) + "," + std::to_string(r.dominant_ops) + "\n";
    }
    return out;
}

std::string write_results_csv(const std::vector<AggregateRow>& rows) {
    std::string out =
        "instance,solver,mode,strategy,runs,best_days,best_cost,avg_days,sigma_days_pct,"
        "avg_cost,sigma_cost_pct,avg_score,avg_iterations,avg_dominant_ops,best_strategy\n";
    for (const auto& r : rows) {
        out += r.instance + "," + r.solver + "," + r.mode + "," + r.strategy + "," +
               std::to_string(r.runs) + "," + std::to_string(r.best_days) + "," +
               format_number(r.best_cost) + "," + format_number(r.avg_days) + "," +
               format_number(r.sigma_days_pct) + "," + format_number(r.avg_cost) + "," +
               format_number(r.sigma_cost_pct) + "," + format_score(r.avg_score) + "," +
               format_number(r.avg_iterations) + "," + format_number(r.avg_dominant_ops) + "," +
               r.best_strategy + "\n";
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace msrcpsp
