#include "support/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace msrcpsp::testing {

void enumerate_assignments(const ProjectInstance& instance,
                           const std::function<void(const Assignment&)>& visit) {
    const std::size_t n = instance.task_count();
    std::vector<std::vector<std::size_t>> capable(n);
    for (std::size_t t = 0; t < n; ++t) {
        capable[t] = capable_resources(instance, instance.tasks()[t]);
        if (capable[t].empty()) return;  // no feasible assignment at all
    }

    Assignment assignment(n);
    std::vector<std::size_t> odometer(n, 0);
    while (true) {
        for (std::size_t t = 0; t < n; ++t) assignment[t] = capable[t][odometer[t]];
        visit(assignment);
        std::size_t t = 0;
        while (t < n && ++odometer[t] == capable[t].size()) odometer[t++] = 0;
        if (t == n) break;
    }
}

OracleBest exhaustive_best(const ProjectInstance& instance, const OptimizationMode& mode) {
    const auto order = definition_task_order(instance);
    OracleBest best;
    bool first = true;
    enumerate_assignments(instance, [&](const Assignment& assignment) {
        const Schedule schedule = build_schedule(instance, assignment, order);
        const EvalResult eval = evaluate(schedule, instance, mode);
        if (first || eval.score < best.score) {
            first = false;
            best.score = eval.score;
            best.days = eval.duration;
            best.cost = eval.cost;
            best.assignment = assignment;
        }
    });
    if (first) throw std::logic_error("instance has no feasible assignment");
    return best;
}

IndependentEval independent_eval(const Schedule& schedule, const ProjectInstance& instance,
                                 double w_tau) {
    IndependentEval out;
    const auto& tasks = instance.tasks();
    int tau = 0;
    int total_duration = 0;
    double cost = 0.0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        tau = std::max(tau, schedule.finish[i]);
        total_duration += tasks[i].duration;
        cost += tasks[i].duration * instance.resources()[schedule.assignment[i]].salary;
    }
    double lo = instance.resources().front().salary;
    double hi = lo;
    for (const auto& r : instance.resources()) {
        lo = std::min(lo, r.salary);
        hi = std::max(hi, r.salary);
    }
    out.days = tau;
    out.cost = cost;
    const double f_tau = static_cast<double>(tau) / total_duration;
    const double denom = total_duration * hi - total_duration * lo;
    const double f_cost = denom > 0.0 ? cost / denom : 0.0;
    out.score = w_tau * f_tau + (1.0 - w_tau) * f_cost;
    return out;
}

long long brute_force_space_count(int n, int m) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    long long count = 0;
    do {
        std::vector<int> pick(static_cast<std::size_t>(n), 0);
        while (true) {
            ++count;
            int t = 0;
            while (t < n && ++pick[static_cast<std::size_t>(t)] == m)
                pick[static_cast<std::size_t>(t++)] = 0;
            if (t == n) break;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

namespace {

// Decimal string multiply: digits stored most-significant first.
std::string mul_decimal(const std::string& value, unsigned factor) {
    if (factor == 0) return "0";
    std::string out;
    unsigned long long carry = 0;
    for (std::size_t i = value.size(); i-- > 0;) {
        const unsigned long long cur =
            static_cast<unsigned long long>(value[i] - '0') * factor + carry;
        out.push_back(static_cast<char>('0' + cur % 10));
        carry = cur / 10;
    }
    while (carry > 0) {
        out.push_back(static_cast<char>('0' + carry % 10));
        carry /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

std::string decimal_space_size(unsigned n, unsigned m) {
    std::string value = "1";
    for (unsigned i = 2; i <= n; ++i) value = mul_decimal(value, i);
    for (unsigned i = 0; i < n; ++i) value = mul_decimal(value, m);
    return value;
}

double chi_square_statistic(const std::vector<long long>& observed,
                            const std::vector<double>& expected_probs) {
    long long total = 0;
    for (long long o : observed) total += o;
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = expected_probs[i] * static_cast<double>(total);
        if (expected <= 0.0) continue;
        const double diff = static_cast<double>(observed[i]) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

}  // namespace msrcpsp::testing
