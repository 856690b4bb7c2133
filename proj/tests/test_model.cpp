#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "msrcpsp/model.hpp"
#include "support/oracle.hpp"
#include "support/test_instances.hpp"

using namespace msrcpsp;
using namespace msrcpsp::testing;

namespace {

bool has_rule(const std::vector<Violation>& violations, const std::string& rule) {
    for (const auto& v : violations)
        if (v.rule == rule) return true;
    return false;
}

}  // namespace

TEST_CASE("can_perform checks kind and level") {
    const auto instance = skill_matrix_instance();
    const auto& r1 = instance.resources()[0];
    const auto& r3 = instance.resources()[2];
    const auto& t1 = instance.tasks()[0];

    CHECK(can_perform(r1, t1));        // R1 owns Q2 at level 2, T1 needs Q2:2
    CHECK_FALSE(can_perform(r3, t1));  // R3 owns Q2 only at level 1

    Resource exact{"X", 1.0, {{"Q2", 2}}};
    CHECK(can_perform(exact, t1));  // boundary equality counts
}

TEST_CASE("can_perform is monotone in skill level") {
    const auto instance = skill_matrix_instance();
    for (const auto& task : instance.tasks()) {
        for (const auto& resource : instance.resources()) {
            if (!can_perform(resource, task)) continue;
            Resource raised = resource;
            for (auto& s : raised.skills)
                if (s.kind == task.required_skill.kind) s.level += 3;
            CHECK(can_perform(raised, task));
        }
    }
}

TEST_CASE("capable_resources matches the capability example") {
    const auto instance = skill_matrix_instance();
    auto ids = [&](const Task& t) {
        std::vector<std::string> out;
        for (std::size_t k : capable_resources(instance, t)) out.push_back(instance.resources()[k].id);
        return out;
    };
    CHECK(ids(instance.tasks()[0]) == std::vector<std::string>{"R1", "R4"});
    CHECK(ids(instance.tasks()[1]) == std::vector<std::string>{"R2", "R4"});
    CHECK(ids(instance.tasks()[2]) == std::vector<std::string>{"R1", "R3", "R4"});
    CHECK(ids(instance.tasks()[3]) == std::vector<std::string>{"R1"});
}

TEST_CASE("capable_resources equals the can_perform filter on random instances") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto instance = random_instance(seed, 12, 5, 4, 0.3);
        for (const auto& task : instance.tasks()) {
            const auto capable = capable_resources(instance, task);
            std::set<std::size_t> got(capable.begin(), capable.end());
            CHECK(std::is_sorted(capable.begin(), capable.end()));
            for (std::size_t k = 0; k < instance.resource_count(); ++k)
                CHECK(got.count(k) == static_cast<std::size_t>(
                                          can_perform(instance.resources()[k], task)));
        }
    }
}

TEST_CASE("capable_resources edge cases") {
    std::vector<Resource> resources{{"R1", 1.0, {{"Q0", 1}}}, {"R2", 2.0, {{"Q0", 2}}}};
    std::vector<Task> tasks{
        {"T1", 1, {"Q0", 9}, {}},  // above everyone
        {"T2", 1, {"Q0", 0}, {}},  // everyone qualifies
    };
    ProjectInstance instance(std::move(tasks), std::move(resources));
    CHECK(capable_resources(instance, instance.tasks()[0]).empty());
    CHECK(capable_resources(instance, instance.tasks()[1]).size() == 2);
}

TEST_CASE("validate_instance accepts well-formed instances") {
    CHECK(validate_instance(skill_matrix_instance()).empty());
    CHECK(validate_instance(chain_instance()).empty());
    for (std::uint64_t seed = 0; seed < 50; ++seed)
        CHECK(validate_instance(fuzz_instance(seed)).empty());
}

TEST_CASE("validate_instance flags broken invariants") {
    SUBCASE("zero duration") {
        std::vector<Resource> rs{{"R1", 1.0, {{"Q0", 1}}}};
        std::vector<Task> ts{{"T1", 0, {"Q0", 0}, {}}};
        ProjectInstance instance(std::move(ts), std::move(rs));
        const auto violations = validate_instance(instance);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].rule == "duration-positive");
        CHECK(violations[0].subject == "T1");
    }
    SUBCASE("precedence cycle") {
        std::vector<Resource> rs{{"R1", 1.0, {{"Q0", 1}}}};
        std::vector<Task> ts{
            {"A", 1, {"Q0", 0}, {"B"}},
            {"B", 1, {"Q0", 0}, {"A"}},
        };
        ProjectInstance instance(std::move(ts), std::move(rs));
        CHECK(has_rule(validate_instance(instance), "precedence-acyclic"));
    }
    SUBCASE("negative salary and empty skills") {
        std::vector<Resource> rs{{"R1", -1.0, {}}};
        std::vector<Task> ts{{"T1", 1, {"Q0", 0}, {}}};
        ProjectInstance instance(std::move(ts), std::move(rs));
        const auto violations = validate_instance(instance);
        CHECK(has_rule(violations, "salary-non-negative"));
        CHECK(has_rule(violations, "skills-non-empty"));
        CHECK(has_rule(violations, "task-schedulable"));
    }
    SUBCASE("dangling and self predecessors") {
        std::vector<Resource> rs{{"R1", 1.0, {{"Q0", 1}}}};
        std::vector<Task> ts{
            {"T1", 1, {"Q0", 0}, {"ghost"}},
            {"T2", 1, {"Q0", 0}, {"T2"}},
        };
        ProjectInstance instance(std::move(ts), std::move(rs));
        const auto violations = validate_instance(instance);
        CHECK(has_rule(violations, "predecessor-exists"));
        CHECK(has_rule(violations, "self-predecessor"));
    }
    SUBCASE("duplicate ids") {
        std::vector<Resource> rs{{"R1", 1.0, {{"Q0", 1}}}, {"R1", 2.0, {{"Q0", 1}}}};
        std::vector<Task> ts{{"T1", 1, {"Q0", 0}, {}}, {"T1", 2, {"Q0", 0}, {}}};
        ProjectInstance instance(std::move(ts), std::move(rs));
        const auto violations = validate_instance(instance);
        CHECK(has_rule(violations, "task-id-unique"));
        CHECK(has_rule(violations, "resource-id-unique"));
    }
}

TEST_CASE("solution_space_size basics") {
    CHECK(solution_space_size(1, 1).to_string() == "1");
    CHECK(solution_space_size(3, 2).to_string() == "48");  // 3! * 2^3
    CHECK(solution_space_size(5, 3).to_string() == "29160");
    CHECK_THROWS_AS(solution_space_size(0, 1), std::invalid_argument);
}

TEST_CASE("solution_space_size equals brute-force enumeration") {
    for (int n = 1; n <= 5; ++n) {
        for (int m = 1; m <= 3; ++m) {
            const auto expected = brute_force_space_count(n, m);
            CHECK(solution_space_size(static_cast<std::size_t>(n), static_cast<std::size_t>(m))
                      .to_string() == std::to_string(expected));
        }
    }
}

TEST_CASE("solution_space_size magnitude for the 100x20 project") {
    const auto value = solution_space_size(100, 20);
    CHECK(value.digit_count() == 289);
    const auto mag = magnitude(value);
    CHECK(mag.exponent == 288);
    CHECK(mag.mantissa == doctest::Approx(1.18).epsilon(1e-9));
    // Independent route: schoolbook decimal arithmetic.
    CHECK(value.to_string() == decimal_space_size(100, 20));
}

TEST_CASE("magnitude rounding carries over") {
    BigUint v(999'600'000ULL);  // 9.996e8 -> 1.00e9
    const auto mag = magnitude(v);
    CHECK(mag.exponent == 9);
    CHECK(mag.mantissa == doctest::Approx(1.0));
}
