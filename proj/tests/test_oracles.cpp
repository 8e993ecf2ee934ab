#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fond/oracles.hpp"
#include "fixtures.hpp"

using namespace fond;
using fixtures::ps;

TEST_CASE("reachable state enumeration") {
    CHECK(reachable_states(fixtures::make_switches(), 10000).size() == 8);
    CHECK(reachable_states(fixtures::make_chain(5), 10000).size() == 6);
    // 13 locations, but s7 has no incoming transition.
    CHECK(reachable_states(fixtures::make_corridor(), 10000).size() == 12);
    CHECK(reachable_states(fixtures::make_deadend(), 10000).size() == 4);

    // BFS order starts at the initial state.
    auto order = reachable_states(fixtures::make_chain(3), 10000);
    CHECK(order.front() == State({0}));

    CHECK_THROWS_AS(reachable_states(fixtures::make_switches(), 3), OracleCapExceeded);
}

TEST_CASE("shortest determinized plan lengths") {
    for (int k : {1, 6, 11}) {
        DetTask det = determinize(fixtures::make_chain(k));
        CHECK(det_bfs_plan_length(det, det.init) == ExtNat{(std::uint64_t)k});
    }
    DetTask det = determinize(fixtures::make_switches());
    CHECK(det_bfs_plan_length(det, det.init) == ExtNat{1});  // lucky outcome of a
    CHECK(det_bfs_plan_length(det, State({1, 1, 0})) == ExtNat{0});

    DetTask stray = determinize(fixtures::make_unsolvable_stray());
    CHECK(det_bfs_plan_length(stray, State({1})).is_infinite());
}

TEST_CASE("solvability fixpoint oracle") {
    CHECK(solvability_oracle(fixtures::make_switches()));
    CHECK(solvability_oracle(fixtures::make_corridor()));
    CHECK(solvability_oracle(fixtures::make_chain(8)));
    CHECK(solvability_oracle(fixtures::make_deadend()));
    CHECK(solvability_oracle(fixtures::make_selfloop()));
    CHECK_FALSE(solvability_oracle(fixtures::make_unsolvable_stray()));
    CHECK_FALSE(solvability_oracle(fixtures::make_unsolvable_gamble()));

    FondTask goal_init = fixtures::make_chain(3);
    goal_init.init = State({3});
    CHECK(solvability_oracle(goal_init));
}

TEST_CASE("exhaustive policy enumeration on the switches task") {
    auto result = cv_star_oracle(fixtures::make_switches());
    CHECK(result.solvable);
    CHECK(result.cv_star == 3);
    CHECK(result.policy_count == 2);
    std::vector<std::uint64_t> cvs = result.policy_cvs;
    std::sort(cvs.begin(), cvs.end());
    CHECK(cvs == std::vector<std::uint64_t>{3, 5});
    for (const Policy& pi : result.policies)
        CHECK(verify_strong_cyclic(fixtures::make_switches(), pi));
}

TEST_CASE("cv* on chains, dead ends and trivial tasks") {
    for (int k : {1, 4, 7})
        CHECK(cv_star_oracle(fixtures::make_chain(k)).cv_star == (std::uint64_t)k);

    auto dead = cv_star_oracle(fixtures::make_deadend());
    CHECK(dead.solvable);
    CHECK(dead.cv_star == 2);  // walk then finish

    FondTask goal_init = fixtures::make_chain(3);
    goal_init.init = State({3});
    auto trivial = cv_star_oracle(goal_init);
    CHECK(trivial.solvable);
    CHECK(trivial.cv_star == 0);
    CHECK(trivial.policy_count == 1);  // the empty policy

    auto stray = cv_star_oracle(fixtures::make_unsolvable_stray());
    CHECK_FALSE(stray.solvable);
    CHECK(stray.policy_count == 0);

    auto loop = cv_star_oracle(fixtures::make_selfloop());
    CHECK(loop.solvable);
    CHECK(loop.cv_star == 1);
}

TEST_CASE("oracle caps are enforced and overridable") {
    OracleCaps tiny;
    tiny.max_states = 4;
    CHECK_THROWS_AS(cv_star_oracle(fixtures::make_switches(), tiny), OracleCapExceeded);
    CHECK_THROWS_AS(solvability_oracle(fixtures::make_switches(), tiny), OracleCapExceeded);

    OracleCaps starved;
    starved.max_policy_candidates = 1;
    CHECK_THROWS_AS(cv_star_oracle(fixtures::make_switches(), starved), OracleCapExceeded);

    setenv("FOND_ORACLE_STATE_CAP", "123", 1);
    setenv("FOND_ORACLE_POLICY_CAP", "456", 1);
    OracleCaps env = OracleCaps::from_environment();
    CHECK(env.max_states == 123);
    CHECK(env.max_policy_candidates == 456);
    unsetenv("FOND_ORACLE_STATE_CAP");
    unsetenv("FOND_ORACLE_POLICY_CAP");
}

TEST_CASE("oracles agree with each other on the fixture corpus") {
    for (const FondTask& t :
         {fixtures::make_switches(), fixtures::make_corridor(), fixtures::make_chain(6),
          fixtures::make_deadend(), fixtures::make_selfloop(),
          fixtures::make_unsolvable_stray(), fixtures::make_unsolvable_gamble()}) {
        CHECK(solvability_oracle(t) == cv_star_oracle(t).solvable);
    }
}
