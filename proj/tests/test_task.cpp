#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fond/cost.hpp"
#include "fond/json_task.hpp"
#include "fond/task.hpp"
#include "fixtures.hpp"

using namespace fond;
using fixtures::ps;

TEST_CASE("extended naturals saturate instead of wrapping") {
    ExtNat huge{std::numeric_limits<std::uint64_t>::max() - 2};
    CHECK((huge + ExtNat{10}).is_finite());
    CHECK(huge + ExtNat{10} == huge + ExtNat{100});
    CHECK((ExtNat::infinity() + ExtNat{1}).is_infinite());
    CHECK(saturating_mul(huge, huge).is_finite());
    CHECK(saturating_mul(ExtNat{0}, ExtNat{7}) == ExtNat{0});
    CHECK(saturating_mul(ExtNat::infinity(), ExtNat{0}).is_infinite());
    CHECK(ExtNat{3} < ExtNat::infinity());
    CHECK(min(ExtNat{3}, ExtNat::infinity()) == ExtNat{3});
    CHECK(max(ExtNat{3}, ExtNat::infinity()).is_infinite());
    CHECK(ExtNat{4}.to_string() == "4");
    CHECK(ExtNat::infinity().to_string() == "inf");
}

TEST_CASE("variable table rejects malformed declarations") {
    VariableTable vars;
    vars.add_variable("p", {"false", "true"});
    CHECK_THROWS_AS(vars.add_variable("p", {"a", "b"}), std::invalid_argument);
    CHECK_THROWS_AS(vars.add_variable("q", {}), std::invalid_argument);
    CHECK_THROWS_AS(vars.add_variable("q", {"x", "x"}), std::invalid_argument);
    CHECK(vars.find_variable("p") == 0);
    CHECK(vars.find_variable("missing") == -1);
    CHECK(vars.find_value(0, "true") == 1);
    CHECK(vars.find_value(0, "maybe") == -1);
    CHECK(vars.is_binary());
    vars.add_variable("loc", {"a", "b", "c"});
    CHECK_FALSE(vars.is_binary());
}

TEST_CASE("satisfies and apply_effect") {
    State s({0, 1, 0});
    CHECK(satisfies(s, ps({{1, 1}})));
    CHECK(satisfies(s, PartialState{}));
    CHECK_FALSE(satisfies(s, ps({{0, 1}})));
    State t = apply_effect(s, ps({{0, 1}, {2, 1}}));
    CHECK(t == State({1, 1, 1}));
    CHECK(s == State({0, 1, 0}));  // unchanged
}

TEST_CASE("successor sets deduplicate while preserving effect order") {
    FondTask t = fixtures::make_switches();
    // Action a from the initial state: two distinct outcomes, first-listed first.
    auto succ = successors(t.init, t.actions[0]);
    REQUIRE(succ.size() == 2);
    CHECK(succ[0] == State({1, 1, 0}));
    CHECK(succ[1] == State({0, 1, 0}));

    // Two effects collapsing to the same state yield a singleton.
    NondetAction dup{"dup", PartialState{}, {ps({{0, 1}}), ps({{0, 1}})}};
    CHECK(successors(t.init, dup).size() == 1);

    // Applying against the precondition is a contract violation.
    CHECK_THROWS_AS(successors(State({1, 1, 0}), t.actions[0]), ContractError);
}

TEST_CASE("applicable actions come back in declaration order") {
    FondTask t = fixtures::make_switches();
    CHECK(applicable_actions(t, t.init) == std::vector<int>{0, 2});
    CHECK(applicable_actions(t, State({1, 1, 0})) == std::vector<int>{2});
}

TEST_CASE("determinization splits outcomes and keeps provenance") {
    FondTask t = fixtures::make_switches();
    DetTask det = determinize(t);
    REQUIRE(det.actions.size() == 7);
    CHECK(det.actions[0].name == "a#0");
    CHECK(det.actions[1].name == "a#1");
    CHECK(det.actions[4].name == "c");  // deterministic actions keep their name
    CHECK(det.actions[1].source_action == 0);
    CHECK(det.actions[1].outcome_index == 1);
    CHECK(det.actions[4].source_action == 2);
    CHECK(det.actions[1].effect == t.actions[0].effects[1]);
}

TEST_CASE("state space bound multiplies domains and saturates") {
    CHECK(state_space_bound(fixtures::make_switches()) == ExtNat{8});
    CHECK(state_space_bound(fixtures::make_chain(5)) == ExtNat{6});

    FondTask big;
    std::vector<std::string> domain;
    for (int i = 0; i < 100000; ++i)
        domain.push_back("v" + std::to_string(i));
    for (int v = 0; v < 5; ++v)
        big.vars.add_variable("x" + std::to_string(v), domain);
    big.init = State({0, 0, 0, 0, 0});
    ExtNat bound = state_space_bound(big);
    CHECK(bound.is_finite());  // saturates below the infinity sentinel
    CHECK(bound > ExtNat{1000000});
}

TEST_CASE("task validation catches structural errors") {
    FondTask t = fixtures::make_switches();
    t.actions.push_back({"a", PartialState{}, {PartialState{}}});
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);  // duplicate name

    FondTask u = fixtures::make_switches();
    u.actions[0].effects.clear();
    CHECK_THROWS_AS(u.validate(), std::invalid_argument);

    FondTask v = fixtures::make_switches();
    v.goal.assign(9, 0);
    CHECK_THROWS_AS(v.validate(), std::invalid_argument);

    FondTask w = fixtures::make_switches();
    w.init = State({0, 0});
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}

TEST_CASE("json round trip is the identity on every fixture") {
    for (const FondTask& t :
         {fixtures::make_switches(), fixtures::make_corridor(), fixtures::make_chain(7),
          fixtures::make_deadend(), fixtures::make_unsolvable_stray(),
          fixtures::make_unsolvable_gamble(), fixtures::make_selfloop()}) {
        CHECK(load_task_json(save_task_json(t)) == t);
    }
}

TEST_CASE("bundled task files match the in-code fixtures") {
    std::string dir = fixtures::tasks_dir();
    CHECK(load_task_file(dir + "/fig2.json") == fixtures::make_switches());
    CHECK(load_task_file(dir + "/fig1.json") == fixtures::make_corridor());
    CHECK(load_task_file(dir + "/chain-10.json") == fixtures::make_chain(10));
    CHECK(load_task_file(dir + "/deadend.json") == fixtures::make_deadend());
    CHECK(load_task_file(dir + "/unsolv-1.json") == fixtures::make_unsolvable_stray());
    CHECK(load_task_file(dir + "/unsolv-2.json") == fixtures::make_unsolvable_gamble());
}

TEST_CASE("task loading rejects malformed documents") {
    nlohmann::json good = save_task_json(fixtures::make_switches());

    nlohmann::json bad = good;
    bad["schema"] = 2;
    CHECK_THROWS_AS(load_task_json(bad), TaskFormatError);

    bad = good;
    bad.erase("schema");
    CHECK_THROWS_AS(load_task_json(bad), TaskFormatError);

    bad = good;
    bad["goal"]["nosuch"] = "true";
    CHECK_THROWS_AS(load_task_json(bad), TaskFormatError);

    bad = good;
    bad["init"].erase("p");
    CHECK_THROWS_AS(load_task_json(bad), TaskFormatError);

    bad = good;
    bad["actions"][0]["pre"]["p"] = "maybe";
    CHECK_THROWS_AS(load_task_json(bad), TaskFormatError);

    CHECK_THROWS_AS(load_task_file("/nonexistent/task.json"), TaskFormatError);
}

TEST_CASE("task hashes separate different tasks and survive round trips") {
    FondTask a = fixtures::make_switches();
    FondTask b = fixtures::make_corridor();
    CHECK(task_hash(a) != task_hash(b));
    CHECK(task_hash(a) == task_hash(load_task_json(save_task_json(a))));
}
