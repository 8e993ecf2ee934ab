#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fond/heuristics.hpp"
#include "fond/oracles.hpp"
#include "fixtures.hpp"

using namespace fond;

TEST_CASE("names round trip through the parsers") {
    for (auto kind : {HeuristicKind::Blind, HeuristicKind::HMax, HeuristicKind::HAdd,
                      HeuristicKind::HFF})
        CHECK(parse_heuristic(to_string(kind)) == kind);
    for (auto agg : {Aggregator::Min, Aggregator::Max})
        CHECK(parse_aggregator(to_string(agg)) == agg);
    CHECK_FALSE(parse_heuristic("hmax2").has_value());
    CHECK_FALSE(parse_aggregator("avg").has_value());
}

TEST_CASE("chain estimates: blind is zero, the relaxed family is exact") {
    for (int k : {1, 5, 12}) {
        FondTask t = fixtures::make_chain(k);
        DetTask det = determinize(t);
        CHECK(evaluate(HeuristicKind::Blind, det, t.init) == ExtNat{0});
        CHECK(evaluate(HeuristicKind::HMax, det, t.init) == ExtNat{(std::uint64_t)k});
        CHECK(evaluate(HeuristicKind::HAdd, det, t.init) == ExtNat{(std::uint64_t)k});
        CHECK(evaluate(HeuristicKind::HFF, det, t.init) == ExtNat{(std::uint64_t)k});
    }
}

TEST_CASE("goal states evaluate to zero under every heuristic") {
    FondTask t = fixtures::make_switches();
    DetTask det = determinize(t);
    State goal({1, 1, 0});
    for (auto kind : {HeuristicKind::Blind, HeuristicKind::HMax, HeuristicKind::HAdd,
                      HeuristicKind::HFF})
        CHECK(evaluate(kind, det, goal) == ExtNat{0});
}

TEST_CASE("relaxed-unreachable goals evaluate to infinity") {
    FondTask t = fixtures::make_unsolvable_stray();
    DetTask det = determinize(t);
    State dead({1});
    for (auto kind : {HeuristicKind::HMax, HeuristicKind::HAdd, HeuristicKind::HFF})
        CHECK(evaluate(kind, det, dead).is_infinite());
    CHECK(evaluate(HeuristicKind::Blind, det, dead) == ExtNat{0});
}

TEST_CASE("dominance and admissibility on sampled reachable states") {
    std::mt19937_64 rng(7);
    int checked = 0;
    for (const FondTask& t :
         {fixtures::make_switches(), fixtures::make_corridor(), fixtures::make_chain(9),
          fixtures::make_deadend(), fixtures::make_selfloop()}) {
        DetTask det = determinize(t);
        for (const State& s : reachable_states(t, 10000)) {
            ExtNat blind = evaluate(HeuristicKind::Blind, det, s);
            ExtNat hmax = evaluate(HeuristicKind::HMax, det, s);
            ExtNat hadd = evaluate(HeuristicKind::HAdd, det, s);
            ExtNat hff = evaluate(HeuristicKind::HFF, det, s);
            CHECK(blind <= hmax);
            CHECK(hmax <= hadd);
            CHECK(hmax <= hff);
            CHECK(hmax <= det_bfs_plan_length(det, s));
            ++checked;
        }
    }
    CHECK(checked > 20);
    (void)rng;
}

TEST_CASE("the relaxed plan replays in the delete relaxation") {
    for (const FondTask& t :
         {fixtures::make_switches(), fixtures::make_corridor(), fixtures::make_chain(9),
          fixtures::make_deadend()}) {
        DetTask det = determinize(t);
        for (const State& s : reachable_states(t, 10000)) {
            auto plan = extract_relaxed_plan(det, s);
            if (!plan)
                continue;
            // Monotone replay: facts only accumulate.
            FactIndex facts(det.vars);
            std::vector<bool> holds(facts.count(), false);
            for (int v = 0; v < det.init.num_variables(); ++v)
                holds[facts.fact(v, s.value(v))] = true;
            for (int a : *plan) {
                for (auto [var, val] : det.actions[a].precondition.assignments())
                    REQUIRE(holds[facts.fact(var, val)]);
                for (auto [var, val] : det.actions[a].effect.assignments())
                    holds[facts.fact(var, val)] = true;
            }
            for (auto [var, val] : det.goal.assignments())
                CHECK(holds[facts.fact(var, val)]);
        }
    }
}

TEST_CASE("relaxed plan extraction is deterministic") {
    FondTask t = fixtures::make_switches();
    DetTask det = determinize(t);
    auto p1 = extract_relaxed_plan(det, t.init);
    auto p2 = extract_relaxed_plan(det, t.init);
    REQUIRE(p1.has_value());
    CHECK(*p1 == *p2);
}

TEST_CASE("memoized evaluation matches direct evaluation") {
    FondTask t = fixtures::make_corridor();
    DetTask det = determinize(t);
    HeuristicEvaluator h(HeuristicKind::HAdd, det);
    for (const State& s : reachable_states(t, 10000)) {
        CHECK(h(s) == evaluate(HeuristicKind::HAdd, det, s));
        CHECK(h(s) == evaluate(HeuristicKind::HAdd, det, s));  // cached path
    }
}

TEST_CASE("aggregation over successor sets") {
    FondTask t = fixtures::make_switches();
    DetTask det = determinize(t);
    HeuristicEvaluator h(HeuristicKind::HMax, det);
    // Action a at the initial state: one goal successor (f = g), one not.
    auto succ = successors(t.init, t.actions[0]);
    ExtNat g{3};
    ExtNat fmin = aggregate(Aggregator::Min, h, succ, g);
    ExtNat fmax = aggregate(Aggregator::Max, h, succ, g);
    CHECK(fmin == ExtNat{3});
    CHECK(fmax > fmin);
    CHECK_THROWS_AS(aggregate(Aggregator::Min, h, {}, g), ContractError);
}

TEST_CASE("f saturates at infinity") {
    CHECK(f_value(ExtNat{2}, ExtNat{3}) == ExtNat{5});
    CHECK(f_value(ExtNat{2}, ExtNat::infinity()).is_infinite());
}
