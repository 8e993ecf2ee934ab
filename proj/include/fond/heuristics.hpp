#ifndef FOND_HEURISTICS_HPP
#define FOND_HEURISTICS_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fond/cost.hpp"
#include "fond/task.hpp"

namespace fond {

enum class HeuristicKind { Blind, HMax, HAdd, HFF };
enum class Aggregator { Min, Max };

inline std::string to_string(HeuristicKind k) {
    switch (k) {
    case HeuristicKind::Blind: return "blind";
    case HeuristicKind::HMax: return "hmax";
    case HeuristicKind::HAdd: return "hadd";
    case HeuristicKind::HFF: return "hff";
    }
    return "?";
}

inline std::optional<HeuristicKind> parse_heuristic(const std::string& name) {
    if (name == "blind") return HeuristicKind::Blind;
    if (name == "hmax") return HeuristicKind::HMax;
    if (name == "hadd") return HeuristicKind::HAdd;
    if (name == "hff") return HeuristicKind::HFF;
    return std::nullopt;
}

inline std::string to_string(Aggregator a) {
    return a == Aggregator::Min ? "min" : "max";
}

inline std::optional<Aggregator> parse_aggregator(const std::string& name) {
    if (name == "min") return Aggregator::Min;
    if (name == "max") return Aggregator::Max;
    return std::nullopt;
}

// Facts are (variable, value) pairs indexed densely; the delete relaxation
// treats them as monotone propositions.
class FactIndex {
public:
    explicit FactIndex(const VariableTable& vars) {
        offsets_.resize(vars.size());
        int next = 0;
        for (int v = 0; v < vars.size(); ++v) {
            offsets_[v] = next;
            next += vars.domain_size(v);
        }
        count_ = next;
    }

    int fact(int var, int val) const { return offsets_[var] + val; }
    int count() const { return count_; }

private:
    std::vector<int> offsets_;
    int count_ = 0;
};

// Per-state relaxed fact costs plus best supporters for FF extraction.
// cost(f) = 0 for facts true in the evaluated state; infinity iff f is not
// relaxed-reachable from it.
struct FactCostTable {
    std::vector<ExtNat> cost;
    std::vector<int> best_supporter;  // det action index, -1 for state facts
};

namespace detail {

// Additive (sum) or max fact-cost fixpoint over the determinized task.
inline FactCostTable relaxed_fact_costs(const DetTask& det, const FactIndex& facts,
                                        const State& s, bool additive) {
    FactCostTable table;
    table.cost.assign(facts.count(), ExtNat::infinity());
    table.best_supporter.assign(facts.count(), -1);
    for (int v = 0; v < det.init.num_variables(); ++v)
        table.cost[facts.fact(v, s.value(v))] = ExtNat{0};

    auto action_cost = [&](const DetAction& a) {
        ExtNat acc{0};
        for (auto [var, val] : a.precondition.assignments()) {
            ExtNat c = table.cost[facts.fact(var, val)];
            if (c.is_infinite())
                return ExtNat::infinity();
            acc = additive ? acc + c : max(acc, c);
        }
        return acc + ExtNat{1};
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < static_cast<int>(det.actions.size()); ++i) {
            ExtNat c = action_cost(det.actions[i]);
            if (c.is_infinite())
                continue;
            for (auto [var, val] : det.actions[i].effect.assignments()) {
                int f = facts.fact(var, val);
                if (c < table.cost[f]) {
                    table.cost[f] = c;
                    table.best_supporter[f] = i;
                    changed = true;
                }
            }
        }
    }
    return table;
}

}  // namespace detail

// Relaxed plan extracted from the additive cost table via best supporters.
// Ties between equal-cost supporters break toward the lowest determinized
// action index, so extraction is reproducible. Returns nullopt when the goal
// is not relaxed-reachable. The plan is ordered by ascending supporter cost,
// which makes it replayable in the delete relaxation.
inline std::optional<std::vector<int>> extract_relaxed_plan(const DetTask& det, const State& s) {
    FactIndex facts(det.vars);
    FactCostTable table = detail::relaxed_fact_costs(det, facts, s, /*additive=*/true);

    std::vector<int> open;
    for (auto [var, val] : det.goal.assignments()) {
        int f = facts.fact(var, val);
        if (table.cost[f].is_infinite())
            return std::nullopt;
        open.push_back(f);
    }
    std::vector<bool> fact_done(facts.count(), false);
    std::vector<bool> action_used(det.actions.size(), false);
    std::vector<int> plan;
    while (!open.empty()) {
        int f = open.back();
        open.pop_back();
        if (fact_done[f])
            continue;
        fact_done[f] = true;
        if (table.cost[f] == ExtNat{0})
            continue;
        int supporter = table.best_supporter[f];
        if (supporter < 0 || action_used[supporter])
            continue;
        action_used[supporter] = true;
        plan.push_back(supporter);
        for (auto [var, val] : det.actions[supporter].precondition.assignments())
            open.push_back(facts.fact(var, val));
    }
    std::sort(plan.begin(), plan.end(), [&](int a, int b) {
        ExtNat cost_a = ExtNat{0}, cost_b = ExtNat{0};
        for (auto [var, val] : det.actions[a].precondition.assignments())
            cost_a = cost_a + table.cost[facts.fact(var, val)];
        for (auto [var, val] : det.actions[b].precondition.assignments())
            cost_b = cost_b + table.cost[facts.fact(var, val)];
        if (cost_a != cost_b)
            return cost_a < cost_b;
        return a < b;
    });
    return plan;
}

// Heuristic evaluation on the all-outcomes determinization. Goal states are
// 0 under every kind; infinity iff the goal is not relaxed-reachable.
inline ExtNat evaluate(HeuristicKind kind, const DetTask& det, const State& s) {
    if (satisfies(s, det.goal))
        return ExtNat{0};
    if (kind == HeuristicKind::Blind)
        return ExtNat{0};

    FactIndex facts(det.vars);
    if (kind == HeuristicKind::HFF) {
        auto plan = extract_relaxed_plan(det, s);
        if (!plan)
            return ExtNat::infinity();
        return ExtNat{plan->size()};
    }
    bool additive = kind == HeuristicKind::HAdd;
    FactCostTable table = detail::relaxed_fact_costs(det, facts, s, additive);
    ExtNat result{0};
    for (auto [var, val] : det.goal.assignments()) {
        ExtNat c = table.cost[facts.fact(var, val)];
        if (c.is_infinite())
            return ExtNat::infinity();
        result = additive ? result + c : max(result, c);
    }
    return result;
}

// f(s) = g(s) + h(s), saturating.
inline ExtNat f_value(ExtNat g, ExtNat h) { return g + h; }

// Memoizing evaluator; one instance per search run. Heuristic values depend
// only on the state, never on g.
class HeuristicEvaluator {
public:
    HeuristicEvaluator(HeuristicKind kind, const DetTask& det) : kind_(kind), det_(&det) {}

    ExtNat operator()(const State& s) {
        auto it = memo_.find(s);
        if (it != memo_.end())
            return it->second;
        ExtNat value = evaluate(kind_, *det_, s);
        memo_.emplace(s, value);
        return value;
    }

private:
    HeuristicKind kind_;
    const DetTask* det_;
    std::unordered_map<State, ExtNat, StateHash> memo_;
};

// F_xi over a successor set: aggregate of f-values at uniform depth g_succ.
inline ExtNat aggregate(Aggregator agg, HeuristicEvaluator& h, const std::vector<State>& succ,
                        ExtNat g_succ) {
    if (succ.empty())
        throw ContractError("aggregate over empty successor set");
    ExtNat result = agg == Aggregator::Min ? ExtNat::infinity() : ExtNat{0};
    for (const State& s : succ) {
        ExtNat f = f_value(g_succ, h(s));
        result = agg == Aggregator::Min ? min(result, f) : max(result, f);
    }
    return result;
}

}  // namespace fond

#endif
