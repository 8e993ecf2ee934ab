#ifndef FOND_TASK_HPP
#define FOND_TASK_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "fond/cost.hpp"

namespace fond {

// Thrown when a caller violates an operation contract (e.g. applying an
// action whose precondition does not hold).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Finite-domain variables. Variable and value indices are stable for the
// lifetime of the table.
class VariableTable {
public:
    struct Variable {
        std::string name;
        std::vector<std::string> values;
        bool operator==(const Variable&) const = default;
    };

    VariableTable() = default;

    int add_variable(std::string name, std::vector<std::string> values) {
        if (values.empty())
            throw std::invalid_argument("variable '" + name + "' has empty domain");
        for (const auto& v : variables_)
            if (v.name == name)
                throw std::invalid_argument("duplicate variable name '" + name + "'");
        std::unordered_set<std::string> seen;
        for (const auto& val : values)
            if (!seen.insert(val).second)
                throw std::invalid_argument("duplicate value '" + val + "' in variable '" + name + "'");
        variables_.push_back({std::move(name), std::move(values)});
        return static_cast<int>(variables_.size()) - 1;
    }

    int size() const { return static_cast<int>(variables_.size()); }
    const Variable& variable(int i) const { return variables_.at(i); }
    int domain_size(int i) const { return static_cast<int>(variables_.at(i).values.size()); }

    int find_variable(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (variables_[i].name == name)
                return i;
        return -1;
    }

    int find_value(int var, const std::string& value_name) const {
        const auto& vals = variables_.at(var).values;
        auto it = std::find(vals.begin(), vals.end(), value_name);
        return it == vals.end() ? -1 : static_cast<int>(it - vals.begin());
    }

    // True when every variable has domain {false, true}, in that order.
    // Grounded STRIPS tasks have this shape; hand-built fixtures need not.
    bool is_binary() const {
        for (const auto& v : variables_)
            if (v.values.size() != 2 || v.values[0] != "false" || v.values[1] != "true")
                return false;
        return true;
    }

    bool operator==(const VariableTable&) const = default;

private:
    std::vector<Variable> variables_;
};

// Partial assignment: variable index -> value index; absent means undefined.
class PartialState {
public:
    PartialState() = default;

    void assign(int var, int value) { assignments_[var] = value; }

    bool defines(int var) const { return assignments_.count(var) > 0; }
    int value(int var) const { return assignments_.at(var); }
    std::size_t size() const { return assignments_.size(); }
    bool empty() const { return assignments_.empty(); }

    // Ordered by variable index; deterministic iteration.
    const std::map<int, int>& assignments() const { return assignments_; }

    bool operator==(const PartialState&) const = default;

private:
    std::map<int, int> assignments_;
};

// Total assignment, one value index per variable. Equality is value
// equality; states are hash keys throughout.
class State {
public:
    State() = default;
    explicit State(std::vector<std::int32_t> values) : values_(std::move(values)) {}

    int value(int var) const { return values_.at(var); }
    void set(int var, int value) { values_.at(var) = value; }
    int num_variables() const { return static_cast<int>(values_.size()); }
    const std::vector<std::int32_t>& values() const { return values_; }

    bool operator==(const State&) const = default;
    bool operator<(const State& other) const { return values_ < other.values_; }

private:
    std::vector<std::int32_t> values_;
};

struct StateHash {
    std::size_t operator()(const State& s) const {
        // FNV-1a over the dense value array.
        std::uint64_t h = 1469598103934665603ull;
        for (std::int32_t v : s.values()) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v));
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

using StateSet = std::unordered_set<State, StateHash>;

struct NondetAction {
    std::string name;
    PartialState precondition;
    std::vector<PartialState> effects;  // non-empty
    int cost = 1;                       // fixed; all benchmark actions are unit cost

    bool deterministic() const { return effects.size() == 1; }
    bool operator==(const NondetAction&) const = default;
};

struct FondTask {
    VariableTable vars;
    State init;
    PartialState goal;
    std::vector<NondetAction> actions;

    bool operator==(const FondTask&) const = default;

    void validate() const {
        auto check_partial = [&](const PartialState& p, const std::string& what) {
            for (auto [var, val] : p.assignments()) {
                if (var < 0 || var >= vars.size())
                    throw std::invalid_argument(what + " refers to undeclared variable index");
                if (val < 0 || val >= vars.domain_size(var))
                    throw std::invalid_argument(what + " assigns out-of-domain value");
            }
        };
        if (init.num_variables() != vars.size())
            throw std::invalid_argument("initial state is not total");
        for (int v = 0; v < vars.size(); ++v)
            if (init.value(v) < 0 || init.value(v) >= vars.domain_size(v))
                throw std::invalid_argument("initial state assigns out-of-domain value");
        check_partial(goal, "goal");
        std::unordered_set<std::string> names;
        for (const auto& a : actions) {
            if (!names.insert(a.name).second)
                throw std::invalid_argument("duplicate action name '" + a.name + "'");
            if (a.effects.empty())
                throw std::invalid_argument("action '" + a.name + "' has no effects");
            check_partial(a.precondition, "precondition of '" + a.name + "'");
            for (const auto& eff : a.effects)
                check_partial(eff, "effect of '" + a.name + "'");
        }
    }
};

// All-outcomes determinization: one deterministic action per outcome, with
// provenance back to (source action, outcome index).
struct DetAction {
    std::string name;
    PartialState precondition;
    PartialState effect;
    int source_action = -1;
    int outcome_index = -1;
};

struct DetTask {
    VariableTable vars;
    State init;
    PartialState goal;
    std::vector<DetAction> actions;
};

inline bool satisfies(const State& s, const PartialState& p) {
    for (auto [var, val] : p.assignments())
        if (s.value(var) != val)
            return false;
    return true;
}

inline State apply_effect(const State& s, const PartialState& eff) {
    State result = s;
    for (auto [var, val] : eff.assignments())
        result.set(var, val);
    return result;
}

// SUCCS(s, a): set semantics, first-occurrence order of the effect list.
inline std::vector<State> successors(const State& s, const NondetAction& a) {
    if (!satisfies(s, a.precondition))
        throw ContractError("action '" + a.name + "' applied in a state violating its precondition");
    std::vector<State> result;
    StateSet seen;
    for (const auto& eff : a.effects) {
        State next = apply_effect(s, eff);
        if (seen.insert(next).second)
            result.push_back(std::move(next));
    }
    return result;
}

// Indices of all actions applicable in s, in declaration order.
inline std::vector<int> applicable_actions(const FondTask& task, const State& s) {
    std::vector<int> result;
    for (int i = 0; i < static_cast<int>(task.actions.size()); ++i)
        if (satisfies(s, task.actions[i].precondition))
            result.push_back(i);
    return result;
}

inline DetTask determinize(const FondTask& task) {
    DetTask det;
    det.vars = task.vars;
    det.init = task.init;
    det.goal = task.goal;
    for (int i = 0; i < static_cast<int>(task.actions.size()); ++i) {
        const NondetAction& a = task.actions[i];
        for (int k = 0; k < static_cast<int>(a.effects.size()); ++k) {
            DetAction d;
            d.name = a.deterministic() ? a.name : a.name + "#" + std::to_string(k);
            d.precondition = a.precondition;
            d.effect = a.effects[k];
            d.source_action = i;
            d.outcome_index = k;
            det.actions.push_back(std::move(d));
        }
    }
    return det;
}

// Product of domain sizes, saturating. The search's while-guard treats the
// saturated sentinel as "always".
inline ExtNat state_space_bound(const FondTask& task) {
    ExtNat product{1};
    for (int v = 0; v < task.vars.size(); ++v)
        product = saturating_mul(product, ExtNat{static_cast<std::uint64_t>(task.vars.domain_size(v))});
    return product;
}

inline bool is_goal(const FondTask& task, const State& s) {
    return satisfies(s, task.goal);
}

}  // namespace fond

#endif
