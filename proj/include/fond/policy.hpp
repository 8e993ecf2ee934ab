#ifndef FOND_POLICY_HPP
#define FOND_POLICY_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fond/json_task.hpp"
#include "fond/task.hpp"

namespace fond {

// Partial map from non-goal states to applicable actions (by index).
class Policy {
public:
    Policy() = default;

    void set(const State& s, int action) { mapping_[s] = action; }
    bool contains(const State& s) const { return mapping_.count(s) > 0; }
    int action(const State& s) const { return mapping_.at(s); }
    std::size_t size() const { return mapping_.size(); }
    bool empty() const { return mapping_.empty(); }

    const std::unordered_map<State, int, StateHash>& mapping() const { return mapping_; }

    bool operator==(const Policy& other) const { return mapping_ == other.mapping_; }

private:
    std::unordered_map<State, int, StateHash> mapping_;
};

inline std::size_t policy_size(const Policy& pi) { return pi.size(); }

// Checks the Policy type invariants against a task: mapped actions must be
// applicable, goal states never mapped, action indices in range.
inline bool policy_well_formed(const FondTask& task, const Policy& pi) {
    for (const auto& [s, a] : pi.mapping()) {
        if (a < 0 || a >= static_cast<int>(task.actions.size()))
            return false;
        if (is_goal(task, s))
            return false;
        if (!satisfies(s, task.actions[a].precondition))
            return false;
    }
    return true;
}

// States reachable from s0 by following the policy (including s0 itself and
// frontier states the policy does not map).
inline std::vector<State> policy_reachable(const FondTask& task, const Policy& pi) {
    std::vector<State> order;
    StateSet seen;
    std::deque<State> queue{task.init};
    seen.insert(task.init);
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        order.push_back(s);
        if (!pi.contains(s))
            continue;
        for (const State& next : successors(s, task.actions[pi.action(s)])) {
            if (seen.insert(next).second)
                queue.push_back(next);
        }
    }
    return order;
}

// Closed: every state reachable from s0 under pi is a goal state or mapped.
inline bool verify_closed(const FondTask& task, const Policy& pi) {
    if (!policy_well_formed(task, pi))
        return false;
    for (const State& s : policy_reachable(task, pi))
        if (!is_goal(task, s) && !pi.contains(s))
            return false;
    return true;
}

// Strong cyclic: closed, and from every reachable state some goal state
// remains reachable inside the policy graph. Forward sweep from s0, then a
// backward sweep from the goals restricted to the forward set.
inline bool verify_strong_cyclic(const FondTask& task, const Policy& pi) {
    if (!verify_closed(task, pi))
        return false;
    std::vector<State> forward = policy_reachable(task, pi);
    StateSet forward_set(forward.begin(), forward.end());

    // Reverse edges within the forward set.
    std::unordered_map<State, std::vector<State>, StateHash> incoming;
    for (const State& s : forward) {
        if (!pi.contains(s))
            continue;
        for (const State& next : successors(s, task.actions[pi.action(s)]))
            incoming[next].push_back(s);
    }
    StateSet can_reach_goal;
    std::deque<State> queue;
    for (const State& s : forward) {
        if (is_goal(task, s)) {
            can_reach_goal.insert(s);
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        auto it = incoming.find(s);
        if (it == incoming.end())
            continue;
        for (const State& pred : it->second)
            if (can_reach_goal.insert(pred).second)
                queue.push_back(pred);
    }
    return can_reach_goal.size() == forward_set.size();
}

// Primary target set A and secondary target set B, with A subset of B.
struct TargetSets {
    StateSet primary;    // A
    StateSet secondary;  // B; must contain A
};

namespace detail {

// All endpoint states of non-empty pi-trajectories: successors of mapped
// states, closed under policy edges.
inline StateSet trajectory_endpoints(const FondTask& task, const Policy& pi) {
    StateSet endpoints;
    std::deque<State> queue;
    for (const auto& [s, a] : pi.mapping()) {
        for (const State& next : successors(s, task.actions[a])) {
            if (endpoints.insert(next).second)
                queue.push_back(next);
        }
    }
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        if (!pi.contains(s))
            continue;
        for (const State& next : successors(s, task.actions[pi.action(s)]))
            if (endpoints.insert(next).second)
                queue.push_back(next);
    }
    return endpoints;
}

// Is some state of T reachable from s via a (possibly empty) pi-trajectory?
inline bool set_reachable_from(const FondTask& task, const Policy& pi, const State& from,
                               const StateSet& targets) {
    StateSet seen{from};
    std::deque<State> queue{from};
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        if (targets.count(s))
            return true;
        if (!pi.contains(s))
            continue;
        for (const State& next : successors(s, task.actions[pi.action(s)]))
            if (seen.insert(next).second)
                queue.push_back(next);
    }
    return false;
}

}  // namespace detail

// Partial strong cyclic policy from s for targets (A, B):
//   reachable: s in A, or some pi-trajectory from s hits A without passing
//   through a state of B \ A;
//   sinking: every maximal pi-trajectory passes through B or ends where B is
//   still reachable.
inline bool verify_partial_strong_cyclic(const FondTask& task, const Policy& pi, const State& from,
                                         const TargetSets& targets) {
    for (const State& s : targets.primary)
        if (!targets.secondary.count(s))
            throw ContractError("target sets violate A subset of B");

    // Reachability of A avoiding B \ A.
    bool reachable = false;
    if (targets.primary.count(from)) {
        reachable = true;
    } else if (!targets.secondary.count(from)) {
        StateSet seen{from};
        std::deque<State> queue{from};
        while (!queue.empty() && !reachable) {
            State s = queue.front();
            queue.pop_front();
            if (!pi.contains(s))
                continue;
            for (const State& next : successors(s, task.actions[pi.action(s)])) {
                if (targets.primary.count(next)) {
                    reachable = true;
                    break;
                }
                if (targets.secondary.count(next))
                    continue;  // blocked: state of B \ A
                if (seen.insert(next).second)
                    queue.push_back(next);
            }
        }
    }
    if (!reachable)
        return false;

    // Sinking to B: from every trajectory endpoint, B stays reachable.
    for (const State& endpoint : detail::trajectory_endpoints(task, pi))
        if (!detail::set_reachable_from(task, pi, endpoint, targets.secondary))
            return false;
    return true;
}

// Execute the policy from s0 with uniformly random outcomes.
struct SimulationResult {
    enum class Stop { Goal, Unmapped, StepLimit } stop;
    std::uint64_t steps = 0;
    State final_state;

    bool reached_goal() const { return stop == Stop::Goal; }
};

inline SimulationResult simulate_fair(const FondTask& task, const Policy& pi, std::uint64_t seed,
                                      std::uint64_t max_steps) {
    std::mt19937_64 rng(seed);
    State s = task.init;
    SimulationResult result{SimulationResult::Stop::StepLimit, 0, s};
    for (std::uint64_t step = 0; step < max_steps; ++step) {
        if (is_goal(task, s)) {
            result.stop = SimulationResult::Stop::Goal;
            result.steps = step;
            result.final_state = s;
            return result;
        }
        if (!pi.contains(s)) {
            result.stop = SimulationResult::Stop::Unmapped;
            result.steps = step;
            result.final_state = s;
            return result;
        }
        const NondetAction& a = task.actions[pi.action(s)];
        std::vector<State> succ = successors(s, a);
        std::uniform_int_distribution<std::size_t> pick(0, succ.size() - 1);
        s = succ[pick(rng)];
    }
    if (is_goal(task, s))
        result.stop = SimulationResult::Stop::Goal;
    result.steps = max_steps;
    result.final_state = s;
    return result;
}

// cv(pi): length of the longest pi-trajectory from s0 whose prefix visits no
// state twice; only the final state may repeat an earlier one. Exhaustive
// DFS with an on-path visited set.
inline std::uint64_t critical_value(const FondTask& task, const Policy& pi) {
    std::uint64_t best = 0;
    StateSet on_path;
    // Iterative DFS; frame holds the state and its pending successor list.
    struct Frame {
        State s;
        std::vector<State> succ;
        std::size_t next = 0;
    };
    std::vector<Frame> stack;
    auto expand = [&](const State& s) {
        Frame f{s, {}, 0};
        if (pi.contains(s))
            f.succ = successors(s, task.actions[pi.action(s)]);
        return f;
    };
    stack.push_back(expand(task.init));
    on_path.insert(task.init);
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next >= top.succ.size()) {
            on_path.erase(top.s);
            stack.pop_back();
            continue;
        }
        const State next = top.succ[top.next++];
        std::uint64_t length = stack.size();  // edges on path including this one
        best = std::max(best, length);
        if (!on_path.count(next)) {
            on_path.insert(next);
            stack.push_back(expand(next));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Policy text format
//
//   # task-hash: <16 hex digits>
//   # size: <n>
//   state: {fact, fact} action: name            (binary tasks: true facts)
//   state: {var=value, var=value} action: name  (multi-valued tasks)
//
// Records are sorted by state value vector, facts by variable index, so the
// format round-trips bit-exactly.
// ---------------------------------------------------------------------------

class PolicyFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string format_state_facts(const FondTask& task, const State& s) {
    bool binary = task.vars.is_binary();
    std::string out = "{";
    bool first = true;
    for (int v = 0; v < task.vars.size(); ++v) {
        if (binary && s.value(v) == 0)
            continue;
        if (!first)
            out += ", ";
        first = false;
        if (binary)
            out += task.vars.variable(v).name;
        else
            out += task.vars.variable(v).name + "=" + task.vars.variable(v).values[s.value(v)];
    }
    out += "}";
    return out;
}

inline std::string save_policy_text(const FondTask& task, const Policy& pi) {
    char hash_hex[17];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(task_hash(task)));
    std::string out;
    out += std::string("# task-hash: ") + hash_hex + "\n";
    out += "# size: " + std::to_string(pi.size()) + "\n";
    std::vector<const State*> states;
    for (const auto& [s, a] : pi.mapping())
        states.push_back(&s);
    std::sort(states.begin(), states.end(),
              [](const State* a, const State* b) { return *a < *b; });
    for (const State* s : states)
        out += "state: " + format_state_facts(task, *s) + " action: " +
               task.actions[pi.action(*s)].name + "\n";
    return out;
}

inline Policy load_policy_text(const FondTask& task, const std::string& text,
                               bool check_hash = true) {
    std::istringstream in(text);
    std::string line;
    Policy pi;
    bool binary = task.vars.is_binary();
    bool saw_hash = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line.rfind("# task-hash:", 0) == 0) {
            saw_hash = true;
            if (check_hash) {
                char expected[17];
                std::snprintf(expected, sizeof expected, "%016llx",
                              static_cast<unsigned long long>(task_hash(task)));
                std::string given = line.substr(12);
                given.erase(0, given.find_first_not_of(' '));
                if (given != expected)
                    throw PolicyFormatError("policy task-hash does not match the task");
            }
            continue;
        }
        if (line[0] == '#')
            continue;
        auto state_pos = line.find("state:");
        auto open = line.find('{');
        auto close = line.find('}');
        auto action_pos = line.find("action:", close == std::string::npos ? 0 : close);
        if (state_pos != 0 || open == std::string::npos || close == std::string::npos ||
            action_pos == std::string::npos)
            throw PolicyFormatError("malformed policy record: " + line);

        std::vector<std::int32_t> values(task.vars.size(), binary ? 0 : -1);
        std::string facts = line.substr(open + 1, close - open - 1);
        std::istringstream fact_stream(facts);
        std::string fact;
        while (std::getline(fact_stream, fact, ',')) {
            fact.erase(0, fact.find_first_not_of(' '));
            fact.erase(fact.find_last_not_of(' ') + 1);
            if (fact.empty())
                continue;
            auto eq = fact.find('=');
            std::string var_name = eq == std::string::npos ? fact : fact.substr(0, eq);
            int var = task.vars.find_variable(var_name);
            if (var < 0)
                throw PolicyFormatError("unknown variable in policy file: " + var_name);
            int val;
            if (eq == std::string::npos) {
                if (!binary)
                    throw PolicyFormatError("bare fact in multi-valued policy file: " + fact);
                val = 1;
            } else {
                val = task.vars.find_value(var, fact.substr(eq + 1));
                if (val < 0)
                    throw PolicyFormatError("unknown value in policy file: " + fact);
            }
            values[var] = val;
        }
        for (int v = 0; v < task.vars.size(); ++v)
            if (values[v] < 0)
                throw PolicyFormatError("policy record leaves a variable unassigned: " + line);

        std::string action_name = line.substr(action_pos + 7);
        action_name.erase(0, action_name.find_first_not_of(' '));
        action_name.erase(action_name.find_last_not_of(" \r") + 1);
        int action = -1;
        for (int i = 0; i < static_cast<int>(task.actions.size()); ++i)
            if (task.actions[i].name == action_name)
                action = i;
        if (action < 0)
            throw PolicyFormatError("unknown action in policy file: " + action_name);
        pi.set(State(std::move(values)), action);
    }
    if (check_hash && !saw_hash)
        throw PolicyFormatError("policy file missing task-hash header");
    if (!policy_well_formed(task, pi))
        throw PolicyFormatError("policy file violates policy invariants");
    return pi;
}

}  // namespace fond

#endif
