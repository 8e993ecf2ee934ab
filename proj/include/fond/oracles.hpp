#ifndef FOND_ORACLES_HPP
#define FOND_ORACLES_HPP

#include <cstdint>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fond/cost.hpp"
#include "fond/policy.hpp"
#include "fond/task.hpp"

namespace fond {

// The oracles are deliberately naive: they gate correctness of the search
// module, not performance. Caps make overflow an explicit error rather than
// a wrong answer.
struct OracleCaps {
    std::uint64_t max_states = 10000;
    std::uint64_t max_policy_candidates = 1000000;

    // Environment overrides, used by the CLI.
    static OracleCaps from_environment() {
        OracleCaps caps;
        if (const char* s = std::getenv("FOND_ORACLE_STATE_CAP"))
            caps.max_states = std::strtoull(s, nullptr, 10);
        if (const char* s = std::getenv("FOND_ORACLE_POLICY_CAP"))
            caps.max_policy_candidates = std::strtoull(s, nullptr, 10);
        return caps;
    }
};

class OracleCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// All states reachable from s0 under any applicable action, BFS order.
inline std::vector<State> reachable_states(const FondTask& task, std::uint64_t cap) {
    std::vector<State> order;
    StateSet seen{task.init};
    std::deque<State> queue{task.init};
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        order.push_back(s);
        if (order.size() > cap)
            throw OracleCapExceeded("reachable state space exceeds oracle cap of " +
                                    std::to_string(cap) + " states");
        for (int a : applicable_actions(task, s))
            for (const State& next : successors(s, task.actions[a]))
                if (seen.insert(next).second)
                    queue.push_back(next);
    }
    return order;
}

// Shortest s-plan length in the determinization (breadth-first), infinity if
// none. Independent oracle for heuristic admissibility checks.
inline ExtNat det_bfs_plan_length(const DetTask& det, const State& from,
                                  std::uint64_t cap = 1000000) {
    if (satisfies(from, det.goal))
        return ExtNat{0};
    std::unordered_map<State, std::uint64_t, StateHash> depth{{from, 0}};
    std::deque<State> queue{from};
    while (!queue.empty()) {
        State s = queue.front();
        queue.pop_front();
        for (const DetAction& a : det.actions) {
            if (!satisfies(s, a.precondition))
                continue;
            State next = apply_effect(s, a.effect);
            if (depth.count(next))
                continue;
            std::uint64_t d = depth[s] + 1;
            if (satisfies(next, det.goal))
                return ExtNat{d};
            depth[next] = d;
            if (depth.size() > cap)
                throw OracleCapExceeded("determinized BFS exceeds state cap");
            queue.push_back(next);
        }
    }
    return ExtNat::infinity();
}

// Strong-cyclic solvability by fixpoint elimination: repeatedly delete
// state-action pairs whose outcomes leave the candidate set or cannot reach
// the goal within it.
inline bool solvability_oracle(const FondTask& task,
                               const OracleCaps& caps = OracleCaps::from_environment()) {
    std::vector<State> all = reachable_states(task, caps.max_states);
    if (is_goal(task, task.init))
        return true;

    StateSet candidates(all.begin(), all.end());
    // pairs[s] = applicable actions still considered viable at s.
    std::unordered_map<State, std::vector<int>, StateHash> pairs;
    for (const State& s : all)
        if (!is_goal(task, s))
            pairs[s] = applicable_actions(task, s);

    bool changed = true;
    while (changed) {
        changed = false;
        // Drop pairs with an outcome outside the candidate set.
        for (auto& [s, acts] : pairs) {
            std::vector<int> kept;
            for (int a : acts) {
                bool inside = true;
                for (const State& next : successors(s, task.actions[a]))
                    if (!candidates.count(next)) {
                        inside = false;
                        break;
                    }
                if (inside)
                    kept.push_back(a);
            }
            if (kept.size() != acts.size()) {
                acts = std::move(kept);
                changed = true;
            }
        }
        // Backward goal reachability via surviving pairs.
        StateSet reach;
        for (const State& s : all)
            if (candidates.count(s) && is_goal(task, s))
                reach.insert(s);
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& [s, acts] : pairs) {
                if (reach.count(s) || !candidates.count(s))
                    continue;
                for (int a : acts) {
                    for (const State& next : successors(s, task.actions[a])) {
                        if (reach.count(next)) {
                            reach.insert(s);
                            grew = true;
                            break;
                        }
                    }
                    if (reach.count(s))
                        break;
                }
            }
        }
        // Keep goal states and states that still have a viable pair and can
        // reach the goal.
        StateSet next_candidates;
        for (const State& s : all) {
            if (!candidates.count(s))
                continue;
            if (is_goal(task, s))
                next_candidates.insert(s);
            else if (!pairs[s].empty() && reach.count(s))
                next_candidates.insert(s);
        }
        if (next_candidates.size() != candidates.size()) {
            candidates = std::move(next_candidates);
            changed = true;
        }
    }
    return candidates.count(task.init) > 0;
}

struct CvStarResult {
    bool solvable = false;
    std::uint64_t cv_star = 0;
    std::uint64_t policy_count = 0;               // strong cyclic policies found
    std::vector<std::uint64_t> policy_cvs;        // cv of each, enumeration order
    std::vector<Policy> policies;
};

// Brute-force cv* by exhaustive enumeration of closed policies. Candidates
// are canonical: every mapping is reachable from s0 under the policy itself,
// so no two candidates differ only on irrelevant states.
inline CvStarResult cv_star_oracle(const FondTask& task,
                                   const OracleCaps& caps = OracleCaps::from_environment()) {
    reachable_states(task, caps.max_states);  // cap check up front

    CvStarResult result;
    std::uint64_t candidates_tried = 0;

    // Depth-first over decision points: the first reachable unmapped
    // non-goal state under the partial candidate.
    std::vector<std::pair<State, int>> assignment;  // stack of (state, action)
    Policy current;

    std::function<void()> enumerate = [&]() {
        // Find the first unmapped non-goal state reachable under `current`.
        std::optional<State> open;
        StateSet seen{task.init};
        std::deque<State> queue{task.init};
        while (!queue.empty() && !open) {
            State s = queue.front();
            queue.pop_front();
            if (!is_goal(task, s) && !current.contains(s)) {
                open = s;
                break;
            }
            if (current.contains(s))
                for (const State& next : successors(s, task.actions[current.action(s)]))
                    if (seen.insert(next).second)
                        queue.push_back(next);
        }
        if (!open) {
            // Closed candidate policy.
            if (++candidates_tried > caps.max_policy_candidates)
                throw OracleCapExceeded("policy enumeration exceeds oracle cap of " +
                                        std::to_string(caps.max_policy_candidates) +
                                        " candidates");
            if (verify_strong_cyclic(task, current)) {
                std::uint64_t cv = critical_value(task, current);
                result.policy_count += 1;
                result.policy_cvs.push_back(cv);
                result.policies.push_back(current);
                if (!result.solvable || cv < result.cv_star) {
                    result.solvable = true;
                    result.cv_star = cv;
                }
            }
            return;
        }
        std::vector<int> acts = applicable_actions(task, *open);
        if (acts.empty()) {
            // Dead end on every extension; count the candidate attempt so the
            // cap still bounds work.
            if (++candidates_tried > caps.max_policy_candidates)
                throw OracleCapExceeded("policy enumeration exceeds oracle cap");
            return;
        }
        for (int a : acts) {
            Policy saved = current;
            current.set(*open, a);
            enumerate();
            current = std::move(saved);
        }
    };
    enumerate();
    return result;
}

}  // namespace fond

#endif
