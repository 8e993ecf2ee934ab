#ifndef FOND_SEARCH_HPP
#define FOND_SEARCH_HPP

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fond/cost.hpp"
#include "fond/heuristics.hpp"
#include "fond/policy.hpp"
#include "fond/task.hpp"

namespace fond {

struct SearchConfig {
    HeuristicKind heuristic = HeuristicKind::HMax;
    Aggregator aggregator = Aggregator::Min;
    bool pruning = false;  // IDFSP when set
    std::optional<double> timeout_seconds;
    std::optional<std::uint64_t> call_cap;

    std::string name() const {
        return std::string(pruning ? "idfsp" : "idfs") + "(" + fond::to_string(aggregator) +
               "," + fond::to_string(heuristic) + ")";
    }
};

struct SearchStats {
    std::uint64_t iterations = 0;
    ExtNat initial_bound{0};
    ExtNat final_bound{0};
    std::uint64_t recursive_calls = 0;
    std::uint64_t fixed_point_rounds = 0;
    double wall_seconds = 0.0;
    std::vector<ExtNat> iteration_bounds;  // bound at the start of each iteration
};

enum class SearchStatus { Solved, Unsolvable, Unsolved, ResourceLimit };

inline std::string to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::Solved: return "solved";
    case SearchStatus::Unsolvable: return "unsolvable";
    case SearchStatus::Unsolved: return "unsolved";
    case SearchStatus::ResourceLimit: return "resource-limit";
    }
    return "?";
}

struct SearchOutcome {
    SearchStatus status = SearchStatus::Unsolved;
    Policy policy;             // valid iff status == Solved
    std::string limit_reason;  // set for ResourceLimit
};

// Recursion trace hook, used by tests to script the fixed-point behavior.
struct TraceEvent {
    enum class Kind { Enter, Return, Extend } kind;
    State state;
    int action = -1;      // Extend only
    bool solved = false;  // Return only
};
using TraceFn = std::function<void(const TraceEvent&)>;

// Bounded depth-first iterations with bottom-up fixed-point policy
// construction, plus the promising-state pruning variant.
class IdfsEngine {
public:
    IdfsEngine(const FondTask& task, SearchConfig config)
        : task_(&task),
          config_(std::move(config)),
          det_(determinize(task)),
          heuristic_(config_.heuristic, det_),
          space_bound_(state_space_bound(task)) {}

    void set_trace(TraceFn trace) { trace_ = std::move(trace); }

    SearchOutcome run() {
        auto start = std::chrono::steady_clock::now();
        deadline_.reset();
        if (config_.timeout_seconds)
            deadline_ = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                    std::chrono::duration<double>(*config_.timeout_seconds));
        SearchOutcome outcome;
        try {
            outcome = main_loop();
        } catch (const ResourceLimit& limit) {
            outcome.status = SearchStatus::ResourceLimit;
            outcome.limit_reason = limit.reason;
        }
        stats_.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return outcome;
    }

    const SearchStats& stats() const { return stats_; }

    // Exposed for tests: a single bounded recursive call from an arbitrary
    // frame. `bound` must be set first via set_bound.
    std::pair<bool, Policy> recurse(const State& s, const StateSet& ancestors,
                                    const StateSet& solved_ancestors, const Policy& pi) {
        return config_.pruning ? idfsp_r(s, ancestors, solved_ancestors, pi)
                               : idfs_r(s, ancestors, solved_ancestors, pi);
    }

    void set_bound(ExtNat bound) { bound_ = bound; }
    ExtNat next_bound() const { return next_bound_; }

private:
    struct ResourceLimit {
        std::string reason;
    };

    SearchOutcome main_loop() {
        bound_ = heuristic_(task_->init);
        next_bound_ = ExtNat::infinity();
        prune_set_.clear();
        stats_ = SearchStats{};
        stats_.initial_bound = bound_;
        stats_.final_bound = bound_;

        while (bound_.is_finite() && bound_ <= space_bound_) {
            stats_.iterations += 1;
            stats_.iteration_bounds.push_back(bound_);
            stats_.final_bound = bound_;

            auto [solved, pi] = recurse(task_->init, {}, {}, Policy{});
            if (solved) {
                SearchOutcome outcome;
                outcome.status = SearchStatus::Solved;
                outcome.policy = std::move(pi);
                return outcome;
            }
            assert(next_bound_ > bound_);
            bound_ = next_bound_;
            next_bound_ = ExtNat::infinity();
            prune_set_.clear();
        }
        SearchOutcome outcome;
        // The pruning variant only ever certifies exhaustion, never
        // unsolvability.
        outcome.status = config_.pruning ? SearchStatus::Unsolved : SearchStatus::Unsolvable;
        return outcome;
    }

    void check_limits() {
        if (deadline_ && std::chrono::steady_clock::now() > *deadline_)
            throw ResourceLimit{"timeout after " + std::to_string(*config_.timeout_seconds) +
                                " s"};
        if (config_.call_cap && stats_.recursive_calls > *config_.call_cap)
            throw ResourceLimit{"recursive-call cap of " + std::to_string(*config_.call_cap) +
                                " exceeded"};
    }

    void trace(TraceEvent::Kind kind, const State& s, int action = -1, bool solved = false) {
        if (trace_)
            trace_(TraceEvent{kind, s, action, solved});
    }

    // Applicable actions ordered by ascending F_max over their successor
    // sets; actions whose F_max is infinite are discarded. Ordering always
    // uses F_max regardless of the configured aggregator.
    struct Candidate {
        int action;
        std::vector<State> succ;
        ExtNat f_guard;  // F_xi with the configured aggregator
    };

    std::vector<Candidate> ordered_candidates(const State& s, ExtNat g_succ) {
        struct Scored {
            Candidate cand;
            ExtNat f_max;
        };
        std::vector<Scored> scored;
        for (int a : applicable_actions(*task_, s)) {
            Candidate c;
            c.action = a;
            c.succ = successors(s, task_->actions[a]);
            ExtNat f_max = aggregate(Aggregator::Max, heuristic_, c.succ, g_succ);
            if (f_max.is_infinite())
                continue;
            c.f_guard = config_.aggregator == Aggregator::Max
                            ? f_max
                            : aggregate(Aggregator::Min, heuristic_, c.succ, g_succ);
            scored.push_back({std::move(c), f_max});
        }
        std::stable_sort(scored.begin(), scored.end(),
                         [](const Scored& a, const Scored& b) { return a.f_max < b.f_max; });
        std::vector<Candidate> result;
        result.reserve(scored.size());
        for (auto& sc : scored)
            result.push_back(std::move(sc.cand));
        return result;
    }

    std::pair<bool, Policy> idfs_r(const State& s, const StateSet& ancestors,
                                   const StateSet& solved_ancestors, const Policy& pi) {
        stats_.recursive_calls += 1;
        check_limits();
        trace(TraceEvent::Kind::Enter, s);
        assert([&] {  // invariant: the partial policy never maps a path ancestor
            for (const auto& [state, _] : pi.mapping())
                if (ancestors.count(state))
                    return false;
            return true;
        }());

        // Base cases.
        if (is_goal(*task_, s) || pi.contains(s) || solved_ancestors.count(s)) {
            trace(TraceEvent::Kind::Return, s, -1, true);
            return {true, pi};
        }
        if (ancestors.count(s)) {
            trace(TraceEvent::Kind::Return, s, -1, false);
            return {false, pi};
        }

        ExtNat depth{static_cast<std::uint64_t>(ancestors.size())};
        ExtNat g_succ = depth + ExtNat{1};
        for (Candidate& cand : ordered_candidates(s, g_succ)) {
            if (cand.f_guard > bound_ && solved_ancestors.empty()) {
                next_bound_ = min(next_bound_, cand.f_guard);
                continue;
            }
            if (g_succ > bound_) {
                next_bound_ = min(next_bound_, g_succ);
                continue;
            }
            auto [reached, pi_new] = fixed_point(s, cand, ancestors, solved_ancestors, pi);
            if (reached) {
                pi_new.set(s, cand.action);
                trace(TraceEvent::Kind::Extend, s, cand.action);
                trace(TraceEvent::Kind::Return, s, -1, true);
                return {true, std::move(pi_new)};
            }
        }
        trace(TraceEvent::Kind::Return, s, -1, false);
        return {false, pi};
    }

    // Fixed point: recurse into every still-unsolved successor until a
    // full pass adds nothing. Success iff every successor solved; the caller
    // then extends the returned policy with s -> a.
    std::pair<bool, Policy> fixed_point(const State& s, const Candidate& cand,
                                        const StateSet& ancestors,
                                        const StateSet& solved_ancestors, const Policy& pi) {
        StateSet extended = ancestors;
        extended.insert(s);

        StateSet solved_prime = solved_ancestors;
        Policy pi_prime = pi;
        StateSet solved_members;  // M*

        bool reached_fixed_point = false;
        while (!reached_fixed_point) {
            stats_.fixed_point_rounds += 1;
            reached_fixed_point = true;
            for (const State& next : cand.succ) {
                if (solved_members.count(next))
                    continue;
                auto [flag, pi_returned] = idfs_r(next, extended, solved_prime, pi_prime);
                pi_prime = std::move(pi_returned);
                if (flag) {
                    solved_members.insert(next);
                    solved_prime = extended;
                    reached_fixed_point = false;
                }
            }
        }
        if (solved_members.size() == cand.succ.size())
            return {true, std::move(pi_prime)};
        return {false, pi};
    }

    bool intersects_prune_set(const std::vector<State>& states) const {
        for (const State& s : states)
            if (prune_set_.count(s))
                return true;
        return false;
    }

    std::pair<bool, Policy> idfsp_r(const State& s, const StateSet& ancestors,
                                    const StateSet& solved_ancestors, const Policy& pi) {
        stats_.recursive_calls += 1;
        check_limits();
        trace(TraceEvent::Kind::Enter, s);

        if (is_goal(*task_, s) || pi.contains(s) || solved_ancestors.count(s)) {
            trace(TraceEvent::Kind::Return, s, -1, true);
            return {true, pi};
        }
        if (ancestors.count(s)) {
            trace(TraceEvent::Kind::Return, s, -1, false);
            return {false, pi};
        }
        // Extra base case: already pruned in this iteration.
        if (prune_set_.count(s)) {
            trace(TraceEvent::Kind::Return, s, -1, false);
            return {false, pi};
        }

        bool promising = false;
        ExtNat depth{static_cast<std::uint64_t>(ancestors.size())};
        ExtNat g_succ = depth + ExtNat{1};
        for (Candidate& cand : ordered_candidates(s, g_succ)) {
            if (cand.f_guard > bound_ && solved_ancestors.empty()) {
                next_bound_ = min(next_bound_, cand.f_guard);
                continue;
            }
            if (g_succ > bound_) {
                next_bound_ = min(next_bound_, g_succ);
                continue;
            }
            auto [reached, aborted, pi_new] =
                pruned_fixed_point(s, cand, ancestors, solved_ancestors, pi);
            if (!aborted)
                promising = true;
            if (reached) {
                pi_new.set(s, cand.action);
                trace(TraceEvent::Kind::Extend, s, cand.action);
                trace(TraceEvent::Kind::Return, s, -1, true);
                return {true, std::move(pi_new)};
            }
        }
        if (!promising)
            prune_set_.insert(s);
        trace(TraceEvent::Kind::Return, s, -1, false);
        return {false, pi};
    }

    // Pruning fixed point: abort as soon as a successor lands in the prune
    // set. A completed (non-aborted) fixed point marks the parent promising
    // whether or not every successor solved.
    std::tuple<bool, bool, Policy> pruned_fixed_point(const State& s, const Candidate& cand,
                                                      const StateSet& ancestors,
                                                      const StateSet& solved_ancestors,
                                                      const Policy& pi) {
        StateSet extended = ancestors;
        extended.insert(s);

        StateSet solved_prime = solved_ancestors;
        Policy pi_prime = pi;
        StateSet solved_members;

        bool reached_fixed_point = false;
        while (!reached_fixed_point) {
            stats_.fixed_point_rounds += 1;
            reached_fixed_point = true;
            for (const State& next : cand.succ) {
                if (solved_members.count(next))
                    continue;
                auto [flag, pi_returned] = idfsp_r(next, extended, solved_prime, pi_prime);
                pi_prime = std::move(pi_returned);
                if (intersects_prune_set(cand.succ))
                    return {false, true, pi};
                if (flag) {
                    solved_members.insert(next);
                    solved_prime = extended;
                    reached_fixed_point = false;
                }
            }
            if (intersects_prune_set(cand.succ))
                return {false, true, pi};
        }
        if (solved_members.size() == cand.succ.size())
            return {true, false, std::move(pi_prime)};
        return {false, false, pi};
    }

    const FondTask* task_;
    SearchConfig config_;
    DetTask det_;
    HeuristicEvaluator heuristic_;
    ExtNat space_bound_;

    ExtNat bound_{0};
    ExtNat next_bound_ = ExtNat::infinity();
    StateSet prune_set_;  // X, reset per iteration
    SearchStats stats_;
    TraceFn trace_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
};

inline std::pair<SearchOutcome, SearchStats> idfs(const FondTask& task, const SearchConfig& cfg) {
    IdfsEngine engine(task, cfg);
    SearchOutcome outcome = engine.run();
    return {std::move(outcome), engine.stats()};
}

}  // namespace fond

#endif
