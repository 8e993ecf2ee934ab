#ifndef FOND_GROUND_HPP
#define FOND_GROUND_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fond/pddl.hpp"
#include "fond/task.hpp"

namespace fond {

class GroundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GroundOptions {
    std::uint64_t max_ground_actions = 100000;
    // When off, every type-consistent instantiation and every mentioned atom
    // is kept. Only used to cross-check that pruning preserves solvability.
    bool reachability_pruning = true;
};

struct GroundingReport {
    std::uint64_t schemas = 0;
    std::uint64_t ground_actions_before_pruning = 0;
    std::uint64_t ground_actions_after_pruning = 0;
    std::uint64_t facts = 0;
    std::vector<std::string> warnings;
};

namespace detail {

// Ground atom in canonical spelling: predicate and arguments joined by one
// space. Doubles as the binary variable name.
inline std::string atom_name(const std::string& predicate, const std::vector<std::string>& args) {
    std::string out = predicate;
    for (const std::string& a : args)
        out += " " + a;
    return out;
}

struct GroundLiteral {
    bool negated;
    std::string atom;
};

struct GroundAction {
    std::string name;
    std::vector<GroundLiteral> precondition;
    std::vector<std::vector<GroundLiteral>> outcomes;
};

// type -> parent chain membership.
class TypeHierarchy {
public:
    explicit TypeHierarchy(const pddl::DomainAst& dom) {
        for (const pddl::TypedName& t : dom.types)
            parent_[t.name] = t.type;
    }

    bool is_subtype(const std::string& sub, const std::string& super) const {
        std::string t = sub;
        for (int depth = 0; depth < 64; ++depth) {
            if (t == super)
                return true;
            if (t == "object")
                return false;
            auto it = parent_.find(t);
            t = it == parent_.end() ? "object" : it->second;
        }
        throw GroundError("type hierarchy cycle at '" + sub + "'");
    }

private:
    std::map<std::string, std::string> parent_;
};

}  // namespace detail

// Instantiate every schema over type-consistent objects, prune with
// delete-relaxed reachability from init, and emit one binary variable per
// surviving fact. Goal facts always get variables so an unreachable goal
// grounds to an unsolvable task instead of an error.
inline std::pair<FondTask, GroundingReport> ground(const pddl::DomainAst& dom,
                                                   const pddl::ProblemAst& prob,
                                                   const GroundOptions& opts = {}) {
    GroundingReport report;
    report.schemas = dom.actions.size();

    detail::TypeHierarchy types(dom);
    std::vector<pddl::TypedName> objects = prob.objects;
    objects.insert(objects.end(), dom.constants.begin(), dom.constants.end());

    bool declares_nondet = false;
    for (const std::string& r : dom.requirements)
        if (r == ":non-deterministic")
            declares_nondet = true;
    bool uses_oneof = false;

    // Enumerate type-consistent instantiations.
    std::vector<detail::GroundAction> all_actions;
    for (const pddl::ActionSchema& schema : dom.actions) {
        std::vector<std::vector<std::string>> choices;
        for (const pddl::TypedName& param : schema.params) {
            std::vector<std::string> fits;
            for (const pddl::TypedName& obj : objects)
                if (types.is_subtype(obj.type, param.type))
                    fits.push_back(obj.name);
            choices.push_back(std::move(fits));
        }
        std::vector<std::size_t> index(choices.size(), 0);
        bool done = false;
        if (!choices.empty())
            for (const auto& c : choices)
                if (c.empty())
                    done = true;
        while (!done) {
            std::unordered_map<std::string, std::string> binding;
            for (std::size_t i = 0; i < choices.size(); ++i)
                binding[schema.params[i].name] = choices[i][index[i]];
            auto substitute = [&](const std::vector<std::string>& args) {
                std::vector<std::string> out;
                for (const std::string& a : args)
                    out.push_back(a.size() && a[0] == '?' ? binding.at(a) : a);
                return out;
            };

            // Equality literals resolve statically; a failing one kills the
            // instantiation.
            bool statically_false = false;
            detail::GroundAction ga;
            ga.name = schema.name;
            for (std::size_t i = 0; i < choices.size(); ++i)
                ga.name += " " + choices[i][index[i]];
            for (const pddl::Literal& lit : schema.precondition) {
                std::vector<std::string> args = substitute(lit.args);
                if (lit.predicate == "=") {
                    bool equal = args.size() == 2 && args[0] == args[1];
                    if (equal == lit.negated)
                        statically_false = true;
                    continue;
                }
                ga.precondition.push_back({lit.negated, detail::atom_name(lit.predicate, args)});
            }
            if (!statically_false) {
                for (const auto& outcome : pddl::normalize_outcomes(schema.effect)) {
                    std::vector<detail::GroundLiteral> eff;
                    for (const pddl::Literal& lit : outcome)
                        eff.push_back(
                            {lit.negated, detail::atom_name(lit.predicate, substitute(lit.args))});
                    ga.outcomes.push_back(std::move(eff));
                }
                if (ga.outcomes.size() > 1)
                    uses_oneof = true;
                all_actions.push_back(std::move(ga));
                if (all_actions.size() > opts.max_ground_actions)
                    throw GroundError("ground action count exceeds the cap of " +
                                      std::to_string(opts.max_ground_actions));
            }

            // Advance the odometer.
            done = true;
            for (std::size_t i = choices.size(); i-- > 0;) {
                if (++index[i] < choices[i].size()) {
                    done = false;
                    break;
                }
                index[i] = 0;
            }
            if (choices.empty())
                done = true;
        }
    }
    report.ground_actions_before_pruning = all_actions.size();

    if (uses_oneof && !declares_nondet)
        report.warnings.push_back(
            "domain uses oneof effects without declaring :non-deterministic");

    // Delete-relaxed reachability: negative preconditions ignored, outcome
    // adds unioned.
    std::unordered_set<std::string> reachable;
    for (const pddl::Literal& fact : prob.init)
        reachable.insert(detail::atom_name(fact.predicate, fact.args));
    std::vector<bool> applied(all_actions.size(), !opts.reachability_pruning);
    bool changed = opts.reachability_pruning;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < all_actions.size(); ++i) {
            if (applied[i])
                continue;
            bool ok = true;
            for (const detail::GroundLiteral& pre : all_actions[i].precondition)
                if (!pre.negated && !reachable.count(pre.atom)) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            applied[i] = true;
            changed = true;
            for (const auto& outcome : all_actions[i].outcomes)
                for (const detail::GroundLiteral& eff : outcome)
                    if (!eff.negated)
                        reachable.insert(eff.atom);
        }
    }

    // Variable table: reachable facts in first-mention order, then goal
    // facts that never became reachable.
    FondTask task;
    std::unordered_map<std::string, int> var_of;
    auto add_fact = [&](const std::string& atom) {
        auto it = var_of.find(atom);
        if (it != var_of.end())
            return it->second;
        int v = task.vars.add_variable(atom, {"false", "true"});
        var_of.emplace(atom, v);
        return v;
    };
    for (const pddl::Literal& fact : prob.init)
        add_fact(detail::atom_name(fact.predicate, fact.args));
    for (std::size_t i = 0; i < all_actions.size(); ++i) {
        if (!applied[i])
            continue;
        if (!opts.reachability_pruning)
            for (const detail::GroundLiteral& pre : all_actions[i].precondition)
                add_fact(pre.atom);
        for (const auto& outcome : all_actions[i].outcomes)
            for (const detail::GroundLiteral& eff : outcome)
                if (!eff.negated && (!opts.reachability_pruning || reachable.count(eff.atom)))
                    add_fact(eff.atom);
    }
    for (const pddl::Literal& lit : prob.goal) {
        std::string atom = detail::atom_name(lit.predicate, lit.args);
        if (!lit.negated && !reachable.count(atom)) {
            if (opts.reachability_pruning)
                report.warnings.push_back("goal fact '" + atom + "' is not relaxed-reachable");
            add_fact(atom);
        } else if (lit.negated) {
            add_fact(atom);
        }
    }
    report.facts = static_cast<std::uint64_t>(task.vars.size());

    std::vector<std::int32_t> init_values(task.vars.size(), 0);
    for (const pddl::Literal& fact : prob.init)
        init_values[var_of.at(detail::atom_name(fact.predicate, fact.args))] = 1;
    task.init = State(std::move(init_values));
    for (const pddl::Literal& lit : prob.goal)
        task.goal.assign(var_of.at(detail::atom_name(lit.predicate, lit.args)),
                         lit.negated ? 0 : 1);

    // Keep relaxed-applicable actions. A negative precondition on an
    // unreachable fact is vacuously true; a positive effect on an atom
    // outside the table cannot happen for kept actions, and a delete of an
    // unreachable fact is a no-op.
    for (std::size_t i = 0; i < all_actions.size(); ++i) {
        if (!applied[i])
            continue;
        NondetAction a;
        a.name = all_actions[i].name;
        for (const detail::GroundLiteral& pre : all_actions[i].precondition) {
            auto it = var_of.find(pre.atom);
            if (it == var_of.end()) {
                if (!pre.negated)
                    throw GroundError("internal: kept action with unreachable precondition");
                continue;
            }
            // Repeated literals on one atom: contradictory ones make the
            // action statically inapplicable.
            if (a.precondition.defines(it->second) &&
                a.precondition.value(it->second) != (pre.negated ? 0 : 1)) {
                a.effects.clear();
                a.name.clear();
                break;
            }
            a.precondition.assign(it->second, pre.negated ? 0 : 1);
        }
        if (a.name.empty())
            continue;
        for (const auto& outcome : all_actions[i].outcomes) {
            PartialState eff;
            for (const detail::GroundLiteral& lit : outcome) {
                auto it = var_of.find(lit.atom);
                if (it == var_of.end())
                    continue;
                eff.assign(it->second, lit.negated ? 0 : 1);
            }
            a.effects.push_back(std::move(eff));
        }
        task.actions.push_back(std::move(a));
    }
    report.ground_actions_after_pruning = task.actions.size();

    for (const pddl::Predicate& p : dom.predicates) {
        bool mentioned = false;
        for (const auto& [atom, _] : var_of)
            if (atom == p.name || atom.rfind(p.name + " ", 0) == 0) {
                mentioned = true;
                break;
            }
        if (!mentioned)
            report.warnings.push_back("predicate '" + p.name + "' never grounded to a fact");
    }

    task.validate();
    return {std::move(task), std::move(report)};
}

}  // namespace fond

#endif
