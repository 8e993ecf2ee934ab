#ifndef FOND_TEST_FIXTURES_HPP
#define FOND_TEST_FIXTURES_HPP

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fond/task.hpp"

namespace fixtures {

// Directory with the bundled task files; tests run from anywhere.
inline std::string tasks_dir() {
    if (const char* dir = std::getenv("FONDPLAN_TASKS"))
        return dir;
    return "tasks";
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline fond::PartialState ps(std::initializer_list<std::pair<int, int>> assignments) {
    fond::PartialState p;
    for (auto [var, val] : assignments)
        p.assign(var, val);
    return p;
}

// Three binary switches; two strong cyclic policies exist, one short cycle
// and one long one.
inline fond::FondTask make_switches() {
    fond::FondTask t;
    for (auto n : {"p", "q", "r"})
        t.vars.add_variable(n, {"false", "true"});
    t.init = fond::State({0, 0, 0});
    t.goal = ps({{0, 1}, {1, 1}, {2, 0}});
    t.actions.push_back({"a", ps({{0, 0}, {1, 0}, {2, 0}}),
                         {ps({{0, 1}, {1, 1}, {2, 0}}), ps({{1, 1}})}});
    t.actions.push_back({"b", ps({{0, 0}, {1, 0}, {2, 1}}),
                         {ps({{0, 1}, {1, 1}}), ps({{0, 1}, {1, 1}, {2, 0}})}});
    t.actions.push_back({"c", ps({{2, 0}}), {ps({{2, 1}})}});
    t.actions.push_back({"d", ps({{1, 1}, {2, 1}}), {ps({{1, 0}, {2, 0}})}});
    t.actions.push_back({"e", ps({{0, 1}, {1, 0}, {2, 1}}), {ps({{0, 0}})}});
    t.validate();
    return t;
}

// One location variable with two non-deterministic branch points; exercises
// re-passing successors inside the fixed point.
inline fond::FondTask make_corridor() {
    fond::FondTask t;
    std::vector<std::string> locs;
    for (int i = 0; i <= 12; ++i)
        locs.push_back("s" + std::to_string(i));
    t.vars.add_variable("loc", locs);
    t.init = fond::State({0});
    t.goal = ps({{0, 5}});
    auto det = [&](std::string name, int from, int to) {
        t.actions.push_back({std::move(name), ps({{0, from}}), {ps({{0, to}})}});
    };
    det("t01", 0, 1);
    t.actions.push_back({"t1", ps({{0, 1}}), {ps({{0, 2}}), ps({{0, 9}})}});
    det("t2", 2, 3);
    t.actions.push_back({"t3", ps({{0, 3}}), {ps({{0, 4}}), ps({{0, 6}})}});
    det("t4", 4, 5);
    det("t6", 6, 8);
    det("t8", 8, 5);
    det("t9", 9, 10);
    t.actions.push_back({"a", ps({{0, 10}}), {ps({{0, 12}}), ps({{0, 11}})}});
    det("t11", 11, 8);
    det("t12", 12, 9);
    t.validate();
    return t;
}

// Deterministic corridor of k steps.
inline fond::FondTask make_chain(int k) {
    fond::FondTask t;
    std::vector<std::string> vals;
    for (int i = 0; i <= k; ++i)
        vals.push_back("p" + std::to_string(i));
    t.vars.add_variable("pos", vals);
    t.init = fond::State({0});
    t.goal = ps({{0, k}});
    for (int i = 0; i < k; ++i)
        t.actions.push_back({"step" + std::to_string(i), ps({{0, i}}), {ps({{0, i + 1}})}});
    t.validate();
    return t;
}

// A gamble that may hit a dead end versus a safe two-step detour.
inline fond::FondTask make_deadend() {
    fond::FondTask t;
    t.vars.add_variable("loc", {"start", "safe", "dead", "goal"});
    t.init = fond::State({0});
    t.goal = ps({{0, 3}});
    t.actions.push_back({"gamble", ps({{0, 0}}), {ps({{0, 3}}), ps({{0, 2}})}});
    t.actions.push_back({"walk", ps({{0, 0}}), {ps({{0, 1}})}});
    t.actions.push_back({"finish", ps({{0, 1}}), {ps({{0, 3}})}});
    t.validate();
    return t;
}

inline fond::FondTask make_unsolvable_stray() {
    fond::FondTask t;
    t.vars.add_variable("loc", {"start", "dead", "goal"});
    t.init = fond::State({0});
    t.goal = ps({{0, 2}});
    t.actions.push_back({"stray", ps({{0, 0}}), {ps({{0, 1}})}});
    t.validate();
    return t;
}

inline fond::FondTask make_unsolvable_gamble() {
    fond::FondTask t;
    t.vars.add_variable("loc", {"start", "dead", "goal"});
    t.init = fond::State({0});
    t.goal = ps({{0, 2}});
    t.actions.push_back({"gamble", ps({{0, 0}}), {ps({{0, 2}}), ps({{0, 1}})}});
    t.validate();
    return t;
}

// Single action that either stays put or reaches the goal; strong cyclic
// only under the fairness reading of the self loop.
inline fond::FondTask make_selfloop() {
    fond::FondTask t;
    t.vars.add_variable("loc", {"start", "goal"});
    t.init = fond::State({0});
    t.goal = ps({{0, 1}});
    t.actions.push_back({"try", ps({{0, 0}}), {ps({{0, 0}}), ps({{0, 1}})}});
    t.validate();
    return t;
}

}  // namespace fixtures

#endif
