#ifndef FOND_JSON_TASK_HPP
#define FOND_JSON_TASK_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fond/task.hpp"

namespace fond {

class TaskFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// JSON task document, schema version 1:
//   {
//     "schema": 1,
//     "variables": [{"name": "p", "values": ["false", "true"]}, ...],
//     "init": {"p": "false", ...},                  // total
//     "goal": {"p": "true"},                        // partial
//     "actions": [{"name": "a",
//                  "pre": {"p": "false"},
//                  "effects": [{"p": "true"}, {}]}]
//   }
// Assignments are written by name so documents stay diffable; load checks
// them against the variable table.

inline nlohmann::json save_task_json(const FondTask& task) {
    nlohmann::json doc;
    doc["schema"] = 1;
    doc["variables"] = nlohmann::json::array();
    for (int v = 0; v < task.vars.size(); ++v) {
        const auto& var = task.vars.variable(v);
        doc["variables"].push_back({{"name", var.name}, {"values", var.values}});
    }
    auto dump_partial = [&](const PartialState& p) {
        nlohmann::json obj = nlohmann::json::object();
        for (auto [var, val] : p.assignments())
            obj[task.vars.variable(var).name] = task.vars.variable(var).values[val];
        return obj;
    };
    nlohmann::json init = nlohmann::json::object();
    for (int v = 0; v < task.vars.size(); ++v)
        init[task.vars.variable(v).name] = task.vars.variable(v).values[task.init.value(v)];
    doc["init"] = init;
    doc["goal"] = dump_partial(task.goal);
    doc["actions"] = nlohmann::json::array();
    for (const auto& a : task.actions) {
        nlohmann::json effs = nlohmann::json::array();
        for (const auto& eff : a.effects)
            effs.push_back(dump_partial(eff));
        doc["actions"].push_back({{"name", a.name}, {"pre", dump_partial(a.precondition)}, {"effects", effs}});
    }
    return doc;
}

inline FondTask load_task_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("schema"))
        throw TaskFormatError("task document missing schema field");
    if (doc["schema"].get<int>() != 1)
        throw TaskFormatError("unsupported task schema version");

    FondTask task;
    for (const auto& var : doc.at("variables"))
        task.vars.add_variable(var.at("name").get<std::string>(),
                               var.at("values").get<std::vector<std::string>>());

    auto lookup = [&](const std::string& var_name, const std::string& val_name) {
        int var = task.vars.find_variable(var_name);
        if (var < 0)
            throw TaskFormatError("unknown variable '" + var_name + "'");
        int val = task.vars.find_value(var, val_name);
        if (val < 0)
            throw TaskFormatError("unknown value '" + val_name + "' for variable '" + var_name + "'");
        return std::pair{var, val};
    };
    auto load_partial = [&](const nlohmann::json& obj) {
        PartialState p;
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            auto [var, val] = lookup(it.key(), it.value().get<std::string>());
            p.assign(var, val);
        }
        return p;
    };

    const auto& init_obj = doc.at("init");
    std::vector<std::int32_t> init_values(task.vars.size(), -1);
    for (auto it = init_obj.begin(); it != init_obj.end(); ++it) {
        auto [var, val] = lookup(it.key(), it.value().get<std::string>());
        init_values[var] = val;
    }
    for (int v = 0; v < task.vars.size(); ++v)
        if (init_values[v] < 0)
            throw TaskFormatError("init leaves variable '" + task.vars.variable(v).name + "' unassigned");
    task.init = State(std::move(init_values));
    task.goal = load_partial(doc.at("goal"));
    for (const auto& act : doc.at("actions")) {
        NondetAction a;
        a.name = act.at("name").get<std::string>();
        a.precondition = load_partial(act.at("pre"));
        for (const auto& eff : act.at("effects"))
            a.effects.push_back(load_partial(eff));
        task.actions.push_back(std::move(a));
    }
    task.validate();
    return task;
}

inline FondTask load_task_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw TaskFormatError("cannot open task file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw TaskFormatError("invalid JSON in " + path + ": " + e.what());
    }
    return load_task_json(doc);
}

inline void save_task_file(const FondTask& task, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw TaskFormatError("cannot write task file: " + path);
    out << save_task_json(task).dump(2) << "\n";
}

// Structural fingerprint used by the policy file header.
inline std::uint64_t task_hash(const FondTask& task) {
    std::string canon = save_task_json(task).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace fond

#endif
