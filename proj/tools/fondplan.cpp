// fondplan: solve, verify, and inspect non-deterministic planning tasks.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fond/bench.hpp"
#include "fond/ground.hpp"
#include "fond/json_task.hpp"
#include "fond/oracles.hpp"
#include "fond/pddl.hpp"
#include "fond/policy.hpp"
#include "fond/search.hpp"

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadPolicy = 3;
constexpr int kExitOracleCap = 4;
constexpr int kExitUnsolvable = 10;
constexpr int kExitUnsolved = 11;
constexpr int kExitResourceLimit = 12;

// Unreadable or unparsable input files are usage errors.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TaskArgs {
    std::string task_json;
    std::string domain_pddl;
    std::string problem_pddl;
};

fond::FondTask load_task(const TaskArgs& args) {
    if (!args.task_json.empty())
        return fond::load_task_file(args.task_json);
    auto dom = fond::pddl::parse_domain(read_file(args.domain_pddl));
    auto prob = fond::pddl::parse_problem(read_file(args.problem_pddl), dom);
    auto [task, report] = fond::ground(dom, prob);
    for (const std::string& w : report.warnings)
        std::cerr << "warning: " << w << "\n";
    return task;
}

nlohmann::json stats_json(const std::string& task_name, const fond::SearchConfig& cfg,
                          const fond::SearchOutcome& outcome, const fond::SearchStats& stats) {
    nlohmann::json doc;
    doc["task"] = task_name;
    doc["config"] = cfg.name();
    doc["outcome"] = fond::to_string(outcome.status);
    doc["T"] = stats.wall_seconds;
    if (outcome.status == fond::SearchStatus::Solved)
        doc["policy_size"] = outcome.policy.size();
    doc["b_init"] = stats.initial_bound.to_string();
    doc["b_final"] = stats.final_bound.to_string();
    doc["iterations"] = stats.iterations;
    doc["calls"] = stats.recursive_calls;
    return doc;
}

std::string stats_csv(const std::string& task_name, const fond::SearchConfig& cfg,
                      const fond::SearchOutcome& outcome, const fond::SearchStats& stats) {
    std::ostringstream out;
    out << "task,config,outcome,T,policy_size,b_init,b_final,iterations,calls\n";
    out << task_name << "," << cfg.name() << "," << fond::to_string(outcome.status) << ","
        << stats.wall_seconds << ","
        << (outcome.status == fond::SearchStatus::Solved ? std::to_string(outcome.policy.size())
                                                         : "")
        << "," << stats.initial_bound << "," << stats.final_bound << "," << stats.iterations << ","
        << stats.recursive_calls << "\n";
    return out.str();
}

int cmd_solve(const TaskArgs& task_args, const fond::SearchConfig& cfg,
              const std::string& policy_out, const std::string& stats_format, bool verify,
              std::optional<std::uint64_t> seed, const std::string& dump_task) {
    fond::FondTask task = load_task(task_args);
    std::string task_name =
        !task_args.task_json.empty() ? task_args.task_json : task_args.problem_pddl;

    if (!dump_task.empty())
        fond::save_task_file(task, dump_task);

    fond::IdfsEngine engine(task, cfg);
    fond::SearchOutcome outcome = engine.run();
    const fond::SearchStats& stats = engine.stats();

    if (outcome.status == fond::SearchStatus::Solved) {
        if (verify && !fond::verify_strong_cyclic(task, outcome.policy))
            throw std::runtime_error("produced policy failed strong-cyclic verification");
        if (!policy_out.empty()) {
            std::ofstream out(policy_out);
            if (!out)
                throw std::runtime_error("cannot write policy file: " + policy_out);
            out << fond::save_policy_text(task, outcome.policy);
        }
        if (seed) {
            auto sim = fond::simulate_fair(task, outcome.policy, *seed, 100000);
            std::cout << "simulation: " << (sim.reached_goal() ? "goal" : "stopped") << " after "
                      << sim.steps << " steps\n";
        }
    }
    if (stats_format == "json")
        std::cout << stats_json(task_name, cfg, outcome, stats).dump(2) << "\n";
    else if (stats_format == "csv")
        std::cout << stats_csv(task_name, cfg, outcome, stats);

    switch (outcome.status) {
    case fond::SearchStatus::Solved:
        return kExitSolved;
    case fond::SearchStatus::Unsolvable:
        return kExitUnsolvable;
    case fond::SearchStatus::Unsolved:
        return kExitUnsolved;
    case fond::SearchStatus::ResourceLimit:
        std::cerr << "error: " << outcome.limit_reason << "\n";
        return kExitResourceLimit;
    }
    return kExitUsage;
}

int cmd_verify(const TaskArgs& task_args, const std::string& policy_path, bool print_cv) {
    fond::FondTask task = load_task(task_args);
    fond::Policy pi;
    try {
        pi = fond::load_policy_text(task, read_file(policy_path));
    } catch (const fond::PolicyFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadPolicy;
    }
    if (!fond::verify_strong_cyclic(task, pi)) {
        std::cerr << "error: policy is not strong cyclic for this task\n";
        return kExitVerifyFailed;
    }
    std::cout << "policy verified: strong cyclic, " << pi.size() << " mappings\n";
    if (print_cv)
        std::cout << "cv: " << fond::critical_value(task, pi) << "\n";
    return 0;
}

int cmd_oracle(const TaskArgs& task_args, bool enumerate) {
    fond::FondTask task = load_task(task_args);
    fond::OracleCaps caps = fond::OracleCaps::from_environment();
    try {
        bool solvable = fond::solvability_oracle(task, caps);
        std::cout << "solvable: " << (solvable ? "yes" : "no") << "\n";
        if (solvable) {
            auto cv = fond::cv_star_oracle(task, caps);
            std::cout << "cv*: " << cv.cv_star << "\n";
            if (enumerate)
                std::cout << "policies: " << cv.policy_count << "\n";
        }
    } catch (const fond::OracleCapExceeded& e) {
        std::cerr << "error: " << e.what() << " (caps: states=" << caps.max_states
                  << ", candidates=" << caps.max_policy_candidates << ")\n";
        return kExitOracleCap;
    }
    return 0;
}

int cmd_bench(const std::string& manifest_path, const std::string& out_path) {
    fond::BenchManifest manifest = fond::load_manifest(manifest_path);
    std::vector<fond::RunRecord> records = fond::run_benchmark(manifest);
    for (const fond::RunRecord& rec : records)
        if (!rec.error.empty())
            std::cerr << "warning: task " << rec.task_id << " config " << rec.config
                      << " aborted: " << rec.error << "\n";
    std::string csv = fond::render_csv(records);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw std::runtime_error("cannot write report: " + out_path);
        out << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strong cyclic planner for non-deterministic tasks"};
    app.require_subcommand(1);

    TaskArgs task_args;
    fond::SearchConfig cfg;
    cfg.timeout_seconds = 300.0;
    std::string policy_out, stats_format, dump_task, heuristic = "hmax", aggregation = "min";
    bool verify = false, pruning = false;
    std::optional<std::uint64_t> seed;

    auto add_task_options = [&](CLI::App* cmd) {
        cmd->add_option("domain", task_args.domain_pddl, "Domain file (PDDL)");
        cmd->add_option("problem", task_args.problem_pddl, "Problem file (PDDL)");
        cmd->add_option("--task", task_args.task_json, "Task file (JSON)");
    };

    CLI::App* solve = app.add_subcommand("solve", "Search for a strong cyclic policy");
    add_task_options(solve);
    solve->add_option("--heuristic", heuristic, "blind, hmax, hadd, or hff")->capture_default_str();
    solve->add_option("--aggregation", aggregation, "min or max")->capture_default_str();
    solve->add_flag("--pruning", pruning, "Prune states with no promising action");
    solve->add_option("--timeout", *cfg.timeout_seconds, "Time limit in seconds")
        ->capture_default_str();
    solve->add_option("--policy-out", policy_out, "Write the policy to this file");
    solve->add_option("--stats", stats_format, "Print run statistics (json or csv)")
        ->check(CLI::IsMember({"json", "csv"}));
    solve->add_flag("--verify", verify, "Re-verify the produced policy; mismatch is fatal");
    solve->add_option("--seed", seed, "Simulate the policy with this random seed");
    solve->add_option("--dump-task", dump_task, "Write the grounded task as JSON");

    std::string policy_path;
    bool print_cv = false;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Check a policy file against a task");
    add_task_options(verify_cmd);
    verify_cmd->add_option("--policy", policy_path, "Policy file to check")->required();
    verify_cmd->add_flag("--cv", print_cv, "Also print the critical value");

    bool enumerate = false;
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exhaustive solvability and cv* report");
    add_task_options(oracle_cmd);
    oracle_cmd->add_flag("--enumerate", enumerate, "Also count strong cyclic policies");

    std::string manifest_path, report_out;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run a benchmark manifest, emit CSV");
    bench_cmd->add_option("manifest", manifest_path, "Manifest file (JSON)")->required();
    bench_cmd->add_option("--out", report_out, "Write the CSV report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0)
            std::cerr << "error: " << e.what() << "\n";
        else
            app.exit(e);  // --help
        return e.get_exit_code() == 0 ? 0 : kExitUsage;
    }

    try {
        if (solve->parsed()) {
            if (task_args.task_json.empty() &&
                (task_args.domain_pddl.empty() || task_args.problem_pddl.empty())) {
                std::cerr << "error: give either --task or a domain and problem file\n";
                return kExitUsage;
            }
            auto h = fond::parse_heuristic(heuristic);
            auto a = fond::parse_aggregator(aggregation);
            if (!h || !a) {
                std::cerr << "error: unknown heuristic or aggregation\n";
                return kExitUsage;
            }
            cfg.heuristic = *h;
            cfg.aggregator = *a;
            cfg.pruning = pruning;
            return cmd_solve(task_args, cfg, policy_out, stats_format, verify, seed, dump_task);
        }
        if (verify_cmd->parsed())
            return cmd_verify(task_args, policy_path, print_cv);
        if (oracle_cmd->parsed())
            return cmd_oracle(task_args, enumerate);
        if (bench_cmd->parsed())
            return cmd_bench(manifest_path, report_out);
    } catch (const fond::pddl::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fond::TaskFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fond::GroundError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fond::BenchFormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
