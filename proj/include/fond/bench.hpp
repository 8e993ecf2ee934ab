#ifndef FOND_BENCH_HPP
#define FOND_BENCH_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fond/ground.hpp"
#include "fond/json_task.hpp"
#include "fond/pddl.hpp"
#include "fond/search.hpp"

namespace fond {

class BenchFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Manifest schema:
//   {
//     "timeout": 300,
//     "tasks": [{"id": "fig2", "domain": "worked-examples", "task": "fig2.json"},
//               {"id": "tt1", "domain": "triangle-tire",
//                "pddl": {"domain": "d.pddl", "problem": "p.pddl"}}],
//     "configs": [{"heuristic": "hmax", "aggregation": "min", "pruning": false}]
//   }
// Paths are resolved relative to the manifest file.
struct BenchTask {
    std::string id;
    std::string domain;  // aggregation group
    FondTask task;
};

struct BenchManifest {
    std::vector<BenchTask> tasks;
    std::vector<SearchConfig> configs;
    double timeout_seconds = 300.0;
};

struct RunRecord {
    std::string task_id;
    std::string domain;
    std::string config;
    SearchStatus outcome = SearchStatus::Unsolved;
    double wall_seconds = 0.0;
    std::uint64_t policy_size = 0;
    ExtNat b_init{0};
    ExtNat b_final{0};
    std::uint64_t iterations = 0;
    std::uint64_t recursive_calls = 0;
    std::string error;  // non-empty when the run aborted outside the search
};

namespace detail {

inline std::string resolve_path(const std::string& base_file, const std::string& relative) {
    if (!relative.empty() && relative[0] == '/')
        return relative;
    auto slash = base_file.find_last_of('/');
    if (slash == std::string::npos)
        return relative;
    return base_file.substr(0, slash + 1) + relative;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw BenchFormatError("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace detail

inline BenchManifest load_manifest(const std::string& path) {
    nlohmann::json doc;
    {
        std::ifstream in(path);
        if (!in)
            throw BenchFormatError("cannot open manifest: " + path);
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw BenchFormatError("invalid JSON in manifest " + path + ": " + e.what());
        }
    }
    BenchManifest manifest;
    if (doc.contains("timeout"))
        manifest.timeout_seconds = doc["timeout"].get<double>();
    for (const auto& entry : doc.at("tasks")) {
        BenchTask bt;
        bt.id = entry.at("id").get<std::string>();
        bt.domain = entry.value("domain", std::string("default"));
        if (entry.contains("task")) {
            bt.task = load_task_file(detail::resolve_path(path, entry["task"].get<std::string>()));
        } else if (entry.contains("pddl")) {
            auto dom = pddl::parse_domain(detail::read_file(
                detail::resolve_path(path, entry["pddl"].at("domain").get<std::string>())));
            auto prob = pddl::parse_problem(
                detail::read_file(
                    detail::resolve_path(path, entry["pddl"].at("problem").get<std::string>())),
                dom);
            bt.task = ground(dom, prob).first;
        } else {
            throw BenchFormatError("manifest task '" + bt.id + "' has neither task nor pddl");
        }
        manifest.tasks.push_back(std::move(bt));
    }
    for (const auto& entry : doc.at("configs")) {
        SearchConfig cfg;
        if (auto h = parse_heuristic(entry.at("heuristic").get<std::string>()))
            cfg.heuristic = *h;
        else
            throw BenchFormatError("unknown heuristic in manifest");
        if (auto a = parse_aggregator(entry.at("aggregation").get<std::string>()))
            cfg.aggregator = *a;
        else
            throw BenchFormatError("unknown aggregation in manifest");
        cfg.pruning = entry.value("pruning", false);
        cfg.timeout_seconds = manifest.timeout_seconds;
        manifest.configs.push_back(cfg);
    }
    return manifest;
}

// One row per (task, config), in manifest order; per-task failures are
// recorded in the row, never aborting the sweep.
inline std::vector<RunRecord> run_benchmark(const BenchManifest& manifest) {
    std::vector<RunRecord> records;
    for (const BenchTask& bt : manifest.tasks) {
        for (const SearchConfig& cfg : manifest.configs) {
            RunRecord rec;
            rec.task_id = bt.id;
            rec.domain = bt.domain;
            rec.config = cfg.name();
            try {
                auto [outcome, stats] = idfs(bt.task, cfg);
                rec.outcome = outcome.status;
                rec.wall_seconds = stats.wall_seconds;
                rec.policy_size = outcome.policy.size();
                rec.b_init = stats.initial_bound;
                rec.b_final = stats.final_bound;
                rec.iterations = stats.iterations;
                rec.recursive_calls = stats.recursive_calls;
            } catch (const std::exception& e) {
                rec.outcome = SearchStatus::ResourceLimit;
                rec.error = e.what();
            }
            records.push_back(std::move(rec));
        }
    }
    return records;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string format_bound(ExtNat b) {
    if (b.is_infinite())
        return "inf";
    return std::to_string(b.value());
}

}  // namespace detail

// CSV report: fixed header, one row per record, then per-domain aggregate
// rows per config. Aggregate means are taken over the intersection of the
// tasks solved under every config, so columns stay comparable across
// configs; the coverage count C is per config.
inline std::string render_csv(const std::vector<RunRecord>& records) {
    std::string out = "task,config,outcome,T,policy_size,b_init,b_final,iterations,calls\n";
    for (const RunRecord& rec : records) {
        out += rec.task_id + "," + rec.config + "," + to_string(rec.outcome) + "," +
               detail::format_double(rec.wall_seconds) + "," +
               (rec.outcome == SearchStatus::Solved ? std::to_string(rec.policy_size) : "") + "," +
               detail::format_bound(rec.b_init) + "," + detail::format_bound(rec.b_final) + "," +
               std::to_string(rec.iterations) + "," + std::to_string(rec.recursive_calls) + "\n";
    }

    // Group by domain, keeping first-appearance order.
    std::vector<std::string> domains;
    std::vector<std::string> configs;
    for (const RunRecord& rec : records) {
        if (std::find(domains.begin(), domains.end(), rec.domain) == domains.end())
            domains.push_back(rec.domain);
        if (std::find(configs.begin(), configs.end(), rec.config) == configs.end())
            configs.push_back(rec.config);
    }
    for (const std::string& domain : domains) {
        // Tasks of this domain solved by every config.
        std::map<std::string, std::uint64_t> solved_count;  // task -> configs solving it
        std::map<std::string, std::uint64_t> seen_count;
        for (const RunRecord& rec : records) {
            if (rec.domain != domain)
                continue;
            seen_count[rec.task_id] += 1;
            if (rec.outcome == SearchStatus::Solved)
                solved_count[rec.task_id] += 1;
        }
        auto in_intersection = [&](const std::string& task_id) {
            return solved_count[task_id] == configs.size();
        };
        for (const std::string& config : configs) {
            std::uint64_t coverage = 0;
            std::uint64_t n = 0;
            double sum_t = 0;
            double sum_size = 0, sum_bi = 0, sum_bf = 0, sum_iter = 0;
            for (const RunRecord& rec : records) {
                if (rec.domain != domain || rec.config != config)
                    continue;
                if (rec.outcome == SearchStatus::Solved)
                    coverage += 1;
                if (!in_intersection(rec.task_id))
                    continue;
                n += 1;
                sum_t += rec.wall_seconds;
                sum_size += static_cast<double>(rec.policy_size);
                sum_bi += static_cast<double>(rec.b_init.value());
                sum_bf += static_cast<double>(rec.b_final.value());
                sum_iter += static_cast<double>(rec.iterations);
            }
            double d = n ? static_cast<double>(n) : 1.0;
            out += domain + "/aggregate," + config + ",C=" + std::to_string(coverage) + "," +
                   detail::format_double(sum_t / d) + "," + detail::format_double(sum_size / d) +
                   "," + detail::format_double(sum_bi / d) + "," +
                   detail::format_double(sum_bf / d) + "," + detail::format_double(sum_iter / d) +
                   ",\n";
        }
    }
    return out;
}

}  // namespace fond

#endif
