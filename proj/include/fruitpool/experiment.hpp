// Copyright (c) 2026 The fruitpool developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef FRUITPOOL_EXPERIMENT_HPP
#define FRUITPOOL_EXPERIMENT_HPP

#include <fruitpool/accounting.hpp>
#include <fruitpool/analysis.hpp>
#include <fruitpool/engine.hpp>

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fruitpool {

struct SuiteEntry {
    std::string name;
    Strategy strategy;
    std::optional<RunMode> mode;
    std::optional<PoolVariant> variant;
};

struct ExperimentSpec {
    ExecutionConfig base;
    std::vector<std::uint64_t> seeds;
    std::vector<SuiteEntry> suite;
    /** Suite entry whose U^min is the reference; must be present. */
    std::string baseline = "H_C";
    double delta = 0.5;
    double epsilon = 0;
    LogBase log_base = LogBase::two;
    RewardOptions reward;
    std::string out_dir = "out";
    std::string csv = "summary.csv";
    std::string verdict = "verdict.json";
    bool write_transcripts = false;
};

/** YAML text to a spec; ConfigError messages carry "origin:line:". */
ExperimentSpec parse_experiment(const std::string& text, const std::string& origin = "<spec>");
ExperimentSpec load_experiment(const std::string& path);
/** Only the params block (top-level or under "params"). */
ProtocolParams load_params(const std::string& path);

/** "1,2,5" or "1..25" (inclusive). */
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

struct RunRow {
    std::string strategy;
    std::uint64_t seed = 0;
    Amount u_min;
    Amount u_max;
    Statistics stats;
    bool otx_respecting = false;
    std::string hash;
    Amount baseline_u_min;
    bool verdict = false;
    nlohmann::json summary;
};

struct BatchResult {
    std::vector<RunRow> rows;
    BoundReport bounds;
    bool all_pass = true;
};

/** Worker count from FRUITPOOL_WORKERS, else hardware concurrency, at least 1. */
unsigned worker_count();

/** Runs fn(i) for i in [0, count) on a worker pool; rethrows the first exception. */
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned workers = 0);

/** Every (strategy, seed) pair; rows sorted by (strategy, seed). */
BatchResult run_experiment(const ExperimentSpec& spec);

std::string batch_csv(const BatchResult& r);
nlohmann::json verdict_json(const ExperimentSpec& spec, const BatchResult& r);

/** Decimal rendering with a fixed number of places, rounded half away from zero. */
std::string amount_decimal(const Amount& a, int places = 6);

struct ReplayReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/** Quotas, cost meter, chain validity, payment arithmetic and honest-view agreement. */
ReplayReport validate_transcript(const Transcript& t);

/** Subcommands; return the process exit code. */
int cmd_run(const std::string& spec_path, const std::optional<std::string>& seeds,
            const std::optional<std::string>& out_dir, const std::optional<double>& delta,
            const std::optional<std::string>& log_base);
int cmd_bounds(const std::string& params_path, const std::optional<double>& delta,
               const std::optional<std::string>& log_base);
int cmd_replay(const std::string& transcript_path, bool rerun);

} // namespace fruitpool

#endif // FRUITPOOL_EXPERIMENT_HPP
