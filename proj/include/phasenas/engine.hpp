#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasenas/archive.hpp"
#include "phasenas/encoding.hpp"
#include "phasenas/evaluators.hpp"
#include "phasenas/operators.hpp"

namespace phasenas {

enum class ExploitationSampler { bn, uniform };

struct SearchConfig {
    EncodingConfig encoding;

    int population_size = 40;
    int exploration_generations = 20;
    int exploitation_generations = 10;
    double p_c = 0.9;
    double p_m = 0.02;
    std::uint64_t seed = 0;

    int dedup_retry_limit = 10;
    std::optional<double> survival_rate_switch_threshold;
    std::vector<std::string> seed_genomes;

    // ablations
    bool disable_crossover = false;
    ExploitationSampler exploitation_sampler = ExploitationSampler::bn;
    bool random_search_mode = false;

    CrossoverScope crossover_scope = CrossoverScope::genome;
    double bn_alpha = 1.0;
    bool bn_mutate = false;
    std::optional<int> bn_front_rank;

    std::string evaluator = "surrogate"; // surrogate | external
    SurrogateParams surrogate;
    std::string external_cmd;
    double external_timeout_s = 3600.0;

    int workers = 1;
    std::string out_dir;             // empty: no files written
    std::optional<int> halt_after;   // stop after N completed generations

    void validate() const;

    // evaluation budget of a full run: initialization plus one batch per
    // generation
    std::uint64_t evaluation_budget() const
    {
        return static_cast<std::uint64_t>(population_size) *
               static_cast<std::uint64_t>(1 + exploration_generations +
                                          exploitation_generations);
    }
};

struct TraceRow {
    int generation = 0;
    std::string stage;
    double hv = 0.0;
    double normalized_hv = 0.0;
    std::optional<double> survival_rate;
    std::uint64_t evaluations_so_far = 0;
};

struct SearchResult {
    SearchConfig config;
    SearchArchive archive;
    std::vector<ArchiveRecord> front; // non-dominated subset of the archive
    std::vector<TraceRow> trace;
    std::vector<std::string> log; // per-generation bounds and events
    std::uint64_t offspring_created = 0;
    std::map<std::string, std::uint64_t> offspring_by_stage;
    std::uint64_t evaluator_calls = 0;
    bool completed = true;
};

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two-stage search: uniform initialization, exploration generations driven
// by tournament selection, crossover and mutation, then exploitation
// generations creating offspring by sampling a chain Bayesian network
// fitted on the full archive. Deterministic for a fixed seed and
// evaluator.
SearchResult run_search(const SearchConfig& cfg);

// Same evaluation budget spent on uniformly sampled unique genomes.
SearchResult run_random_search(const SearchConfig& cfg);

// Continues a checkpointed run; the final result equals an uninterrupted
// run with the same seed. When `expected` is given, its settings must
// match the checkpointed config. A completed checkpoint returns the stored
// result without re-evaluation.
SearchResult resume_search(const std::string& checkpoint_path,
                           const std::optional<SearchConfig>& expected = std::nullopt,
                           const std::optional<std::string>& out_dir_override = std::nullopt);

// run-directory serialization helpers, also used by the CLI
std::string trace_csv(const std::vector<TraceRow>& trace);
std::string archive_csv(const SearchArchive& archive);
std::string front_csv(const std::vector<ArchiveRecord>& front);
std::vector<ArchiveRecord> nondominated_subset(const SearchArchive& archive);
void write_run_directory(const SearchResult& result);
std::string format_double(double v); // shortest lossless decimal

} // namespace phasenas
