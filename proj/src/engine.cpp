#include "phasenas/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "phasenas/boa.hpp"
#include "phasenas/config.hpp"
#include "phasenas/dedup.hpp"
#include "phasenas/metrics.hpp"
#include "phasenas/moea.hpp"
#include "phasenas/rng.hpp"

namespace phasenas {

namespace fs = std::filesystem;

void SearchConfig::validate() const
{
    encoding.validate();
    if (population_size < 4 || population_size % 2 != 0)
        throw std::invalid_argument("config: population_size must be even and >= 4");
    if (exploration_generations < 0 || exploitation_generations < 0)
        throw std::invalid_argument("config: generation counts must be >= 0");
    if (p_c < 0.0 || p_c > 1.0 || p_m < 0.0 || p_m > 1.0)
        throw std::invalid_argument("config: probabilities must lie in [0,1]");
    if (dedup_retry_limit < 0)
        throw std::invalid_argument("config: dedup_retry_limit must be >= 0");
    if (survival_rate_switch_threshold &&
        (*survival_rate_switch_threshold < 0.0 || *survival_rate_switch_threshold > 1.0))
        throw std::invalid_argument("config: survival threshold must lie in [0,1]");
    if (static_cast<int>(seed_genomes.size()) > population_size)
        throw std::invalid_argument("config: more seed genomes than population slots");
    if (evaluator != "surrogate" && evaluator != "external")
        throw std::invalid_argument("config: evaluator must be surrogate or external");
    if (evaluator == "external" && external_cmd.empty())
        throw std::invalid_argument("config: external evaluator requires external_cmd");
    if (external_timeout_s <= 0.0)
        throw std::invalid_argument("config: external_timeout_s must be positive");
    if (bn_alpha < 0.0) throw std::invalid_argument("config: bn_alpha must be >= 0");
    if (bn_front_rank && *bn_front_rank < 1)
        throw std::invalid_argument("config: bn_front_rank must be >= 1");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (halt_after && out_dir.empty())
        throw std::invalid_argument("config: halt_after requires an output directory");
    if (halt_after && *halt_after < 0)
        throw std::invalid_argument("config: halt_after must be >= 0");
}

std::string format_double(double v)
{
    // shortest decimal that parses back to the same bits
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

bool SearchArchive::push(ArchiveRecord record)
{
    if (index_.contains(record.network_key)) return false;
    index_.emplace(record.network_key, records_.size());
    records_.push_back(std::move(record));
    return true;
}

std::vector<ArchiveRecord> nondominated_subset(const SearchArchive& archive)
{
    std::vector<ArchiveRecord> front;
    if (archive.empty()) return front;
    std::vector<std::vector<double>> points;
    points.reserve(archive.size());
    for (const auto& r : archive.records()) points.push_back(r.objectives.values());
    auto fronts = moea::fast_nondominated_sort(points);
    std::sort(fronts[0].begin(), fronts[0].end()); // archive insertion order
    front.reserve(fronts[0].size());
    for (std::size_t i : fronts[0]) front.push_back(archive.at(i));
    return front;
}

std::string trace_csv(const std::vector<TraceRow>& trace)
{
    std::ostringstream os;
    os << "generation,stage,hv,normalized_hv,survival_rate,evaluations_so_far\n";
    for (const auto& row : trace) {
        os << row.generation << ',' << row.stage << ',' << format_double(row.hv) << ','
           << format_double(row.normalized_hv) << ',';
        if (row.survival_rate) os << format_double(*row.survival_rate);
        os << ',' << row.evaluations_so_far << "\n";
    }
    return os.str();
}

std::string archive_csv(const SearchArchive& archive)
{
    std::ostringstream os;
    os << "genome,key,error,flops,generation,stage\n";
    for (const auto& r : archive.records()) {
        os << format_genome(r.genome) << ',' << dedup::key_digest_hex(r.network_key) << ','
           << format_double(r.objectives.error) << ',' << format_double(r.objectives.complexity)
           << ',' << r.generation << ',' << r.stage << "\n";
    }
    return os.str();
}

std::string front_csv(const std::vector<ArchiveRecord>& front)
{
    std::ostringstream os;
    os << "genome,key,error,flops\n";
    for (const auto& r : front) {
        os << format_genome(r.genome) << ',' << dedup::key_digest_hex(r.network_key) << ','
           << format_double(r.objectives.error) << ',' << format_double(r.objectives.complexity)
           << "\n";
    }
    return os.str();
}

namespace {

constexpr int kCheckpointVersion = 1;
constexpr double kReferenceEps = 0.01;

struct Individual {
    NetworkGenome genome;
    std::vector<dedup::CanonicalPhaseKey> phase_keys;
    std::string key;
    ObjectiveVector objectives;
    std::uint64_t id = 0;
};

void write_text_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw EngineError("cannot write file " + path.string());
    out << content;
}

std::vector<std::string> split_command(const std::string& cmd)
{
    std::vector<std::string> parts;
    std::istringstream is(cmd);
    std::string token;
    while (is >> token) parts.push_back(token);
    return parts;
}

class Engine {
public:
    explicit Engine(const SearchConfig& cfg) : cfg_(cfg), rng_(cfg.seed)
    {
        cfg_.validate();
    }

    Engine(const SearchConfig& cfg, const nlohmann::json& state)
        : cfg_(cfg), rng_(cfg.seed)
    {
        cfg_.validate();
        restore(state);
    }

    SearchResult run()
    {
        make_evaluator();
        if (!initialized_) {
            initialize();
            write_checkpoint(false);
        }
        if (halted()) return make_result(false);

        while (explore_done_ < cfg_.exploration_generations && !switch_early_) {
            exploration_generation();
            write_checkpoint(false);
            if (halted()) return make_result(false);
        }
        while (exploit_done_ < cfg_.exploitation_generations) {
            exploitation_generation();
            write_checkpoint(false);
            if (halted()) return make_result(false);
        }
        SearchResult result = make_result(true);
        write_checkpoint(true);
        if (!cfg_.out_dir.empty()) write_run_directory(result);
        return result;
    }

    SearchResult run_random()
    {
        make_evaluator();
        const std::uint64_t budget = cfg_.evaluation_budget();
        if (budget == 0) throw EngineError("random search: zero evaluation budget, empty front");
        random_mode_ = true;
        while (random_done_ < budget) {
            const int batch_size = static_cast<int>(
                std::min<std::uint64_t>(budget - random_done_,
                                        static_cast<std::uint64_t>(cfg_.population_size)));
            random_batch(batch_size);
            write_checkpoint(false);
            if (halted()) return make_result(false);
        }
        SearchResult result = make_result(true);
        write_checkpoint(true);
        if (!cfg_.out_dir.empty()) write_run_directory(result);
        return result;
    }

    SearchResult stored_result()
    {
        return make_result(true);
    }

    void restore(const nlohmann::json& state)
    {
        Rng::state_type rng_state{};
        const auto& words = state.at("rng");
        for (std::size_t i = 0; i < 4; ++i)
            rng_state[i] = std::stoull(words.at(i).get<std::string>(), nullptr, 16);
        rng_.set_state(rng_state);
        next_id_ = state.at("next_id").get<std::uint64_t>();
        explore_done_ = state.at("explore_done").get<int>();
        exploit_done_ = state.at("exploit_done").get<int>();
        random_done_ = state.at("random_done").get<std::uint64_t>();
        random_mode_ = state.at("mode").get<std::string>() == "random";
        switch_early_ = state.at("switch_early").get<bool>();
        initialized_ = state.at("initialized").get<bool>();
        offspring_created_ = state.at("offspring_created").get<std::uint64_t>();
        for (const auto& [stage, n] : state.at("offspring_by_stage").items())
            offspring_by_stage_[stage] = n.get<std::uint64_t>();
        base_calls_ = state.at("evaluator_calls").get<std::uint64_t>();

        for (const auto& rec : state.at("archive")) {
            const auto genome = parse_genome(rec.at("genome").get<std::string>(), cfg_.encoding);
            ArchiveRecord record;
            record.genome = genome;
            record.phase_keys = dedup::canonical_network(genome);
            record.network_key = dedup::join_network_key(record.phase_keys);
            record.objectives.error = rec.at("error").get<double>();
            record.objectives.complexity = rec.at("complexity").get<double>();
            record.generation = rec.at("generation").get<int>();
            record.stage = rec.at("stage").get<std::string>();
            cache_.insert(record.network_key, record.objectives, cfg_.evaluator);
            archive_.push(std::move(record));
        }
        for (const auto& ind : state.at("population")) {
            Individual individual;
            individual.genome = parse_genome(ind.at("genome").get<std::string>(), cfg_.encoding);
            individual.phase_keys = dedup::canonical_network(individual.genome);
            individual.key = dedup::join_network_key(individual.phase_keys);
            individual.objectives.error = ind.at("error").get<double>();
            individual.objectives.complexity = ind.at("complexity").get<double>();
            individual.id = ind.at("id").get<std::uint64_t>();
            population_.push_back(std::move(individual));
        }
        for (const auto& row : state.at("trace")) {
            TraceRow trace_row;
            trace_row.generation = row.at("generation").get<int>();
            trace_row.stage = row.at("stage").get<std::string>();
            trace_row.hv = row.at("hv").get<double>();
            trace_row.normalized_hv = row.at("normalized_hv").get<double>();
            if (!row.at("survival_rate").is_null())
                trace_row.survival_rate = row.at("survival_rate").get<double>();
            trace_row.evaluations_so_far = row.at("evaluations_so_far").get<std::uint64_t>();
            trace_.push_back(std::move(trace_row));
        }
        for (const auto& line : state.at("log")) log_.push_back(line.get<std::string>());
    }

private:
    void make_evaluator()
    {
        if (evaluator_) return;
        if (cfg_.evaluator == "external") {
            evaluator_ = std::make_unique<ExternalEvaluator>(
                split_command(cfg_.external_cmd),
                static_cast<long>(cfg_.external_timeout_s * 1000.0), cfg_.seed);
        } else {
            evaluator_ = std::make_unique<SurrogateEvaluator>(cfg_.surrogate);
        }
    }

    Individual wrap(NetworkGenome g)
    {
        Individual individual;
        individual.phase_keys = dedup::canonical_network(g);
        individual.key = dedup::join_network_key(individual.phase_keys);
        individual.genome = std::move(g);
        individual.id = next_id_++;
        return individual;
    }

    std::uint64_t evaluations_total() const { return base_calls_ + cache_.evaluations(); }

    int generations_completed() const
    {
        return random_mode_ ? static_cast<int>(trace_.size()) : explore_done_ + exploit_done_;
    }

    bool halted() const
    {
        return cfg_.halt_after && generations_completed() >= *cfg_.halt_after;
    }

    // ---- evaluation -----------------------------------------------------

    void evaluate_batch(std::vector<Individual>& batch,
                        std::vector<std::exception_ptr>& failures)
    {
        failures.assign(batch.size(), nullptr);
        const auto evaluate_one = [&](std::size_t i) {
            try {
                batch[i].objectives = evaluate_with_cache_keyed(
                    batch[i].key, batch[i].genome, cfg_.encoding, *evaluator_, cache_);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        };
#ifdef _OPENMP
        if (cfg_.workers > 1) {
            #pragma omp parallel for schedule(dynamic) num_threads(cfg_.workers)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(batch.size()); ++i)
                evaluate_one(static_cast<std::size_t>(i));
            return;
        }
#endif
        for (std::size_t i = 0; i < batch.size(); ++i) evaluate_one(i);
    }

    // Evaluates the batch, replacing offspring whose evaluation failed with
    // freshly generated ones (failed evaluations are discarded, never
    // archived). Gives up after the retry budget and aborts with a
    // checkpoint on disk.
    void evaluate_or_replace(std::vector<Individual>& batch,
                             const std::function<NetworkGenome()>& regenerate)
    {
        std::vector<std::exception_ptr> failures;
        evaluate_batch(batch, failures);
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (!failures[i]) continue;
            bool recovered = false;
            std::string last_error = describe(failures[i]);
            for (int attempt = 0; attempt <= cfg_.dedup_retry_limit; ++attempt) {
                Individual replacement = wrap(regenerate());
                try {
                    replacement.objectives = evaluate_with_cache_keyed(
                        replacement.key, replacement.genome, cfg_.encoding, *evaluator_, cache_);
                    batch[i] = std::move(replacement);
                    recovered = true;
                    break;
                } catch (const std::exception& e) {
                    last_error = e.what();
                }
            }
            if (!recovered) {
                write_checkpoint(false);
                throw EngineError("evaluation failed beyond the retry budget: " + last_error);
            }
        }
    }

    static std::string describe(const std::exception_ptr& ep)
    {
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            return e.what();
        } catch (...) {
            return "unknown error";
        }
    }

    // ---- bookkeeping ----------------------------------------------------

    void archive_batch(const std::vector<Individual>& batch, int generation,
                       const std::string& stage)
    {
        for (const auto& individual : batch) {
            ArchiveRecord record;
            record.genome = individual.genome;
            record.phase_keys = individual.phase_keys;
            record.network_key = individual.key;
            record.objectives = individual.objectives;
            record.generation = generation;
            record.stage = stage;
            archive_.push(std::move(record));
        }
    }

    void trace_generation(int generation, const std::string& stage,
                          std::optional<double> survival)
    {
        double error_hi = 0.0;
        double complexity_hi = 0.0;
        for (const auto& r : archive_.records()) {
            error_hi = std::max(error_hi, r.objectives.error);
            complexity_hi = std::max(complexity_hi, r.objectives.complexity);
        }
        const auto front = nondominated_subset(archive_);
        std::vector<ObjectiveVector> points;
        points.reserve(front.size());
        for (const auto& r : front) points.push_back(r.objectives);

        // lower bounds anchored at the ideal point so that growing the
        // archive can only shrink normalized coordinates; this keeps the
        // normalized-HV trace non-decreasing
        metrics::ObjectiveBounds bounds{0.0, error_hi, 0.0, complexity_hi};
        const double norm = metrics::normalized_hv(points, bounds, kReferenceEps);
        const ObjectiveVector ref{(1.0 + kReferenceEps) * error_hi,
                                  (1.0 + kReferenceEps) * complexity_hi};
        const double raw = metrics::hypervolume_2d(points, ref);

        TraceRow row;
        row.generation = generation;
        row.stage = stage;
        row.hv = raw;
        row.normalized_hv = norm;
        row.survival_rate = survival;
        row.evaluations_so_far = evaluations_total();
        trace_.push_back(row);

        std::ostringstream log;
        log << "gen=" << generation << " stage=" << stage << " bounds_error=[0,"
            << format_double(error_hi) << "] bounds_flops=[0," << format_double(complexity_hi)
            << "] ref=(" << format_double(ref.error) << ',' << format_double(ref.complexity)
            << ") archive=" << archive_.size() << " evaluations=" << evaluations_total();
        if (survival) log << " survival=" << format_double(*survival);
        log_.push_back(log.str());
    }

    // ---- stages ----------------------------------------------------------

    void initialize()
    {
        std::vector<Individual> batch;
        std::unordered_set<std::string> seen;
        for (const auto& text : cfg_.seed_genomes) {
            Individual individual = wrap(parse_genome(text, cfg_.encoding));
            seen.insert(individual.key);
            batch.push_back(std::move(individual));
        }
        const auto fresh_unique = [&]() {
            NetworkGenome g = random_genome(rng_, cfg_.encoding);
            for (int attempt = 0; attempt < cfg_.dedup_retry_limit; ++attempt) {
                if (!seen.contains(dedup::canonical_network_key(g))) break;
                g = random_genome(rng_, cfg_.encoding);
            }
            return g;
        };
        while (static_cast<int>(batch.size()) < cfg_.population_size) {
            Individual individual = wrap(fresh_unique());
            seen.insert(individual.key);
            batch.push_back(std::move(individual));
        }
        evaluate_or_replace(batch, fresh_unique);
        archive_batch(batch, 0, "initialization");
        population_ = std::move(batch);
        initialized_ = true;
        trace_generation(0, "initialization", std::nullopt);
    }

    std::vector<std::vector<double>> population_points() const
    {
        std::vector<std::vector<double>> points;
        points.reserve(population_.size());
        for (const auto& individual : population_) points.push_back(individual.objectives.values());
        return points;
    }

    NetworkGenome make_child(const moea::Ranking& ranking, std::size_t parent_a,
                             std::size_t parent_b)
    {
        (void)ranking;
        const NetworkGenome& a = population_[parent_a].genome;
        const NetworkGenome& b = population_[parent_b].genome;
        NetworkGenome child;
        if (cfg_.disable_crossover) {
            child = a;
        } else if (rng_.bernoulli(cfg_.p_c)) {
            child = crossover(a, b, rng_, cfg_.crossover_scope);
        } else {
            child = (rng_.next() & 1u) ? a : b;
        }
        return mutate(child, rng_, cfg_.p_m);
    }

    // offspring creation with duplicate rejection against the archive;
    // beyond the retry limit the duplicate is admitted and resolved from
    // the cache
    NetworkGenome dedup_retry(const std::function<NetworkGenome()>& maker)
    {
        NetworkGenome g = maker();
        for (int attempt = 0; attempt < cfg_.dedup_retry_limit; ++attempt) {
            if (!archive_.contains(dedup::canonical_network_key(g))) break;
            g = maker();
        }
        return g;
    }

    void select_survivors(std::vector<Individual>& offspring, int generation,
                          const std::string& stage)
    {
        archive_batch(offspring, generation, stage);
        offspring_created_ += offspring.size();
        offspring_by_stage_[stage] += offspring.size();

        std::vector<Individual> combined = std::move(population_);
        std::vector<std::uint64_t> offspring_ids;
        offspring_ids.reserve(offspring.size());
        for (auto& individual : offspring) {
            offspring_ids.push_back(individual.id);
            combined.push_back(std::move(individual));
        }
        std::vector<std::vector<double>> points;
        points.reserve(combined.size());
        for (const auto& individual : combined) points.push_back(individual.objectives.values());
        const auto survivors =
            moea::environmental_selection(points, static_cast<std::size_t>(cfg_.population_size));

        std::unordered_set<std::uint64_t> survivor_ids;
        std::vector<Individual> next;
        next.reserve(survivors.size());
        for (std::size_t idx : survivors) {
            survivor_ids.insert(combined[idx].id);
            next.push_back(std::move(combined[idx]));
        }
        population_ = std::move(next);

        const auto survival = metrics::survival_rate(offspring_ids, survivor_ids);
        trace_generation(generation, stage, survival);
    }

    void exploration_generation()
    {
        const int generation = explore_done_ + exploit_done_ + 1;
        const auto ranking = moea::rank_population(population_points());
        // mating pool of population_size tournament winners, ring-paired;
        // retries draw fresh parents
        std::vector<std::size_t> pool;
        pool.reserve(static_cast<std::size_t>(cfg_.population_size));
        for (int i = 0; i < cfg_.population_size; ++i)
            pool.push_back(moea::tournament_select(ranking, population_.size(), rng_));

        std::vector<Individual> offspring;
        offspring.reserve(static_cast<std::size_t>(cfg_.population_size));
        for (int slot = 0; slot < cfg_.population_size; ++slot) {
            bool first = true;
            const auto maker = [&]() {
                std::size_t a;
                std::size_t b;
                if (first) {
                    a = pool[static_cast<std::size_t>(slot)];
                    b = pool[static_cast<std::size_t>((slot + 1) % cfg_.population_size)];
                    first = false;
                } else {
                    a = moea::tournament_select(ranking, population_.size(), rng_);
                    b = moea::tournament_select(ranking, population_.size(), rng_);
                }
                return make_child(ranking, a, b);
            };
            offspring.push_back(wrap(dedup_retry(maker)));
        }
        const auto regenerate = [&]() {
            const auto maker = [&]() {
                const std::size_t a = moea::tournament_select(ranking, population_.size(), rng_);
                const std::size_t b = moea::tournament_select(ranking, population_.size(), rng_);
                return make_child(ranking, a, b);
            };
            return dedup_retry(maker);
        };
        evaluate_or_replace(offspring, regenerate);
        select_survivors(offspring, generation, "exploration");
        ++explore_done_;

        if (cfg_.survival_rate_switch_threshold && trace_.back().survival_rate &&
            *trace_.back().survival_rate <= *cfg_.survival_rate_switch_threshold &&
            explore_done_ < cfg_.exploration_generations) {
            switch_early_ = true;
            log_.push_back("survival rate " + format_double(*trace_.back().survival_rate) +
                           " <= threshold; switching to exploitation after generation " +
                           std::to_string(generation));
        }
    }

    void exploitation_generation()
    {
        const int generation = explore_done_ + exploit_done_ + 1;
        const auto bn = boa::fit_bn(archive_, cfg_.bn_alpha, cfg_.bn_front_rank);
        const auto maker = [&]() {
            NetworkGenome g = cfg_.exploitation_sampler == ExploitationSampler::uniform
                                  ? random_genome(rng_, cfg_.encoding)
                                  : std::move(boa::sample_bn(bn, rng_, 1).front());
            if (cfg_.bn_mutate) g = mutate(g, rng_, cfg_.p_m);
            return g;
        };
        std::vector<Individual> offspring;
        offspring.reserve(static_cast<std::size_t>(cfg_.population_size));
        for (int slot = 0; slot < cfg_.population_size; ++slot)
            offspring.push_back(wrap(dedup_retry(maker)));
        const auto regenerate = [&]() { return dedup_retry(maker); };
        evaluate_or_replace(offspring, regenerate);
        select_survivors(offspring, generation, "exploitation");
        ++exploit_done_;
    }

    void random_batch(int batch_size)
    {
        const int generation = static_cast<int>(trace_.size());
        std::vector<Individual> batch;
        batch.reserve(static_cast<std::size_t>(batch_size));
        std::unordered_set<std::string> batch_keys; // batch is not archived yet
        const auto fresh_unique = [&]() {
            // random search evaluates unique genomes only
            constexpr int kAttemptCap = 100000;
            for (int attempt = 0; attempt < kAttemptCap; ++attempt) {
                NetworkGenome g = random_genome(rng_, cfg_.encoding);
                const std::string key = dedup::canonical_network_key(g);
                if (!archive_.contains(key) && !batch_keys.contains(key)) return g;
            }
            throw EngineError("random search: could not sample a new unique genome");
        };
        for (int i = 0; i < batch_size; ++i) {
            Individual individual = wrap(fresh_unique());
            batch_keys.insert(individual.key);
            batch.push_back(std::move(individual));
        }
        const auto regenerate = [&]() {
            NetworkGenome g = fresh_unique();
            batch_keys.insert(dedup::canonical_network_key(g));
            return g;
        };
        evaluate_or_replace(batch, regenerate);
        archive_batch(batch, generation, "random");
        offspring_created_ += static_cast<std::uint64_t>(batch_size);
        offspring_by_stage_["random"] += static_cast<std::uint64_t>(batch_size);
        random_done_ += static_cast<std::uint64_t>(batch_size);
        trace_generation(generation, "random", std::nullopt);
    }

    // ---- results & persistence -------------------------------------------

    SearchResult make_result(bool completed)
    {
        SearchResult result;
        result.config = cfg_;
        result.archive = archive_;
        result.front = nondominated_subset(archive_);
        result.trace = trace_;
        result.offspring_created = offspring_created_;
        result.offspring_by_stage = offspring_by_stage_;
        result.evaluator_calls = evaluations_total();
        result.completed = completed;
        result.log = log_;
        return result;
    }

    void write_checkpoint(bool completed)
    {
        if (cfg_.out_dir.empty()) return;
        fs::create_directories(cfg_.out_dir);
        nlohmann::json state;
        state["format_version"] = kCheckpointVersion;
        state["mode"] = random_mode_ ? "random" : "search";
        state["completed"] = completed;
        state["config"] = config_echo(cfg_);
        nlohmann::json rng_words = nlohmann::json::array();
        for (auto word : rng_.state()) rng_words.push_back(dedup::digest_hex(word));
        state["rng"] = rng_words;
        state["next_id"] = next_id_;
        state["explore_done"] = explore_done_;
        state["exploit_done"] = exploit_done_;
        state["random_done"] = random_done_;
        state["switch_early"] = switch_early_;
        state["initialized"] = initialized_;
        state["offspring_created"] = offspring_created_;
        state["offspring_by_stage"] = offspring_by_stage_;
        state["evaluator_calls"] = evaluations_total();

        nlohmann::json archive_json = nlohmann::json::array();
        for (const auto& r : archive_.records())
            archive_json.push_back({{"genome", format_genome(r.genome)},
                                    {"error", r.objectives.error},
                                    {"complexity", r.objectives.complexity},
                                    {"generation", r.generation},
                                    {"stage", r.stage}});
        state["archive"] = std::move(archive_json);

        nlohmann::json population_json = nlohmann::json::array();
        for (const auto& individual : population_)
            population_json.push_back({{"genome", format_genome(individual.genome)},
                                       {"error", individual.objectives.error},
                                       {"complexity", individual.objectives.complexity},
                                       {"id", individual.id}});
        state["population"] = std::move(population_json);

        nlohmann::json trace_json = nlohmann::json::array();
        for (const auto& row : trace_) {
            nlohmann::json j = {{"generation", row.generation},
                                {"stage", row.stage},
                                {"hv", row.hv},
                                {"normalized_hv", row.normalized_hv},
                                {"evaluations_so_far", row.evaluations_so_far}};
            if (row.survival_rate) j["survival_rate"] = *row.survival_rate;
            else j["survival_rate"] = nullptr;
            trace_json.push_back(std::move(j));
        }
        state["trace"] = std::move(trace_json);
        state["log"] = log_;

        const fs::path path = fs::path(cfg_.out_dir) / "checkpoint.json";
        const fs::path tmp = fs::path(cfg_.out_dir) / "checkpoint.json.tmp";
        write_text_file(tmp, state.dump(2) + "\n");
        fs::rename(tmp, path);
    }

    SearchConfig cfg_;
    Rng rng_;
    std::unique_ptr<Evaluator> evaluator_;
    ObjectiveCache cache_;
    std::uint64_t base_calls_ = 0;
    SearchArchive archive_;
    std::vector<Individual> population_;
    std::vector<TraceRow> trace_;
    std::vector<std::string> log_;
    std::uint64_t next_id_ = 1;
    std::uint64_t offspring_created_ = 0;
    std::map<std::string, std::uint64_t> offspring_by_stage_;
    int explore_done_ = 0;
    int exploit_done_ = 0;
    std::uint64_t random_done_ = 0;
    bool random_mode_ = false;
    bool switch_early_ = false;
    bool initialized_ = false;
};

} // namespace

SearchResult run_search(const SearchConfig& cfg)
{
    Engine engine(cfg);
    return engine.run();
}

SearchResult run_random_search(const SearchConfig& cfg)
{
    Engine engine(cfg);
    return engine.run_random();
}

SearchResult resume_search(const std::string& checkpoint_path,
                           const std::optional<SearchConfig>& expected,
                           const std::optional<std::string>& out_dir_override)
{
    std::ifstream in(checkpoint_path);
    if (!in) throw CheckpointError("checkpoint: cannot read " + checkpoint_path);
    nlohmann::json state = nlohmann::json::parse(in, nullptr, false);
    if (state.is_discarded()) throw CheckpointError("checkpoint: corrupt JSON");
    if (!state.contains("format_version") ||
        state["format_version"].get<int>() != kCheckpointVersion)
        throw CheckpointError("checkpoint: unsupported format version");

    SearchConfig cfg = build_search_config(parse_config_text(state.at("config").get<std::string>()));
    if (expected && !structurally_equal(cfg, *expected))
        throw CheckpointError("checkpoint: config mismatch with the requested settings");
    cfg.halt_after.reset(); // a resumed run continues to completion
    if (out_dir_override) cfg.out_dir = *out_dir_override;

    Engine engine(cfg, state);
    if (state.at("completed").get<bool>()) {
        SearchResult result = engine.stored_result();
        if (!cfg.out_dir.empty()) write_run_directory(result);
        return result;
    }
    return state.at("mode").get<std::string>() == "random" ? engine.run_random() : engine.run();
}

void write_run_directory(const SearchResult& result)
{
    if (result.config.out_dir.empty())
        throw EngineError("write_run_directory: no output directory configured");
    const fs::path dir(result.config.out_dir);
    fs::create_directories(dir);
    write_text_file(dir / "config.cfg", config_echo(result.config));
    write_text_file(dir / "trace.csv", trace_csv(result.trace));
    write_text_file(dir / "archive.csv", archive_csv(result.archive));
    write_text_file(dir / "front.csv", front_csv(result.front));
    std::string log_text;
    for (const auto& line : result.log) log_text += line + "\n";
    std::ostringstream stats;
    stats << "offspring_created=" << result.offspring_created << "\n";
    for (const auto& [stage, n] : result.offspring_by_stage)
        stats << "offspring_" << stage << "=" << n << "\n";
    stats << "evaluator_calls=" << result.evaluator_calls << "\n";
    stats << "archive_size=" << result.archive.size() << "\n";
    stats << "completed=" << (result.completed ? 1 : 0) << "\n";
    write_text_file(dir / "stats.txt", stats.str());
    write_text_file(dir / "run.log", log_text);
    for (std::size_t i = 0; i < result.front.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "front_%03zu.dot", i + 1);
        const auto arch = decode_network(result.front[i].genome, result.config.encoding);
        write_text_file(dir / name, export_architecture_dot(arch));
    }
}

} // namespace phasenas
