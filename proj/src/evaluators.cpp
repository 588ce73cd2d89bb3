#include "phasenas/evaluators.hpp"

#include <algorithm>
#include <cmath>

#include "phasenas/complexity.hpp"
#include "phasenas/dedup.hpp"

#include <json.hpp>

namespace phasenas {

double surrogate_error(const NetworkGenome& g, const NetworkArchitecture& a,
                       const SurrogateParams& params)
{
    const auto [nodes, connections] = count_structure(a);
    (void)nodes;
    const double per_phase_max = a.node_capacity * (a.node_capacity - 1) / 2.0 + 2.0;
    const double max_connections = per_phase_max * static_cast<double>(a.phase_graphs.size());
    const double u = max_connections > 0.0 ? connections / max_connections : 0.0;

    // keyed perturbation: uniform in [-rho, rho), identical for genomes
    // that decode to the same architecture
    const std::uint64_t h = dedup::fnv1a64(dedup::canonical_network_key(g));
    const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;
    const double eta = params.rho * (2.0 * unit - 1.0);

    const double error =
        params.e_min + (params.e_max - params.e_min) * std::exp(-params.beta * u) + eta;
    return std::clamp(error, 0.0, 1.0);
}

namespace {

nlohmann::json architecture_json(const NetworkArchitecture& a)
{
    nlohmann::json phases = nlohmann::json::array();
    for (std::size_t p = 0; p < a.phase_graphs.size(); ++p) {
        const auto& g = a.phase_graphs[p];
        nlohmann::json edges = nlohmann::json::array();
        for (const auto& [from, to] : g.edges) edges.push_back({from, to});
        phases.push_back({{"resolution", a.resolutions[p]},
                          {"nodes", g.active_nodes},
                          {"edges", edges},
                          {"input", g.input_attached},
                          {"output", g.output_attached},
                          {"skip", g.skip}});
    }
    return {{"input_channels", a.input_channels},
            {"channel_width", a.channel_width},
            {"node_operation", NetworkArchitecture::node_operation},
            {"phases", phases}};
}

} // namespace

ExternalEvaluator::ExternalEvaluator(std::vector<std::string> command, long timeout_ms,
                                     std::uint64_t run_seed)
    : command_(std::move(command)), timeout_ms_(timeout_ms), run_seed_(run_seed)
{
    if (command_.empty())
        throw std::invalid_argument("external evaluator: empty command");
}

ExternalEvaluator::~ExternalEvaluator() = default;

double ExternalEvaluator::evaluate(const NetworkGenome& g, const NetworkArchitecture& a)
{
    std::lock_guard lock(mutex_);
    try {
        if (!child_ || !child_->running())
            child_ = std::make_unique<LineSubprocess>(
                command_,
                std::vector<std::string>{"PHASENAS_SEED=" + std::to_string(run_seed_)});

        const std::uint64_t request_id = next_request_id_++;
        nlohmann::json request = {{"id", request_id},
                                  {"genome", format_genome(g)},
                                  {"arch", architecture_json(a)}};
        child_->write_line(request.dump());
        const std::string line = child_->read_line(timeout_ms_);

        nlohmann::json response = nlohmann::json::parse(line, nullptr, false);
        if (response.is_discarded() || !response.contains("id") || !response.contains("error"))
            throw EvaluationError("external evaluator: malformed response: " + line);
        if (response["id"].get<std::uint64_t>() != request_id)
            throw EvaluationError("external evaluator: response id mismatch");
        const double error = response["error"].get<double>();
        if (!std::isfinite(error) || error < 0.0 || error > 1.0)
            throw EvaluationError("external evaluator: error value out of [0,1]");
        return error;
    } catch (const EvaluationError&) {
        child_.reset(); // do not reuse a child after a protocol violation
        throw;
    } catch (const std::exception& e) {
        child_.reset();
        throw EvaluationError(e.what());
    }
}

std::optional<ObjectiveVector> ObjectiveCache::lookup(const std::string& key) const
{
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second.objectives;
    return std::nullopt;
}

void ObjectiveCache::insert(const std::string& key, const ObjectiveVector& objectives,
                            const std::string& evaluator_id)
{
    std::lock_guard lock(mutex_);
    entries_.emplace(key, Entry{objectives, evaluator_id, std::chrono::system_clock::now()});
}

std::size_t ObjectiveCache::size() const
{
    std::lock_guard lock(mutex_);
    return entries_.size();
}

ObjectiveVector evaluate_with_cache_keyed(const std::string& canonical_key,
                                          const NetworkGenome& g, const EncodingConfig& cfg,
                                          Evaluator& evaluator, ObjectiveCache& cache)
{
    return cache.get_or_evaluate(canonical_key, evaluator.id(), [&] {
        const NetworkArchitecture arch = decode_network(g, cfg);
        ObjectiveVector objectives;
        objectives.error = evaluator.evaluate(g, arch);
        objectives.complexity = static_cast<double>(estimate_complexity(arch).flops);
        return objectives;
    });
}

ObjectiveVector evaluate_with_cache(const NetworkGenome& g, const EncodingConfig& cfg,
                                    Evaluator& evaluator, ObjectiveCache& cache)
{
    return evaluate_with_cache_keyed(dedup::canonical_network_key(g), g, cfg, evaluator, cache);
}

} // namespace phasenas
