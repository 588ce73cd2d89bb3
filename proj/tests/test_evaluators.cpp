#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <vector>

#include "phasenas/complexity.hpp"
#include "phasenas/dedup.hpp"
#include "phasenas/encoding.hpp"
#include "phasenas/evaluators.hpp"
#include "phasenas/moea.hpp"
#include "phasenas/rng.hpp"

using namespace phasenas;

namespace {

const EncodingConfig kDefault = EncodingConfig::make(3, 6);

struct CountingEvaluator final : Evaluator {
    std::atomic<int> calls{0};
    double value = 0.25;
    double evaluate(const NetworkGenome&, const NetworkArchitecture&) override
    {
        ++calls;
        return value;
    }
    std::string id() const override { return "counting"; }
};

NetworkGenome all_bits(std::uint8_t value)
{
    NetworkGenome g;
    for (int p = 0; p < kDefault.n_p; ++p) {
        PhaseGenome phase;
        phase.bits.assign(static_cast<std::size_t>(kDefault.phase_bits()), value);
        g.phases.push_back(std::move(phase));
    }
    return g;
}

} // namespace

TEST_CASE("surrogate error follows the connectivity decay")
{
    SUBCASE("empty architecture sits at e_max up to the perturbation")
    {
        const auto g = all_bits(0);
        const double e = surrogate_error(g, decode_network(g, kDefault));
        CHECK(e >= 0.58);
        CHECK(e <= 0.62);
    }
    SUBCASE("fully connected genome sits at the decayed floor")
    {
        const auto g = all_bits(1);
        const double e = surrogate_error(g, decode_network(g, kDefault));
        const double center = 0.05 + 0.55 * std::exp(-3.0);
        CHECK(e >= center - 0.02);
        CHECK(e <= center + 0.02);
    }
    SUBCASE("phenotype-equal genomes get identical error")
    {
        const auto cfg = EncodingConfig::make(1, 3);
        const auto a = parse_genome("1-00-0", cfg);
        const auto b = parse_genome("0-01-0", cfg);
        REQUIRE(dedup::is_duplicate(a, b));
        CHECK(surrogate_error(a, decode_network(a, cfg)) ==
              surrogate_error(b, decode_network(b, cfg)));
    }
    SUBCASE("error decreases with connectivity in expectation")
    {
        Rng rng(55);
        std::vector<double> bin_sum(10, 0.0);
        std::vector<int> bin_count(10, 0);
        for (int i = 0; i < 10000; ++i) {
            const auto g = random_genome(rng, kDefault);
            const auto arch = decode_network(g, kDefault);
            const auto [nodes, connections] = count_structure(arch);
            (void)nodes;
            const double u = static_cast<double>(connections) /
                             static_cast<double>(max_active_connections(kDefault));
            const auto bin = std::min<std::size_t>(9, static_cast<std::size_t>(u * 10.0));
            bin_sum[bin] += surrogate_error(g, arch);
            ++bin_count[bin];
        }
        double previous = 2.0;
        for (std::size_t b = 0; b < 10; ++b) {
            if (bin_count[b] < 20) continue;
            const double mean = bin_sum[b] / bin_count[b];
            CHECK(mean < previous);
            previous = mean;
        }
    }
    SUBCASE("objectives conflict: the front never collapses to one point")
    {
        Rng rng(66);
        std::vector<std::vector<double>> points;
        for (int i = 0; i < 1000; ++i) {
            const auto g = random_genome(rng, kDefault);
            const auto arch = decode_network(g, kDefault);
            points.push_back({surrogate_error(g, arch),
                              static_cast<double>(estimate_complexity(arch).flops)});
        }
        const auto fronts = moea::fast_nondominated_sort(points);
        CHECK(fronts[0].size() >= 2);
    }
}

TEST_CASE("objective cache evaluates each phenotype once")
{
    const auto cfg = EncodingConfig::make(1, 3);
    const auto a = parse_genome("1-00-0", cfg);
    const auto b = parse_genome("0-01-0", cfg); // same phenotype
    CountingEvaluator evaluator;
    ObjectiveCache cache;

    const auto va = evaluate_with_cache(a, cfg, evaluator, cache);
    const auto vb = evaluate_with_cache(b, cfg, evaluator, cache);
    CHECK(evaluator.calls == 1);
    CHECK(va == vb);
    CHECK(cache.size() == 1);
    CHECK(cache.evaluations() == 1);

    // repeated evaluation returns bitwise-identical vectors
    const auto va2 = evaluate_with_cache(a, cfg, evaluator, cache);
    CHECK(va2 == va);
    CHECK(evaluator.calls == 1);
}

TEST_CASE("distinct phenotypes are each evaluated")
{
    CountingEvaluator evaluator;
    ObjectiveCache cache;
    Rng rng(18);
    std::vector<NetworkGenome> genomes;
    std::set<std::string> keys;
    while (genomes.size() < 100) {
        auto g = random_genome(rng, kDefault);
        if (keys.insert(dedup::canonical_network_key(g)).second)
            genomes.push_back(std::move(g));
    }
    for (const auto& g : genomes) evaluate_with_cache(g, kDefault, evaluator, cache);
    CHECK(evaluator.calls == 100);
    CHECK(cache.size() == 100);
}

#ifdef _OPENMP
TEST_CASE("cache runs a single evaluation per key under concurrent misses")
{
    struct SlowEvaluator final : Evaluator {
        std::atomic<int> calls{0};
        double evaluate(const NetworkGenome&, const NetworkArchitecture&) override
        {
            ++calls;
            volatile int sink = 0;
            for (int spin = 0; spin < 100000; ++spin) sink = spin;
            (void)sink;
            return 0.5;
        }
        std::string id() const override { return "slow"; }
    };
    Rng rng(3);
    const auto g = random_genome(rng, kDefault);
    SlowEvaluator evaluator;
    ObjectiveCache cache;
    #pragma omp parallel for num_threads(4)
    for (int i = 0; i < 32; ++i) evaluate_with_cache(g, kDefault, evaluator, cache);
    CHECK(evaluator.calls == 1);
    CHECK(cache.evaluations() == 1);
}
#endif

TEST_CASE("external evaluator protocol")
{
    Rng rng(9);
    const auto g = random_genome(rng, kDefault);
    const auto arch = decode_network(g, kDefault);

    SUBCASE("round-trip with a fixed answer")
    {
        ExternalEvaluator evaluator({MOCK_EVALUATOR_PATH, "--error", "0.1"}, 5000, 42);
        CHECK(evaluator.evaluate(g, arch) == doctest::Approx(0.1));
        // the child is reused across requests
        CHECK(evaluator.evaluate(g, arch) == doctest::Approx(0.1));
    }
    SUBCASE("out-of-range error is rejected")
    {
        ExternalEvaluator evaluator({MOCK_EVALUATOR_PATH, "--error", "1.5"}, 5000, 42);
        CHECK_THROWS_AS(evaluator.evaluate(g, arch), EvaluationError);
    }
    SUBCASE("a silent responder times out")
    {
        ExternalEvaluator evaluator({MOCK_EVALUATOR_PATH, "--silent"}, 300, 42);
        CHECK_THROWS_AS(evaluator.evaluate(g, arch), EvaluationError);
    }
    SUBCASE("a dead child is an evaluation failure")
    {
        ExternalEvaluator evaluator({MOCK_EVALUATOR_PATH, "--exit", "3"}, 2000, 42);
        CHECK_THROWS_AS(evaluator.evaluate(g, arch), EvaluationError);
    }
    SUBCASE("garbage and mismatched ids are rejected")
    {
        ExternalEvaluator garbage({MOCK_EVALUATOR_PATH, "--garbage"}, 2000, 42);
        CHECK_THROWS_AS(garbage.evaluate(g, arch), EvaluationError);
        ExternalEvaluator wrong_id({MOCK_EVALUATOR_PATH, "--wrong-id"}, 2000, 42);
        CHECK_THROWS_AS(wrong_id.evaluate(g, arch), EvaluationError);
    }
    SUBCASE("deterministic hash mode works through the cache")
    {
        ExternalEvaluator evaluator({MOCK_EVALUATOR_PATH}, 5000, 42);
        ObjectiveCache cache;
        const auto v1 = evaluate_with_cache(g, kDefault, evaluator, cache);
        const auto v2 = evaluate_with_cache(g, kDefault, evaluator, cache);
        CHECK(v1 == v2);
        CHECK(v1.error >= 0.0);
        CHECK(v1.error <= 1.0);
        CHECK(v1.complexity == static_cast<double>(estimate_complexity(arch).flops));
    }
}
