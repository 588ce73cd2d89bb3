// Acceptance suite: one check per search-engine requirement, each printed
// as a PASS/FAIL line. Runs the full default configuration, the paired
// ablation studies, and the protocol round-trips; exits non-zero when any
// check fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "phasenas/boa.hpp"
#include "phasenas/complexity.hpp"
#include "phasenas/config.hpp"
#include "phasenas/dedup.hpp"
#include "phasenas/engine.hpp"
#include "phasenas/metrics.hpp"
#include "phasenas/moea.hpp"
#include "phasenas/operators.hpp"

using namespace phasenas;
namespace fs = std::filesystem;

namespace {

int failures = 0;
using clock_type = std::chrono::steady_clock;

void report(int criterion, const std::string& name, bool pass, const std::string& detail)
{
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double seconds_since(clock_type::time_point start)
{
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path fresh_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "phasenas-acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

SearchConfig default_config(std::uint64_t seed)
{
    SearchConfig cfg; // paper-scale defaults: 40, 20+10, 0.9, 0.02
    cfg.seed = seed;
    return cfg;
}

std::vector<ObjectiveVector> record_objectives(const std::vector<ArchiveRecord>& records)
{
    std::vector<ObjectiveVector> points;
    points.reserve(records.size());
    for (const auto& r : records) points.push_back(r.objectives);
    return points;
}

// normalized HV of a front under bounds shared across the runs being
// compared: lower bound at the ideal point, upper bound from the union
double shared_normalized_hv(const std::vector<ObjectiveVector>& front,
                            const std::vector<std::vector<ObjectiveVector>>& pools)
{
    metrics::ObjectiveBounds bounds{0.0, 0.0, 0.0, 0.0};
    for (const auto& pool : pools) {
        for (const auto& p : pool) {
            bounds.error_hi = std::max(bounds.error_hi, p.error);
            bounds.complexity_hi = std::max(bounds.complexity_hi, p.complexity);
        }
    }
    return metrics::normalized_hv(front, bounds);
}

std::vector<ObjectiveVector> front_of(const std::vector<ObjectiveVector>& points)
{
    std::vector<std::vector<double>> values;
    values.reserve(points.size());
    for (const auto& p : points) values.push_back(p.values());
    const auto fronts = moea::fast_nondominated_sort(values);
    std::vector<ObjectiveVector> front;
    for (std::size_t i : fronts[0]) front.push_back(points[i]);
    return front;
}

// ---- criteria --------------------------------------------------------

void criterion_1_sorting()
{
    Rng rng(1001);
    bool exact = true;
    double worst = 0.0;
    for (int instance = 0; instance < 100; ++instance) {
        std::vector<std::vector<double>> points;
        points.reserve(500);
        for (int i = 0; i < 500; ++i) points.push_back({rng.real01(), rng.real01()});
        const auto t0 = clock_type::now();
        const auto fast = moea::fast_nondominated_sort(points);
        worst = std::max(worst, seconds_since(t0));
        const auto slow = oracles::peel_sort(points);
        if (fast.size() != slow.size()) { exact = false; break; }
        for (std::size_t f = 0; f < fast.size() && exact; ++f) {
            std::set<std::size_t> a(fast[f].begin(), fast[f].end());
            std::set<std::size_t> b(slow[f].begin(), slow[f].end());
            exact = a == b;
        }
        if (!exact) break;
    }
    std::ostringstream detail;
    detail << "100 instances of N=500, worst sort time " << worst << " s";
    report(1, "non-dominated sorting matches the peeling oracle", exact && worst < 1.0,
           detail.str());
}

void criterion_2_crossover()
{
    const auto cfg = EncodingConfig::make(3, 6);
    Rng rng(1002);
    int violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const auto p1 = random_genome(rng, cfg);
        const auto p2 = random_genome(rng, cfg);
        const auto child = crossover(p1, p2, rng);
        for (std::size_t p = 0; p < p1.phases.size(); ++p)
            for (std::size_t i = 0; i < p1.phases[p].bits.size(); ++i)
                if (p1.phases[p].bits[i] == p2.phases[p].bits[i] &&
                    child.phases[p].bits[i] != p1.phases[p].bits[i])
                    ++violations;
        const auto lo = std::min(p1.ones_count(), p2.ones_count());
        const auto hi = std::max(p1.ones_count(), p2.ones_count());
        if (child.ones_count() < lo || child.ones_count() > hi) ++violations;
    }
    report(2, "crossover preserves common bits and the ones interval", violations == 0,
           "10000 parent pairs, " + std::to_string(violations) + " violations");
}

void criterion_3_mutation()
{
    const auto cfg = EncodingConfig::make(3, 6);
    Rng rng(1003);
    const double p_m = 0.02;
    const double expected = 1.0 - std::pow(1.0 - p_m, cfg.total_bits());
    int flipped = 0;
    bool ball_ok = true;
    const int calls = 20000;
    for (int t = 0; t < calls; ++t) {
        const auto g = random_genome(rng, cfg);
        const auto m = mutate(g, rng, p_m);
        std::size_t distance = 0;
        for (std::size_t p = 0; p < g.phases.size(); ++p)
            for (std::size_t i = 0; i < g.phases[p].bits.size(); ++i)
                distance += g.phases[p].bits[i] != m.phases[p].bits[i];
        if (distance > 1) ball_ok = false;
        if (distance == 1) ++flipped;
    }
    const double rate = static_cast<double>(flipped) / calls;
    std::ostringstream detail;
    detail << "rate " << rate << " vs expected " << expected << ", hamming <= 1 "
           << (ball_ok ? "held" : "violated");
    report(3, "mutation flips at most one bit at the predicted rate",
           ball_ok && std::abs(rate - expected) <= 0.02, detail.str());
}

void criterion_4_duplicates()
{
    const auto t0 = clock_type::now();
    bool exact = true;
    {
        std::vector<dedup::CanonicalPhaseKey> keys;
        std::vector<PhaseGraph> graphs;
        for (int x = 0; x < 128; ++x) {
            PhaseGenome p;
            for (int b = 0; b < 7; ++b) p.bits.push_back(static_cast<std::uint8_t>((x >> b) & 1));
            keys.push_back(dedup::canonical_phase(p));
            graphs.push_back(decode_phase(p));
        }
        for (int a = 0; a < 128 && exact; ++a)
            for (int b = a + 1; b < 128 && exact; ++b)
                exact = (keys[static_cast<std::size_t>(a)] == keys[static_cast<std::size_t>(b)]) ==
                        oracles::phases_isomorphic(graphs[static_cast<std::size_t>(a)],
                                                   graphs[static_cast<std::size_t>(b)]);
    }
    bool monotone = true;
    double previous = 1.1;
    std::ostringstream ratios;
    for (int n_o = 2; n_o <= 5; ++n_o) {
        const auto census = dedup::redundancy_census(n_o);
        monotone = monotone && census.ratio() <= previous;
        previous = census.ratio();
        ratios << (n_o > 2 ? " " : "") << census.ratio();
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << "oracle exact over C(128,2) pairs, ratios " << ratios.str() << ", " << elapsed
           << " s";
    report(4, "duplicate detection is exact and redundancy grows with node count",
           exact && monotone && elapsed < 300.0, detail.str());
}

void criterion_5_hypervolume()
{
    const bool exact_case =
        metrics::hypervolume_2d({{1, 3}, {2, 2}, {3, 1}}, {4, 4}) == 6.0;
    Rng rng(1005);
    bool mc_ok = true;
    for (int front_index = 0; front_index < 20; ++front_index) {
        std::vector<ObjectiveVector> points;
        const int n = 3 + static_cast<int>(rng.below(15));
        for (int i = 0; i < n; ++i) points.push_back({rng.real01(), rng.real01()});
        const ObjectiveVector ref{1.1, 1.1};
        const double exact = metrics::hypervolume_2d(points, ref);
        const auto mc = oracles::mc_hypervolume(points, ref, 1000000,
                                                2000 + static_cast<std::uint64_t>(front_index));
        if (std::abs(exact - mc.area) > 3.0 * mc.stderr_ + 1e-12) mc_ok = false;
    }
    report(5, "hypervolume matches the exact value and the Monte-Carlo oracle",
           exact_case && mc_ok, "value 6 on the 3-point instance; 20 random fronts at 1e6 samples");
}

void criterion_6_bn_fidelity()
{
    // archive from a short exploration run of the real engine
    SearchConfig cfg = default_config(106);
    cfg.population_size = 20;
    cfg.exploration_generations = 4;
    cfg.exploitation_generations = 0;
    const auto result = run_search(cfg);
    const auto bn = boa::fit_bn(result.archive, 1.0);

    Rng rng(1006);
    const int samples = 10000;
    const auto genomes = boa::sample_bn(bn, rng, samples);
    bool ok = true;
    std::ostringstream detail;
    for (std::size_t position = 0; position < 3; ++position) {
        std::map<std::string, double> counts;
        for (const auto& g : genomes)
            counts[dedup::canonical_phase(g.phases[position]).bytes] += 1.0;
        // the sampler draws phase 1 from the marginal and later phases from
        // the conditionals; compare against the implied position marginal
        std::map<std::string, double> implied;
        if (position == 0) {
            for (std::size_t k = 0; k < bn.marginals[0].support.size(); ++k)
                implied[bn.marginals[0].support[k]] = bn.marginals[0].probability[k];
        } else {
            std::map<std::string, double> previous;
            for (const auto& g : genomes)
                previous[dedup::canonical_phase(g.phases[position - 1]).bytes] += 1.0;
            for (auto& [key, weight] : previous) {
                const auto& table = bn.transition(position - 1, key);
                for (std::size_t k = 0; k < table.support.size(); ++k)
                    implied[table.support[k]] += (weight / samples) * table.probability[k];
            }
        }
        double tv = 0.0;
        std::set<std::string> keys;
        for (const auto& [k, v] : counts) keys.insert(k);
        for (const auto& [k, v] : implied) keys.insert(k);
        for (const auto& k : keys) {
            const double empirical = counts.contains(k) ? counts[k] / samples : 0.0;
            const double model = implied.contains(k) ? implied[k] : 0.0;
            tv += std::abs(empirical - model);
        }
        tv /= 2.0;
        detail << "position " << position + 1 << " tv=" << tv << " ";
        if (tv >= 0.05) ok = false;
    }
    report(6, "BN sampling matches the fitted tables", ok, detail.str());
}

void criterion_7_end_to_end()
{
    const auto t0 = clock_type::now();
    const auto result = run_search(default_config(107));
    const double elapsed = seconds_since(t0);

    const bool offspring_ok = result.offspring_created == 1200;
    bool monotone = true;
    for (std::size_t i = 1; i < result.trace.size(); ++i)
        if (result.trace[i].normalized_hv < result.trace[i - 1].normalized_hv) monotone = false;

    double exploration_final = 0.0;
    double exploitation_final = 0.0;
    for (const auto& row : result.trace) {
        if (row.stage == "exploration") exploration_final = row.normalized_hv;
        if (row.stage == "exploitation") exploitation_final = row.normalized_hv;
    }
    const bool stage_gain = exploitation_final >= exploration_final;
    const bool budget_ok = result.evaluator_calls == result.archive.size() &&
                           result.archive.size() <= 1240;

    std::ostringstream detail;
    detail << elapsed << " s, " << result.offspring_created << " offspring, archive "
           << result.archive.size() << ", exploration hv " << exploration_final
           << " -> exploitation hv " << exploitation_final;
    report(7, "default run reproduces the search dynamics",
           elapsed < 60.0 && offspring_ok && monotone && stage_gain && budget_ok, detail.str());
}

void criterion_8_ablations()
{
    int search_beats_random = 0;
    int crossover_beats_none = 0;
    int bn_beats_uniform = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        // (a) full search vs uniform random sampling at equal budget
        const auto search = run_search(default_config(seed));
        const auto random = run_random_search(default_config(seed));
        {
            const auto search_pool = record_objectives(search.archive.records());
            const auto random_pool = record_objectives(random.archive.records());
            const double hv_search = shared_normalized_hv(
                record_objectives(search.front), {search_pool, random_pool});
            const double hv_random = shared_normalized_hv(
                record_objectives(random.front), {search_pool, random_pool});
            if (hv_search > hv_random) ++search_beats_random;
        }
        // (b) crossover on vs off
        {
            SearchConfig no_crossover = default_config(seed);
            no_crossover.disable_crossover = true;
            const auto without = run_search(no_crossover);
            const auto with_pool = record_objectives(search.archive.records());
            const auto without_pool = record_objectives(without.archive.records());
            const double hv_with = shared_normalized_hv(
                record_objectives(search.front), {with_pool, without_pool});
            const double hv_without = shared_normalized_hv(
                record_objectives(without.front), {with_pool, without_pool});
            if (hv_with > hv_without) ++crossover_beats_none;
        }
        // (c) 120 BN samples vs 120 uniform samples after exploration
        {
            SearchConfig exploration_only = default_config(seed);
            exploration_only.exploitation_generations = 0;
            const auto explored = run_search(exploration_only);
            const auto bn = boa::fit_bn(explored.archive, 1.0);
            Rng rng(9000 + seed);
            SurrogateEvaluator evaluator;
            const auto evaluate_set = [&](const std::vector<NetworkGenome>& genomes) {
                std::vector<ObjectiveVector> points;
                for (const auto& g : genomes) {
                    const auto arch = decode_network(g, exploration_only.encoding);
                    points.push_back({evaluator.evaluate(g, arch),
                                      static_cast<double>(estimate_complexity(arch).flops)});
                }
                return points;
            };
            const auto bn_points = evaluate_set(boa::sample_bn(bn, rng, 120));
            std::vector<NetworkGenome> uniform;
            for (int i = 0; i < 120; ++i)
                uniform.push_back(random_genome(rng, exploration_only.encoding));
            const auto uniform_points = evaluate_set(uniform);
            const double hv_bn =
                shared_normalized_hv(front_of(bn_points), {bn_points, uniform_points});
            const double hv_uniform =
                shared_normalized_hv(front_of(uniform_points), {bn_points, uniform_points});
            if (hv_bn >= hv_uniform) ++bn_beats_uniform;
        }
    }
    std::ostringstream detail;
    detail << "search>random " << search_beats_random << "/10, crossover>none "
           << crossover_beats_none << "/10, bn>=uniform " << bn_beats_uniform << "/10";
    report(8, "ablations reproduce the reported orderings",
           search_beats_random >= 8 && crossover_beats_none >= 7 && bn_beats_uniform >= 8,
           detail.str());
}

void criterion_9_determinism()
{
    SearchConfig small = default_config(109);
    small.population_size = 16;
    small.exploration_generations = 6;
    small.exploitation_generations = 3;

    const auto dir_a = fresh_dir("det-a");
    const auto dir_b = fresh_dir("det-b");
    SearchConfig cfg_a = small;
    cfg_a.out_dir = dir_a.string();
    SearchConfig cfg_b = small;
    cfg_b.out_dir = dir_b.string();
    run_search(cfg_a);
    run_search(cfg_b);
    const bool identical = slurp(dir_a / "archive.csv") == slurp(dir_b / "archive.csv") &&
                           slurp(dir_a / "trace.csv") == slurp(dir_b / "trace.csv");

    const auto dir_halt = fresh_dir("det-halt");
    SearchConfig cfg_halt = small;
    cfg_halt.out_dir = dir_halt.string();
    cfg_halt.halt_after = 4;
    run_search(cfg_halt);
    const auto dir_resume = fresh_dir("det-resume");
    resume_search((dir_halt / "checkpoint.json").string(), std::nullopt, dir_resume.string());
    const bool resumed_identical =
        slurp(dir_a / "archive.csv") == slurp(dir_resume / "archive.csv") &&
        slurp(dir_a / "trace.csv") == slurp(dir_resume / "trace.csv");

    report(9, "fixed seeds give bitwise-identical runs and resumable checkpoints",
           identical && resumed_identical,
           std::string("repeat run ") + (identical ? "identical" : "differs") + ", resume " +
               (resumed_identical ? "identical" : "differs"));
}

void criterion_10_external_protocol()
{
    const auto cfg = EncodingConfig::make(3, 6);
    Rng rng(1010);
    const auto g = random_genome(rng, cfg);
    const auto arch = decode_network(g, cfg);

    bool round_trip = false;
    bool range_rejected = false;
    bool timed_out = false;
    try {
        ExternalEvaluator evaluator({MOCK_EVALUATOR_PATH, "--error", "0.1"}, 5000, 1);
        round_trip = std::abs(evaluator.evaluate(g, arch) - 0.1) < 1e-12;
    } catch (const std::exception&) {}
    try {
        ExternalEvaluator evaluator({MOCK_EVALUATOR_PATH, "--error", "1.5"}, 5000, 1);
        evaluator.evaluate(g, arch);
    } catch (const EvaluationError&) {
        range_rejected = true;
    }
    try {
        ExternalEvaluator evaluator({MOCK_EVALUATOR_PATH, "--silent"}, 300, 1);
        evaluator.evaluate(g, arch);
    } catch (const EvaluationError&) {
        timed_out = true;
    }

    // a failing evaluator aborts and leaves nothing in the archive
    bool nothing_archived = false;
    const auto dir = fresh_dir("protocol-abort");
    SearchConfig abort_cfg;
    abort_cfg.population_size = 4;
    abort_cfg.exploration_generations = 1;
    abort_cfg.exploitation_generations = 0;
    abort_cfg.dedup_retry_limit = 2;
    abort_cfg.seed = 12;
    abort_cfg.evaluator = "external";
    abort_cfg.external_cmd = std::string(MOCK_EVALUATOR_PATH) + " --exit 1";
    abort_cfg.external_timeout_s = 2.0;
    abort_cfg.out_dir = dir.string();
    try {
        run_search(abort_cfg);
    } catch (const EngineError&) {
        nothing_archived = slurp(dir / "checkpoint.json").find("\"archive\": []") !=
                           std::string::npos;
    }

    std::ostringstream detail;
    detail << "round-trip " << round_trip << ", range " << range_rejected << ", timeout "
           << timed_out << ", failed-eval archived " << !nothing_archived;
    report(10, "external evaluator protocol paths behave",
           round_trip && range_rejected && timed_out && nothing_archived, detail.str());
}

} // namespace

int main()
{
    const auto t0 = clock_type::now();
    criterion_1_sorting();
    criterion_2_crossover();
    criterion_3_mutation();
    criterion_4_duplicates();
    criterion_5_hypervolume();
    criterion_6_bn_fidelity();
    criterion_7_end_to_end();
    criterion_8_ablations();
    criterion_9_determinism();
    criterion_10_external_protocol();
    std::printf("%d of 10 criteria passed in %.1f s\n", 10 - failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
