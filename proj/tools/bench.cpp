// Benchmark comparing the serial reference kernels against their
// OpenMP-parallel counterparts: canonical-census enumeration and batch
// objective evaluation.
#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "phasenas/dedup.hpp"
#include "phasenas/encoding.hpp"
#include "phasenas/evaluators.hpp"
#include "phasenas/rng.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start)
{
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

void bench_census(int max_n_o, int repeats)
{
    std::printf("census kernel (canonical keys over the full phase-string space)\n");
    std::printf("%4s %12s %12s %12s %8s\n", "n_o", "strings", "serial[s]", "parallel[s]", "speedup");
    for (int n_o = 3; n_o <= max_n_o; ++n_o) {
        double serial_best = 1e30;
        double parallel_best = 1e30;
        phasenas::dedup::CensusResult serial_result{};
        phasenas::dedup::CensusResult parallel_result{};
        for (int r = 0; r < repeats; ++r) {
            auto t0 = clock_type::now();
            serial_result = phasenas::dedup::redundancy_census_serial(n_o);
            serial_best = std::min(serial_best, seconds_since(t0));
            t0 = clock_type::now();
            parallel_result = phasenas::dedup::redundancy_census(n_o);
            parallel_best = std::min(parallel_best, seconds_since(t0));
        }
        if (serial_result != parallel_result) {
            std::printf("MISMATCH at n_o=%d\n", n_o);
            return;
        }
        std::printf("%4d %12llu %12.4f %12.4f %8.2f\n", n_o,
                    static_cast<unsigned long long>(serial_result.total), serial_best,
                    parallel_best, serial_best / parallel_best);
    }
}

void bench_evaluation(int genomes, int repeats, int workers)
{
    const auto cfg = phasenas::EncodingConfig::make(3, 6);
    phasenas::Rng rng(17);
    std::vector<phasenas::NetworkGenome> batch;
    batch.reserve(static_cast<std::size_t>(genomes));
    for (int i = 0; i < genomes; ++i) batch.push_back(phasenas::random_genome(rng, cfg));

    phasenas::SurrogateEvaluator evaluator;
    const auto run = [&](int threads) {
        double best = 1e30;
        for (int r = 0; r < repeats; ++r) {
            phasenas::ObjectiveCache cache;
            const auto t0 = clock_type::now();
#ifdef _OPENMP
            #pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(batch.size()); ++i)
                phasenas::evaluate_with_cache(batch[static_cast<std::size_t>(i)], cfg, evaluator,
                                              cache);
            best = std::min(best, seconds_since(t0));
        }
        return best;
    };

    const double serial = run(1);
    const double parallel = run(workers);
    std::printf("\nbatch surrogate evaluation (%d genomes, canonicalization-dominated)\n", genomes);
    std::printf("%10s %12s %12s %8s\n", "workers", "serial[s]", "parallel[s]", "speedup");
    std::printf("%10d %12.4f %12.4f %8.2f\n", workers, serial, parallel, serial / parallel);
}

} // namespace

int main(int argc, char** argv)
{
    int max_n_o = 5;
    int repeats = 3;
    int genomes = 2000;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string arg = argv[i];
        if (arg == "--max-n-o") max_n_o = std::atoi(argv[i + 1]);
        else if (arg == "--repeats") repeats = std::atoi(argv[i + 1]);
        else if (arg == "--genomes") genomes = std::atoi(argv[i + 1]);
    }
    int workers = 2;
#ifdef _OPENMP
    workers = omp_get_max_threads();
    std::printf("OpenMP enabled, max threads %d\n", workers);
#else
    std::printf("OpenMP not available; parallel kernels fall back to serial\n");
#endif
    bench_census(std::min(max_n_o, phasenas::dedup::kMaxCensusNodes), repeats);
    bench_evaluation(genomes, repeats, workers);
    return 0;
}
