#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "phasenas/encoding.hpp"
#include "phasenas/subprocess.hpp"

namespace phasenas {

// The twin minimization objectives attached to an evaluated genome.
struct ObjectiveVector {
    double error = 0.0;      // fraction in [0,1]
    double complexity = 0.0; // multiply-adds

    std::vector<double> values() const { return {error, complexity}; }

    bool operator==(const ObjectiveVector&) const = default;
};

// An evaluation failed (timeout, malformed response, out-of-range value,
// dead child). The engine discards the offspring instead of assigning
// penalty objectives.
struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Error-objective provider. Must be deterministic for a fixed
// configuration and genome; may be called concurrently for distinct
// genomes.
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual double evaluate(const NetworkGenome& g, const NetworkArchitecture& a) = 0;
    virtual std::string id() const = 0;
};

struct SurrogateParams {
    double e_min = 0.05;
    double e_max = 0.60;
    double beta = 3.0;
    double rho = 0.02;
};

// Deterministic desk-scale stand-in for a trained-network error: an
// exponential decay in normalized connectivity plus a zero-mean
// perturbation keyed on the canonical genome, clamped to [0,1]. Denser
// architectures score lower error, so the pair (error, flops) forms a
// genuine trade-off.
double surrogate_error(const NetworkGenome& g, const NetworkArchitecture& a,
                       const SurrogateParams& params = {});

class SurrogateEvaluator final : public Evaluator {
public:
    explicit SurrogateEvaluator(SurrogateParams params = {}) : params_(params) {}
    double evaluate(const NetworkGenome& g, const NetworkArchitecture& a) override
    {
        return surrogate_error(g, a, params_);
    }
    std::string id() const override { return "surrogate"; }

private:
    SurrogateParams params_;
};

// Delegates the error objective to an external program. Per request the
// engine writes one JSON line {"id", "genome", "arch"} on the child's
// stdin and expects one line {"id", "error"} back; ids are echoed and one
// request is in flight per child. The run seed is passed in the
// PHASENAS_SEED environment variable.
class ExternalEvaluator final : public Evaluator {
public:
    ExternalEvaluator(std::vector<std::string> command, long timeout_ms,
                      std::uint64_t run_seed);
    ~ExternalEvaluator() override;

    double evaluate(const NetworkGenome& g, const NetworkArchitecture& a) override;
    std::string id() const override { return "external"; }

private:
    std::vector<std::string> command_;
    long timeout_ms_;
    std::uint64_t run_seed_;
    std::mutex mutex_; // one request in flight per child
    std::unique_ptr<LineSubprocess> child_;
    std::uint64_t next_request_id_ = 1;
};

// Objective store keyed by canonical network key: at most one entry per
// key and a single evaluation per key even under concurrent misses.
class ObjectiveCache {
public:
    struct Entry {
        ObjectiveVector objectives;
        std::string evaluator_id;
        std::chrono::system_clock::time_point evaluated_at;
    };

    std::optional<ObjectiveVector> lookup(const std::string& key) const;

    // returns the cached vector or runs `evaluate` exactly once for this
    // key; other threads asking for the same key wait for the result
    template <typename Fn>
    ObjectiveVector get_or_evaluate(const std::string& key, const std::string& evaluator_id,
                                    Fn&& evaluate)
    {
        {
            std::unique_lock lock(mutex_);
            for (;;) {
                if (auto it = entries_.find(key); it != entries_.end())
                    return it->second.objectives;
                if (!inflight_.contains(key)) break;
                cv_.wait(lock);
            }
            inflight_.insert(key);
        }
        ObjectiveVector result;
        try {
            result = evaluate();
        } catch (...) {
            std::lock_guard lock(mutex_);
            inflight_.erase(key);
            cv_.notify_all();
            throw;
        }
        {
            std::lock_guard lock(mutex_);
            inflight_.erase(key);
            entries_.emplace(key, Entry{result, evaluator_id, std::chrono::system_clock::now()});
            ++evaluations_;
            cv_.notify_all();
        }
        return result;
    }

    void insert(const std::string& key, const ObjectiveVector& objectives,
                const std::string& evaluator_id);

    std::size_t size() const;
    std::uint64_t evaluations() const { return evaluations_; }

private:
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::unordered_map<std::string, Entry> entries_;
    std::unordered_set<std::string> inflight_;
    std::uint64_t evaluations_ = 0;
};

// Cache-aware evaluation: a hit returns the stored vector without calling
// the evaluator; a miss computes the error objective plus the analytic
// complexity and stores both. The keyed variant saves recomputing the
// canonical key when the caller already has it.
ObjectiveVector evaluate_with_cache(const NetworkGenome& g, const EncodingConfig& cfg,
                                    Evaluator& evaluator, ObjectiveCache& cache);
ObjectiveVector evaluate_with_cache_keyed(const std::string& canonical_key,
                                          const NetworkGenome& g, const EncodingConfig& cfg,
                                          Evaluator& evaluator, ObjectiveCache& cache);

} // namespace phasenas
