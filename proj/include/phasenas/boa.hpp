#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "phasenas/archive.hpp"
#include "phasenas/encoding.hpp"
#include "phasenas/rng.hpp"

namespace phasenas::boa {

// Chain Bayesian network over canonical phase keys: a marginal per phase
// position and a conditional table per adjacent pair, estimated from the
// search archive. States are canonical keys rather than raw bit-strings so
// that phenotype-equivalent genomes pool their counts.
struct PhaseBayesNet {
    using Key = std::string; // CanonicalPhaseKey bytes

    struct Distribution {
        std::vector<Key> support; // first-observed order
        std::vector<double> probability;

        double sum() const;
    };

    double alpha = 1.0;
    std::vector<Distribution> marginals;                    // one per phase position
    std::vector<std::map<Key, Distribution>> conditionals;  // one map per transition
    std::map<Key, PhaseGenome> representatives;             // key -> raw bit-string

    const Distribution& marginal(std::size_t position) const { return marginals[position]; }

    // p(next | previous) with back-off to the next position's marginal
    // when the conditioning key was never observed
    const Distribution& transition(std::size_t position, const Key& previous) const;

    void dump(std::ostream& os) const;
};

// Counts phase-key occurrences and adjacent-phase transitions across the
// archived genomes, Laplace-smoothed with alpha over the observed support
// only. `max_front_rank` optionally restricts fitting to records in the
// first k non-dominated fronts of the archive.
PhaseBayesNet fit_bn(const SearchArchive& archive, double alpha = 1.0,
                     std::optional<int> max_front_rank = std::nullopt);

// Draws genomes phase by phase along the chain and materializes each key
// via its stored representative bit-string.
std::vector<NetworkGenome> sample_bn(const PhaseBayesNet& bn, Rng& rng, int count);

} // namespace phasenas::boa
