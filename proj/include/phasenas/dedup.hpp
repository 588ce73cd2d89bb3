#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phasenas/encoding.hpp"

namespace phasenas::dedup {

// Connectivity matrix of a phase over n_o nodes plus virtual input/output
// rows: index 0 is the phase input, 1..n_o the nodes, n_o+1 the phase
// output. Entry (i,j) = +1 marks an input to i coming from j, -1 the
// mirrored output, so the node block is antisymmetric.
struct ConnectivityMatrix {
    int n_o = 0;
    bool skip = false;
    std::vector<std::int8_t> cells; // (n_o+2)^2, row-major

    int dim() const { return n_o + 2; }
    std::int8_t at(int r, int c) const { return cells[static_cast<std::size_t>(r * dim() + c)]; }
};

ConnectivityMatrix connectivity_matrix(const PhaseGenome& p);

// Opaque identifier of a phase-isomorphism class: the lexicographically
// minimal serialization of the active-node connectivity matrix over all
// simultaneous row/column permutations of the active nodes (virtual
// input/output rows stay fixed), prefixed with the active count and the
// skip flag. Inactive nodes are dropped first, so padding with dead nodes
// cannot defeat matching.
struct CanonicalPhaseKey {
    std::string bytes;

    auto operator<=>(const CanonicalPhaseKey&) const = default;
};

inline constexpr int kMaxCanonicalNodes = 8; // n_o! permutations stay enumerable

CanonicalPhaseKey canonical_phase(const PhaseGenome& p);

std::vector<CanonicalPhaseKey> canonical_network(const NetworkGenome& g);

// per-phase keys joined with length prefixes; usable as a flat map key
std::string join_network_key(const std::vector<CanonicalPhaseKey>& keys);
std::string canonical_network_key(const NetworkGenome& g);

// true iff canonical keys match phase-by-phase in order; phases sit at
// different resolutions, so no cross-phase permutation is considered
bool is_duplicate(const NetworkGenome& a, const NetworkGenome& b);

struct CensusResult {
    std::uint64_t total = 0;
    std::uint64_t unique = 0;

    double ratio() const { return total ? static_cast<double>(unique) / static_cast<double>(total) : 0.0; }

    bool operator==(const CensusResult&) const = default;
};

// Enumerates every phase string of a given n_o and counts distinct
// canonical keys. The parallel version splits the string space across
// OpenMP threads; both return identical results.
CensusResult redundancy_census(int n_o);
CensusResult redundancy_census_serial(int n_o);

inline constexpr int kMaxCensusNodes = 6;

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::uint64_t digest);
std::string key_digest_hex(const std::string& network_key);

} // namespace phasenas::dedup
