#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phasenas/rng.hpp"

namespace phasenas {

// Geometry of the genotype space: a network is n_p phases, each phase a DAG
// over n_o identical nodes encoded as a binary string of length
// n_o(n_o-1)/2 + 1 (lower-triangular connection bits plus one skip bit).
struct EncodingConfig {
    int n_p = 3;
    int n_o = 6;
    std::vector<int> resolution_schedule = {32, 16, 8}; // pixels per side, per phase
    int channel_width = 16;  // channels of every node output
    int input_channels = 3;  // channels entering phase 1
    int input_resolution = 32;

    int phase_bits() const { return n_o * (n_o - 1) / 2 + 1; }
    int total_bits() const { return n_p * phase_bits(); }

    // schedule halves after each phase, mirroring a stride-2 pooling layout
    static EncodingConfig make(int n_p, int n_o, int input_resolution = 32,
                               int channel_width = 16, int input_channels = 3);

    void validate() const; // throws std::invalid_argument

    bool operator==(const EncodingConfig&) const = default;
};

// Bit layout inside a phase: for node i in 2..n_o a group of i-1 bits lists
// incoming connections from nodes 1..i-1 (ascending), groups concatenated in
// node order, and the final single bit is the phase input->output skip.
struct PhaseGenome {
    std::vector<std::uint8_t> bits;

    int node_count() const; // n_o recovered from bits.size()
    bool skip_bit() const { return bits.back() != 0; }

    bool operator==(const PhaseGenome&) const = default;
};

struct NetworkGenome {
    std::vector<PhaseGenome> phases;

    std::size_t total_bits() const;
    std::size_t ones_count() const;

    bool operator==(const NetworkGenome&) const = default;
};

// Decoded phase: nodes are 1-based; edges always point from lower to higher
// node id, so the graph is acyclic by construction.
struct PhaseGraph {
    std::vector<int> active_nodes;
    std::vector<std::pair<int, int>> edges; // (from, to), from < to
    std::vector<int> input_attached;        // active nodes with no incoming edge
    std::vector<int> output_attached;       // active nodes with no outgoing edge
    bool skip = false;

    bool empty() const { return active_nodes.empty(); }

    bool operator==(const PhaseGraph&) const = default;
};

struct NetworkArchitecture {
    std::vector<PhaseGraph> phase_graphs;
    std::vector<int> resolutions; // per phase, pixels per side
    int channel_width = 16;
    int input_channels = 3;
    int node_capacity = 6; // n_o of the originating config

    // every node runs the same operation during search
    static constexpr const char* node_operation = "conv3x3-bn-relu";

    bool operator==(const NetworkArchitecture&) const = default;
};

// flat index of the connection bit (j -> i), 1 <= j < i <= n_o
inline int connection_bit_index(int i, int j)
{
    return (i - 1) * (i - 2) / 2 + (j - 1);
}

// Textual genome format: phases separated by one space, node groups by
// dashes, e.g. "1-01-001-0001-00001-1 0-00-...".
NetworkGenome parse_genome(std::string_view text, const EncodingConfig& cfg);
std::string format_genome(const NetworkGenome& g);
std::string format_phase(const PhaseGenome& p);

PhaseGraph decode_phase(const PhaseGenome& p);
NetworkArchitecture decode_network(const NetworkGenome& g, const EncodingConfig& cfg);

// every bit independently Bernoulli(1/2)
NetworkGenome random_genome(Rng& rng, const EncodingConfig& cfg);

// size of the operation search space, n_p * 2^(n_o(n_o-1)/2 + 1);
// throws std::overflow_error when it exceeds 64 bits
std::uint64_t search_space_size(int n_p, int n_o);

// number of joint genotype configurations, 2^(n_p * (n_o(n_o-1)/2 + 1))
std::uint64_t genotype_configurations(int n_p, int n_o);

// structured-text graph document (node list, edge list, per-phase
// resolution/channels) and DOT digraph for visualization
std::string export_architecture_text(const NetworkArchitecture& a);
std::string export_architecture_dot(const NetworkArchitecture& a);

} // namespace phasenas
