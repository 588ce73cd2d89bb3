#pragma once

#include <cstdint>
#include <utility>

#include "phasenas/encoding.hpp"

namespace phasenas {

// Analytic cost of a decoded architecture. flops counts multiply-adds of
// the 3x3 convolutions only; params adds the batch-norm affine pair per
// node. Summation joins, rectifiers and the skip path cost nothing.
struct ComplexityReport {
    std::uint64_t params = 0;
    std::uint64_t flops = 0; // multiply-adds
    int active_nodes = 0;
    int active_connections = 0; // edges plus input/output attachments

    bool operator==(const ComplexityReport&) const = default;
};

ComplexityReport estimate_complexity(const NetworkArchitecture& a);

// (active nodes, active connections) summed across phases
std::pair<int, int> count_structure(const NetworkArchitecture& a);

// largest attainable connection count for a config: the fully connected
// phase with one input and one output attachment, per phase
std::uint64_t max_active_connections(const EncodingConfig& cfg);

} // namespace phasenas
