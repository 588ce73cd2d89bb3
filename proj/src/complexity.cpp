#include "phasenas/complexity.hpp"

#include <algorithm>

namespace phasenas {

namespace {
constexpr std::uint64_t kKernelArea = 9; // 3x3 convolution
}

ComplexityReport estimate_complexity(const NetworkArchitecture& a)
{
    ComplexityReport report;
    const auto width = static_cast<std::uint64_t>(a.channel_width);
    for (std::size_t p = 0; p < a.phase_graphs.size(); ++p) {
        const auto& g = a.phase_graphs[p];
        const auto res = static_cast<std::uint64_t>(a.resolutions[p]);
        const std::uint64_t pixels = res * res;
        for (int node : g.active_nodes) {
            // input-attached nodes of phase 1 convolve the raw input
            const bool takes_raw_input =
                p == 0 && std::find(g.input_attached.begin(), g.input_attached.end(), node) !=
                              g.input_attached.end();
            const std::uint64_t c_in =
                takes_raw_input ? static_cast<std::uint64_t>(a.input_channels) : width;
            report.params += kKernelArea * c_in * width + 2 * width;
            report.flops += kKernelArea * c_in * width * pixels;
        }
        report.active_nodes += static_cast<int>(g.active_nodes.size());
        report.active_connections += static_cast<int>(g.edges.size());
        report.active_connections += static_cast<int>(g.input_attached.size());
        report.active_connections += static_cast<int>(g.output_attached.size());
    }
    return report;
}

std::pair<int, int> count_structure(const NetworkArchitecture& a)
{
    int nodes = 0;
    int connections = 0;
    for (const auto& g : a.phase_graphs) {
        nodes += static_cast<int>(g.active_nodes.size());
        connections += static_cast<int>(g.edges.size()) +
                       static_cast<int>(g.input_attached.size()) +
                       static_cast<int>(g.output_attached.size());
    }
    return {nodes, connections};
}

std::uint64_t max_active_connections(const EncodingConfig& cfg)
{
    const std::uint64_t per_phase =
        static_cast<std::uint64_t>(cfg.n_o) * static_cast<std::uint64_t>(cfg.n_o - 1) / 2 + 2;
    return per_phase * static_cast<std::uint64_t>(cfg.n_p);
}

} // namespace phasenas
