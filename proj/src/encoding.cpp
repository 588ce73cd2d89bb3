#include "phasenas/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phasenas {

EncodingConfig EncodingConfig::make(int n_p, int n_o, int input_resolution,
                                    int channel_width, int input_channels)
{
    EncodingConfig cfg;
    cfg.n_p = n_p;
    cfg.n_o = n_o;
    cfg.input_resolution = input_resolution;
    cfg.channel_width = channel_width;
    cfg.input_channels = input_channels;
    cfg.resolution_schedule.clear();
    int res = input_resolution;
    for (int p = 0; p < n_p; ++p) {
        cfg.resolution_schedule.push_back(res);
        res = std::max(1, res / 2);
    }
    cfg.validate();
    return cfg;
}

void EncodingConfig::validate() const
{
    if (n_p < 1) throw std::invalid_argument("encoding: n_p must be >= 1");
    if (n_o < 2) throw std::invalid_argument("encoding: n_o must be >= 2");
    if (static_cast<int>(resolution_schedule.size()) != n_p)
        throw std::invalid_argument("encoding: resolution_schedule must have n_p entries");
    for (std::size_t i = 0; i < resolution_schedule.size(); ++i) {
        if (resolution_schedule[i] < 1)
            throw std::invalid_argument("encoding: resolutions must be positive");
        if (i > 0 && resolution_schedule[i] > resolution_schedule[i - 1])
            throw std::invalid_argument("encoding: resolution_schedule must be non-increasing");
    }
    if (channel_width < 1 || input_channels < 1 || input_resolution < 1)
        throw std::invalid_argument("encoding: channel/resolution settings must be positive");
}

int PhaseGenome::node_count() const
{
    // bits.size() = n_o(n_o-1)/2 + 1
    const std::size_t c = bits.size() - 1;
    const int n = static_cast<int>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(c))) / 2.0);
    return n;
}

std::size_t NetworkGenome::total_bits() const
{
    std::size_t n = 0;
    for (const auto& p : phases) n += p.bits.size();
    return n;
}

std::size_t NetworkGenome::ones_count() const
{
    std::size_t n = 0;
    for (const auto& p : phases)
        for (auto b : p.bits) n += b;
    return n;
}

namespace {

[[noreturn]] void parse_fail(std::size_t pos, const std::string& what)
{
    std::ostringstream os;
    os << "genome parse error at char " << pos << ": " << what;
    throw std::invalid_argument(os.str());
}

} // namespace

NetworkGenome parse_genome(std::string_view text, const EncodingConfig& cfg)
{
    cfg.validate();
    NetworkGenome g;
    std::size_t pos = 0;
    for (int p = 0; p < cfg.n_p; ++p) {
        if (p > 0) {
            if (pos >= text.size() || text[pos] != ' ')
                parse_fail(pos, "expected ' ' between phases");
            ++pos;
        }
        PhaseGenome phase;
        phase.bits.reserve(static_cast<std::size_t>(cfg.phase_bits()));
        // groups for nodes 2..n_o, then the single skip-bit group
        for (int node = 2; node <= cfg.n_o + 1; ++node) {
            const int group = (node <= cfg.n_o) ? node - 1 : 1;
            if (node > 2) {
                if (pos >= text.size() || text[pos] != '-')
                    parse_fail(pos, "expected '-' between node groups");
                ++pos;
            }
            for (int b = 0; b < group; ++b) {
                if (pos >= text.size())
                    parse_fail(pos, "unexpected end of genome (missing bits)");
                const char c = text[pos];
                if (c != '0' && c != '1')
                    parse_fail(pos, std::string("illegal character '") + c + "'");
                phase.bits.push_back(c == '1' ? 1 : 0);
                ++pos;
            }
        }
        g.phases.push_back(std::move(phase));
    }
    if (pos != text.size())
        parse_fail(pos, "trailing characters after last phase");
    return g;
}

std::string format_phase(const PhaseGenome& p)
{
    const int n_o = p.node_count();
    std::string out;
    std::size_t idx = 0;
    for (int node = 2; node <= n_o + 1; ++node) {
        const int group = (node <= n_o) ? node - 1 : 1;
        if (node > 2) out += '-';
        for (int b = 0; b < group; ++b)
            out += p.bits[idx++] ? '1' : '0';
    }
    return out;
}

std::string format_genome(const NetworkGenome& g)
{
    std::string out;
    for (std::size_t i = 0; i < g.phases.size(); ++i) {
        if (i > 0) out += ' ';
        out += format_phase(g.phases[i]);
    }
    return out;
}

PhaseGraph decode_phase(const PhaseGenome& p)
{
    const int n_o = p.node_count();
    PhaseGraph graph;
    graph.skip = p.skip_bit();

    // a node is active iff it has an incoming bit set or a later node
    // references it; every edge endpoint is active by construction
    std::vector<bool> has_in(static_cast<std::size_t>(n_o) + 1, false);
    std::vector<bool> referenced(static_cast<std::size_t>(n_o) + 1, false);
    for (int i = 2; i <= n_o; ++i) {
        for (int j = 1; j < i; ++j) {
            if (p.bits[static_cast<std::size_t>(connection_bit_index(i, j))]) {
                has_in[static_cast<std::size_t>(i)] = true;
                referenced[static_cast<std::size_t>(j)] = true;
            }
        }
    }
    for (int i = 1; i <= n_o; ++i)
        if (has_in[static_cast<std::size_t>(i)] || referenced[static_cast<std::size_t>(i)])
            graph.active_nodes.push_back(i);

    for (int i = 2; i <= n_o; ++i)
        for (int j = 1; j < i; ++j)
            if (p.bits[static_cast<std::size_t>(connection_bit_index(i, j))])
                graph.edges.emplace_back(j, i);

    for (int node : graph.active_nodes) {
        if (!has_in[static_cast<std::size_t>(node)]) graph.input_attached.push_back(node);
        if (!referenced[static_cast<std::size_t>(node)]) graph.output_attached.push_back(node);
    }
    return graph;
}

NetworkArchitecture decode_network(const NetworkGenome& g, const EncodingConfig& cfg)
{
    cfg.validate();
    if (static_cast<int>(g.phases.size()) != cfg.n_p)
        throw std::invalid_argument("decode: genome phase count does not match config");
    NetworkArchitecture arch;
    arch.resolutions = cfg.resolution_schedule;
    arch.channel_width = cfg.channel_width;
    arch.input_channels = cfg.input_channels;
    arch.node_capacity = cfg.n_o;
    arch.phase_graphs.reserve(g.phases.size());
    for (const auto& p : g.phases) {
        if (static_cast<int>(p.bits.size()) != cfg.phase_bits())
            throw std::invalid_argument("decode: phase bit length does not match config");
        arch.phase_graphs.push_back(decode_phase(p));
    }
    return arch;
}

NetworkGenome random_genome(Rng& rng, const EncodingConfig& cfg)
{
    NetworkGenome g;
    g.phases.resize(static_cast<std::size_t>(cfg.n_p));
    for (auto& phase : g.phases) {
        phase.bits.resize(static_cast<std::size_t>(cfg.phase_bits()));
        for (auto& b : phase.bits)
            b = static_cast<std::uint8_t>(rng.next() & 1u);
    }
    return g;
}

std::uint64_t search_space_size(int n_p, int n_o)
{
    if (n_p < 1 || n_o < 1) throw std::invalid_argument("search_space_size: counts must be >= 1");
    const int bits = n_o * (n_o - 1) / 2 + 1;
    if (bits >= 64) throw std::overflow_error("search_space_size: exceeds 64 bits");
    const std::uint64_t per_phase = 1ull << bits;
    const std::uint64_t total = per_phase * static_cast<std::uint64_t>(n_p);
    if (total / static_cast<std::uint64_t>(n_p) != per_phase)
        throw std::overflow_error("search_space_size: exceeds 64 bits");
    return total;
}

std::uint64_t genotype_configurations(int n_p, int n_o)
{
    if (n_p < 1 || n_o < 1) throw std::invalid_argument("genotype_configurations: counts must be >= 1");
    const long long bits = static_cast<long long>(n_p) * (n_o * (n_o - 1) / 2 + 1);
    if (bits >= 64) throw std::overflow_error("genotype_configurations: exceeds 64 bits");
    return 1ull << bits;
}

std::string export_architecture_text(const NetworkArchitecture& a)
{
    std::ostringstream os;
    os << "phases " << a.phase_graphs.size() << "\n";
    os << "input_channels " << a.input_channels << "\n";
    os << "channel_width " << a.channel_width << "\n";
    for (std::size_t p = 0; p < a.phase_graphs.size(); ++p) {
        const auto& g = a.phase_graphs[p];
        os << "phase " << p + 1 << " resolution " << a.resolutions[p]
           << " skip " << (g.skip ? 1 : 0) << "\n";
        os << "  nodes";
        for (int n : g.active_nodes) os << ' ' << n;
        os << "\n  input";
        for (int n : g.input_attached) os << ' ' << n;
        os << "\n  output";
        for (int n : g.output_attached) os << ' ' << n;
        os << "\n  edges";
        for (const auto& [from, to] : g.edges) os << ' ' << from << "->" << to;
        os << "\n";
    }
    return os.str();
}

std::string export_architecture_dot(const NetworkArchitecture& a)
{
    std::ostringstream os;
    os << "digraph network {\n";
    os << "  rankdir=LR;\n";
    os << "  node [shape=box];\n";
    std::string prev_out = "input";
    os << "  input [shape=oval];\n";
    for (std::size_t p = 0; p < a.phase_graphs.size(); ++p) {
        const auto& g = a.phase_graphs[p];
        const std::string pref = "p" + std::to_string(p + 1) + "_";
        os << "  subgraph cluster_" << p + 1 << " {\n";
        os << "    label=\"phase " << p + 1 << " (" << a.resolutions[p] << "x"
           << a.resolutions[p] << ")\";\n";
        for (int n : g.active_nodes)
            os << "    " << pref << "n" << n << " [label=\"" << n << ": "
               << NetworkArchitecture::node_operation << "\"];\n";
        os << "    " << pref << "out [label=\"sum\" shape=oval];\n";
        os << "  }\n";
        for (int n : g.input_attached)
            os << "  " << prev_out << " -> " << pref << "n" << n << ";\n";
        for (const auto& [from, to] : g.edges)
            os << "  " << pref << "n" << from << " -> " << pref << "n" << to << ";\n";
        for (int n : g.output_attached)
            os << "  " << pref << "n" << n << " -> " << pref << "out;\n";
        if (g.skip || g.empty())
            os << "  " << prev_out << " -> " << pref << "out [style=dashed];\n";
        prev_out = pref + "out";
    }
    os << "  output [shape=oval];\n";
    os << "  " << prev_out << " -> output;\n";
    os << "}\n";
    return os.str();
}

} // namespace phasenas
