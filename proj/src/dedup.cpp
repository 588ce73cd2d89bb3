#include "phasenas/dedup.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace phasenas::dedup {

ConnectivityMatrix connectivity_matrix(const PhaseGenome& p)
{
    const PhaseGraph graph = decode_phase(p);
    ConnectivityMatrix m;
    m.n_o = p.node_count();
    m.skip = graph.skip;
    m.cells.assign(static_cast<std::size_t>(m.dim()) * static_cast<std::size_t>(m.dim()), 0);
    const int out_row = m.n_o + 1;
    auto set = [&](int r, int c, std::int8_t v) {
        m.cells[static_cast<std::size_t>(r * m.dim() + c)] = v;
    };
    for (const auto& [from, to] : graph.edges) {
        set(to, from, +1);
        set(from, to, -1);
    }
    for (int n : graph.input_attached) {
        set(n, 0, +1);
        set(0, n, -1);
    }
    for (int n : graph.output_attached) {
        set(out_row, n, +1);
        set(n, out_row, -1);
    }
    return m;
}

namespace {

// Serializes the active-node submatrix (plus virtual rows) under a node
// permutation into bytes {0,1,2} for -1/0/+1 and keeps the lexicographic
// minimum over all permutations.
std::string minimal_serialization(const ConnectivityMatrix& m,
                                  const std::vector<int>& active)
{
    const int k = static_cast<int>(active.size());
    const int dim = k + 2;
    // position p in the reduced matrix -> original matrix index
    auto original = [&](int p, const std::vector<int>& perm) {
        if (p == 0) return 0;              // virtual input
        if (p == dim - 1) return m.n_o + 1; // virtual output
        return active[static_cast<std::size_t>(perm[static_cast<std::size_t>(p - 1)])];
    };

    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);

    std::string best;
    std::string cand(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), '\0');
    do {
        for (int r = 0; r < dim; ++r) {
            const int orow = original(r, perm);
            for (int c = 0; c < dim; ++c) {
                const int ocol = original(c, perm);
                cand[static_cast<std::size_t>(r * dim + c)] =
                    static_cast<char>(m.at(orow, ocol) + 1);
            }
        }
        if (best.empty() || cand < best) best = cand;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

CanonicalPhaseKey canonical_phase(const PhaseGenome& p)
{
    const int n_o = p.node_count();
    if (n_o > kMaxCanonicalNodes)
        throw std::invalid_argument("canonical_phase: unsupported n_o > 8");
    const ConnectivityMatrix m = connectivity_matrix(p);
    std::vector<int> active;
    for (int n = 1; n <= n_o; ++n) {
        bool any = false;
        for (int c = 0; c < m.dim() && !any; ++c)
            any = m.at(n, c) != 0;
        if (any) active.push_back(n);
    }
    CanonicalPhaseKey key;
    key.bytes.push_back(static_cast<char>(active.size()));
    key.bytes.push_back(m.skip ? 1 : 0);
    key.bytes += minimal_serialization(m, active);
    return key;
}

std::vector<CanonicalPhaseKey> canonical_network(const NetworkGenome& g)
{
    std::vector<CanonicalPhaseKey> keys;
    keys.reserve(g.phases.size());
    for (const auto& p : g.phases) keys.push_back(canonical_phase(p));
    return keys;
}

std::string join_network_key(const std::vector<CanonicalPhaseKey>& keys)
{
    std::string out;
    for (const auto& key : keys) {
        const std::size_t len = key.bytes.size();
        out.push_back(static_cast<char>(len & 0xff));
        out.push_back(static_cast<char>((len >> 8) & 0xff));
        out += key.bytes;
    }
    return out;
}

std::string canonical_network_key(const NetworkGenome& g)
{
    return join_network_key(canonical_network(g));
}

bool is_duplicate(const NetworkGenome& a, const NetworkGenome& b)
{
    if (a.phases.size() != b.phases.size())
        throw std::invalid_argument("is_duplicate: phase counts differ");
    for (std::size_t i = 0; i < a.phases.size(); ++i) {
        if (a.phases[i].bits.size() != b.phases[i].bits.size())
            throw std::invalid_argument("is_duplicate: phase bit lengths differ");
        if (canonical_phase(a.phases[i]) != canonical_phase(b.phases[i]))
            return false;
    }
    return true;
}

namespace {

PhaseGenome phase_from_index(std::uint64_t index, int bits)
{
    PhaseGenome p;
    p.bits.resize(static_cast<std::size_t>(bits));
    for (int b = 0; b < bits; ++b)
        p.bits[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>((index >> b) & 1u);
    return p;
}

void census_guard(int n_o)
{
    if (n_o < 2) throw std::invalid_argument("redundancy_census: n_o must be >= 2");
    if (n_o > kMaxCensusNodes)
        throw std::invalid_argument("redundancy_census: n_o above enumeration guard (6)");
}

} // namespace

CensusResult redundancy_census_serial(int n_o)
{
    census_guard(n_o);
    const int bits = n_o * (n_o - 1) / 2 + 1;
    const std::uint64_t total = 1ull << bits;
    std::unordered_set<std::string> keys;
    for (std::uint64_t x = 0; x < total; ++x)
        keys.insert(canonical_phase(phase_from_index(x, bits)).bytes);
    return {total, keys.size()};
}

CensusResult redundancy_census(int n_o)
{
    census_guard(n_o);
    const int bits = n_o * (n_o - 1) / 2 + 1;
    const std::uint64_t total = 1ull << bits;
#ifdef _OPENMP
    std::vector<std::unordered_set<std::string>> partial;
    #pragma omp parallel
    {
        #pragma omp single
        partial.resize(static_cast<std::size_t>(omp_get_num_threads()));
        auto& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
        #pragma omp for schedule(static)
        for (std::int64_t x = 0; x < static_cast<std::int64_t>(total); ++x)
            local.insert(canonical_phase(phase_from_index(static_cast<std::uint64_t>(x), bits)).bytes);
    }
    std::unordered_set<std::string> keys;
    for (auto& part : partial)
        keys.merge(part);
    return {total, keys.size()};
#else
    return redundancy_census_serial(n_o);
#endif
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string digest_hex(std::uint64_t digest)
{
    static const char* hexdig = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hexdig[digest & 0xf];
        digest >>= 4;
    }
    return out;
}

std::string key_digest_hex(const std::string& network_key)
{
    return digest_hex(fnv1a64(network_key));
}

} // namespace phasenas::dedup
