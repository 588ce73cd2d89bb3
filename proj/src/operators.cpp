#include "phasenas/operators.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace phasenas {

namespace {

// flattened bit view helpers; position = (phase, index-within-phase)
struct FlatPosition {
    std::size_t phase;
    std::size_t bit;
};

std::vector<FlatPosition> flat_positions(const NetworkGenome& g)
{
    std::vector<FlatPosition> out;
    out.reserve(g.total_bits());
    for (std::size_t p = 0; p < g.phases.size(); ++p)
        for (std::size_t b = 0; b < g.phases[p].bits.size(); ++b)
            out.push_back({p, b});
    return out;
}

void recombine_segment(const NetworkGenome& p1, const NetworkGenome& p2,
                       NetworkGenome& child, const std::vector<FlatPosition>& segment,
                       Rng& rng)
{
    std::vector<FlatPosition> disagree;
    std::size_t ones_p1 = 0;
    std::size_t ones_p2 = 0;
    for (const auto& pos : segment) {
        const auto b1 = p1.phases[pos.phase].bits[pos.bit];
        const auto b2 = p2.phases[pos.phase].bits[pos.bit];
        if (b1 == b2) {
            child.phases[pos.phase].bits[pos.bit] = b1;
        } else {
            disagree.push_back(pos);
            ones_p1 += b1;
            ones_p2 += b2;
        }
    }
    if (disagree.empty()) return;
    const std::size_t lo = std::min(ones_p1, ones_p2);
    const std::size_t hi = std::max(ones_p1, ones_p2);
    const std::size_t t = lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
    rng.shuffle(disagree);
    for (std::size_t k = 0; k < disagree.size(); ++k)
        child.phases[disagree[k].phase].bits[disagree[k].bit] = k < t ? 1 : 0;
}

} // namespace

NetworkGenome crossover(const NetworkGenome& p1, const NetworkGenome& p2, Rng& rng,
                        CrossoverScope scope)
{
    if (p1.phases.size() != p2.phases.size())
        throw std::invalid_argument("crossover: phase counts differ");
    for (std::size_t p = 0; p < p1.phases.size(); ++p)
        if (p1.phases[p].bits.size() != p2.phases[p].bits.size())
            throw std::invalid_argument("crossover: phase bit lengths differ");

    NetworkGenome child = p1; // shape; every bit overwritten below
    if (scope == CrossoverScope::genome) {
        recombine_segment(p1, p2, child, flat_positions(p1), rng);
    } else {
        for (std::size_t p = 0; p < p1.phases.size(); ++p) {
            std::vector<FlatPosition> segment;
            segment.reserve(p1.phases[p].bits.size());
            for (std::size_t b = 0; b < p1.phases[p].bits.size(); ++b)
                segment.push_back({p, b});
            recombine_segment(p1, p2, child, segment, rng);
        }
    }
    return child;
}

NetworkGenome mutate(const NetworkGenome& g, Rng& rng, double p_m)
{
    if (p_m < 0.0 || p_m > 1.0)
        throw std::invalid_argument("mutate: p_m must lie in [0,1]");
    NetworkGenome out = g;
    if (p_m == 0.0) return out;
    auto positions = flat_positions(g);
    rng.shuffle(positions);
    for (const auto& pos : positions) {
        if (rng.bernoulli(p_m)) {
            out.phases[pos.phase].bits[pos.bit] ^= 1u;
            break;
        }
    }
    return out;
}

} // namespace phasenas
