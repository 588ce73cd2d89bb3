#pragma once

#include "phasenas/encoding.hpp"
#include "phasenas/rng.hpp"

namespace phasenas {

// Whether the offspring ones-count bound is enforced over the whole genome
// bit-string or separately per phase.
enum class CrossoverScope { genome, phase };

// Homogeneous crossover: positions where the parents agree are copied
// verbatim; among the |D| disagreeing positions a target ones-count t is
// drawn uniformly from [min(k1,k2), max(k1,k2)] (k1, k2 = parents' ones
// within D) and exactly t uniformly chosen positions are set. As a result
// ones(child) always lies between the parents' ones counts.
NetworkGenome crossover(const NetworkGenome& p1, const NetworkGenome& p2, Rng& rng,
                        CrossoverScope scope = CrossoverScope::genome);

// Bit-flip mutation capped at one flip: bit positions are visited in a
// uniformly shuffled order and the first position whose Bernoulli(p_m)
// trial succeeds is flipped, so Hamming(g, mutate(g)) <= 1 and at most one
// phase changes.
NetworkGenome mutate(const NetworkGenome& g, Rng& rng, double p_m);

} // namespace phasenas
