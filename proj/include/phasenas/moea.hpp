#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phasenas/rng.hpp"

namespace phasenas::moea {

// Pareto dominance, all objectives minimized: a <= b componentwise and
// strictly better in at least one
bool dominates(std::span<const double> a, std::span<const double> b);

// Fast non-dominated sorting (Deb et al., NSGA-II). Returns the fronts as
// index lists; front 0 is the globally non-dominated set. Works for any
// number of objectives >= 2.
std::vector<std::vector<std::size_t>>
fast_nondominated_sort(const std::vector<std::vector<double>>& points);

// Crowding distance within one front: extreme points per objective get
// +infinity, interior points accumulate normalized neighbor gaps, and an
// objective with zero range contributes nothing.
std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front);

struct Ranking {
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<int> rank;
    std::vector<double> crowding;
};

Ranking rank_population(const std::vector<std::vector<double>>& points);

// Binary tournament under the crowded-comparison operator: lower rank wins,
// ties broken by larger crowding, remaining ties by coin flip.
std::size_t tournament_select(const Ranking& ranking, std::size_t pop_size, Rng& rng);

// NSGA-II survival: admit whole fronts in rank order, truncate the last
// admitted front by descending crowding distance (ties keep input order).
// Returns exactly `target` indices into `points`.
std::vector<std::size_t>
environmental_selection(const std::vector<std::vector<double>>& points, std::size_t target);

} // namespace phasenas::moea
