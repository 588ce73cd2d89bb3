#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "phasenas/evaluators.hpp"

namespace phasenas::metrics {

// Exact dominated area of a 2-objective point set (both minimized) against
// a reference point. Points with any coordinate >= the reference are
// ignored; dominated points and duplicates contribute nothing.
double hypervolume_2d(const std::vector<ObjectiveVector>& points, const ObjectiveVector& ref);

struct ObjectiveBounds {
    double error_lo = 0.0;
    double error_hi = 1.0;
    double complexity_lo = 0.0;
    double complexity_hi = 1.0;
};

// Hypervolume after affinely mapping each objective to [0,1] by the given
// bounds, against the reference point (1+eps, 1+eps). An objective with
// zero range maps to 0.
double normalized_hv(const std::vector<ObjectiveVector>& front, const ObjectiveBounds& bounds,
                     double eps = 0.01);

// Fraction of the offspring batch retained by environmental selection,
// membership by genome identity. Absent when there are no offspring.
std::optional<double> survival_rate(const std::vector<std::uint64_t>& offspring_ids,
                                    const std::unordered_set<std::uint64_t>& survivor_ids);

} // namespace phasenas::metrics
