#include "phasenas/metrics.hpp"

#include <algorithm>

namespace phasenas::metrics {

double hypervolume_2d(const std::vector<ObjectiveVector>& points, const ObjectiveVector& ref)
{
    std::vector<ObjectiveVector> kept;
    kept.reserve(points.size());
    for (const auto& p : points)
        if (p.error < ref.error && p.complexity < ref.complexity) kept.push_back(p);
    if (kept.empty()) return 0.0;

    // sweep by first objective; the non-dominated staircase is the set of
    // points strictly below every later-seen second objective
    std::sort(kept.begin(), kept.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
        if (a.error != b.error) return a.error < b.error;
        return a.complexity < b.complexity;
    });
    std::vector<ObjectiveVector> staircase;
    for (const auto& p : kept) {
        if (!staircase.empty() && p.complexity >= staircase.back().complexity)
            continue; // dominated or duplicate
        staircase.push_back(p);
    }

    double area = 0.0;
    for (std::size_t i = 0; i < staircase.size(); ++i) {
        const double next_error = i + 1 < staircase.size() ? staircase[i + 1].error : ref.error;
        area += (next_error - staircase[i].error) * (ref.complexity - staircase[i].complexity);
    }
    return area;
}

double normalized_hv(const std::vector<ObjectiveVector>& front, const ObjectiveBounds& bounds,
                     double eps)
{
    const double error_range = bounds.error_hi - bounds.error_lo;
    const double complexity_range = bounds.complexity_hi - bounds.complexity_lo;
    std::vector<ObjectiveVector> mapped;
    mapped.reserve(front.size());
    for (const auto& p : front) {
        ObjectiveVector m;
        m.error = error_range > 0.0 ? (p.error - bounds.error_lo) / error_range : 0.0;
        m.complexity =
            complexity_range > 0.0 ? (p.complexity - bounds.complexity_lo) / complexity_range : 0.0;
        mapped.push_back(m);
    }
    return hypervolume_2d(mapped, {1.0 + eps, 1.0 + eps});
}

std::optional<double> survival_rate(const std::vector<std::uint64_t>& offspring_ids,
                                    const std::unordered_set<std::uint64_t>& survivor_ids)
{
    if (offspring_ids.empty()) return std::nullopt;
    std::size_t survived = 0;
    for (auto id : offspring_ids)
        if (survivor_ids.contains(id)) ++survived;
    return static_cast<double>(survived) / static_cast<double>(offspring_ids.size());
}

} // namespace phasenas::metrics
