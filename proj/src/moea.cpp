#include "phasenas/moea.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace phasenas::moea {

bool dominates(std::span<const double> a, std::span<const double> b)
{
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

std::vector<std::vector<std::size_t>>
fast_nondominated_sort(const std::vector<std::vector<double>>& points)
{
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("fast_nondominated_sort: empty population");

    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> dominator_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j])) {
                dominated[i].push_back(j);
                ++dominator_count[j];
            } else if (dominates(points[j], points[i])) {
                dominated[j].push_back(i);
                ++dominator_count[i];
            }
        }
    }

    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t i = 0; i < n; ++i)
        if (dominator_count[i] == 0) fronts[0].push_back(i);

    std::size_t current = 0;
    while (!fronts[current].empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : fronts[current]) {
            for (std::size_t j : dominated[i]) {
                if (--dominator_count[j] == 0) next.push_back(j);
            }
        }
        if (next.empty()) break;
        fronts.push_back(std::move(next));
        ++current;
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front)
{
    const std::size_t n = front.size();
    if (n == 0) throw std::invalid_argument("crowding_distance: empty front");
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> distance(n, 0.0);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    const std::size_t m = front[0].size();
    std::vector<std::size_t> order(n);
    for (std::size_t obj = 0; obj < m; ++obj) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return front[a][obj] < front[b][obj];
        });
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        const double range = front[order.back()][obj] - front[order.front()][obj];
        if (range <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            if (distance[order[k]] == inf) continue;
            distance[order[k]] +=
                (front[order[k + 1]][obj] - front[order[k - 1]][obj]) / range;
        }
    }
    return distance;
}

Ranking rank_population(const std::vector<std::vector<double>>& points)
{
    Ranking ranking;
    ranking.fronts = fast_nondominated_sort(points);
    ranking.rank.assign(points.size(), 0);
    ranking.crowding.assign(points.size(), 0.0);
    for (std::size_t f = 0; f < ranking.fronts.size(); ++f) {
        std::vector<std::vector<double>> values;
        values.reserve(ranking.fronts[f].size());
        for (std::size_t i : ranking.fronts[f]) values.push_back(points[i]);
        const auto distances = crowding_distance(values);
        for (std::size_t k = 0; k < ranking.fronts[f].size(); ++k) {
            const std::size_t i = ranking.fronts[f][k];
            ranking.rank[i] = static_cast<int>(f);
            ranking.crowding[i] = distances[k];
        }
    }
    return ranking;
}

std::size_t tournament_select(const Ranking& ranking, std::size_t pop_size, Rng& rng)
{
    if (pop_size == 0) throw std::invalid_argument("tournament_select: empty population");
    const std::size_t a = static_cast<std::size_t>(rng.below(pop_size));
    const std::size_t b = static_cast<std::size_t>(rng.below(pop_size));
    if (ranking.rank[a] != ranking.rank[b])
        return ranking.rank[a] < ranking.rank[b] ? a : b;
    if (ranking.crowding[a] != ranking.crowding[b])
        return ranking.crowding[a] > ranking.crowding[b] ? a : b;
    return (rng.next() & 1u) ? a : b;
}

std::vector<std::size_t>
environmental_selection(const std::vector<std::vector<double>>& points, std::size_t target)
{
    if (points.size() < target)
        throw std::invalid_argument("environmental_selection: population smaller than target");
    const Ranking ranking = rank_population(points);
    std::vector<std::size_t> survivors;
    survivors.reserve(target);
    for (const auto& front : ranking.fronts) {
        if (survivors.size() + front.size() <= target) {
            survivors.insert(survivors.end(), front.begin(), front.end());
            if (survivors.size() == target) break;
            continue;
        }
        // truncate by descending crowding, stable on input order
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return ranking.crowding[front[a]] > ranking.crowding[front[b]];
        });
        for (std::size_t k = 0; survivors.size() < target; ++k)
            survivors.push_back(front[order[k]]);
        break;
    }
    return survivors;
}

} // namespace phasenas::moea
