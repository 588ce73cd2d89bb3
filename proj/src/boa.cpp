#include "phasenas/boa.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "phasenas/dedup.hpp"
#include "phasenas/moea.hpp"

namespace phasenas::boa {

double PhaseBayesNet::Distribution::sum() const
{
    return std::accumulate(probability.begin(), probability.end(), 0.0);
}

const PhaseBayesNet::Distribution&
PhaseBayesNet::transition(std::size_t position, const Key& previous) const
{
    const auto& table = conditionals[position];
    if (auto it = table.find(previous); it != table.end()) return it->second;
    return marginals[position + 1];
}

namespace {

struct Counter {
    std::vector<PhaseBayesNet::Key> support;
    std::map<PhaseBayesNet::Key, std::size_t> index;
    std::vector<double> count;
    double total = 0.0;

    void add(const PhaseBayesNet::Key& key)
    {
        auto [it, inserted] = index.emplace(key, support.size());
        if (inserted) {
            support.push_back(key);
            count.push_back(0.0);
        }
        count[it->second] += 1.0;
        total += 1.0;
    }
};

// (count + alpha) / (total + alpha * |support|); support may come from a
// wider counter than the counts themselves (conditionals smooth over every
// key observed at the target position)
PhaseBayesNet::Distribution smoothed(const std::vector<PhaseBayesNet::Key>& support,
                                     const std::map<PhaseBayesNet::Key, double>& counts,
                                     double observed_total, double alpha)
{
    PhaseBayesNet::Distribution dist;
    dist.support = support;
    dist.probability.reserve(support.size());
    const double denom = observed_total + alpha * static_cast<double>(support.size());
    for (const auto& key : support) {
        const auto it = counts.find(key);
        const double c = it == counts.end() ? 0.0 : it->second;
        dist.probability.push_back((c + alpha) / denom);
    }
    return dist;
}

} // namespace

PhaseBayesNet fit_bn(const SearchArchive& archive, double alpha,
                     std::optional<int> max_front_rank)
{
    if (archive.empty()) throw std::invalid_argument("fit_bn: empty archive");
    if (alpha < 0.0) throw std::invalid_argument("fit_bn: alpha must be >= 0");

    std::vector<std::size_t> used(archive.size());
    std::iota(used.begin(), used.end(), 0);
    if (max_front_rank) {
        std::vector<std::vector<double>> points;
        points.reserve(archive.size());
        for (const auto& r : archive.records()) points.push_back(r.objectives.values());
        const auto fronts = moea::fast_nondominated_sort(points);
        used.clear();
        for (int f = 0; f < *max_front_rank && f < static_cast<int>(fronts.size()); ++f)
            used.insert(used.end(), fronts[static_cast<std::size_t>(f)].begin(),
                        fronts[static_cast<std::size_t>(f)].end());
        std::sort(used.begin(), used.end()); // keep archive order for determinism
        if (used.empty()) throw std::invalid_argument("fit_bn: rank filter removed every record");
    }

    const std::size_t n_p = archive.at(0).phase_keys.size();
    PhaseBayesNet bn;
    bn.alpha = alpha;

    std::vector<Counter> position_counts(n_p);
    std::vector<std::map<PhaseBayesNet::Key, std::map<PhaseBayesNet::Key, double>>>
        transition_counts(n_p > 0 ? n_p - 1 : 0);
    std::vector<std::map<PhaseBayesNet::Key, double>> transition_totals(
        n_p > 0 ? n_p - 1 : 0);

    for (std::size_t idx : used) {
        const auto& record = archive.at(idx);
        for (std::size_t p = 0; p < n_p; ++p) {
            const auto& key = record.phase_keys[p].bytes;
            position_counts[p].add(key);
            bn.representatives.emplace(key, record.genome.phases[p]);
        }
        for (std::size_t p = 0; p + 1 < n_p; ++p) {
            const auto& from = record.phase_keys[p].bytes;
            const auto& to = record.phase_keys[p + 1].bytes;
            transition_counts[p][from][to] += 1.0;
            transition_totals[p][from] += 1.0;
        }
    }

    bn.marginals.reserve(n_p);
    for (std::size_t p = 0; p < n_p; ++p) {
        std::map<PhaseBayesNet::Key, double> counts;
        for (std::size_t k = 0; k < position_counts[p].support.size(); ++k)
            counts[position_counts[p].support[k]] = position_counts[p].count[k];
        bn.marginals.push_back(
            smoothed(position_counts[p].support, counts, position_counts[p].total, alpha));
    }

    bn.conditionals.resize(n_p > 0 ? n_p - 1 : 0);
    for (std::size_t p = 0; p + 1 < n_p; ++p) {
        for (const auto& [from, counts] : transition_counts[p]) {
            bn.conditionals[p].emplace(
                from, smoothed(position_counts[p + 1].support, counts,
                               transition_totals[p][from], alpha));
        }
    }
    return bn;
}

namespace {

const PhaseBayesNet::Key& draw(const PhaseBayesNet::Distribution& dist, Rng& rng)
{
    const double target = rng.real01() * dist.sum();
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        acc += dist.probability[i];
        if (target < acc) return dist.support[i];
    }
    return dist.support.back();
}

} // namespace

std::vector<NetworkGenome> sample_bn(const PhaseBayesNet& bn, Rng& rng, int count)
{
    if (bn.marginals.empty()) throw std::invalid_argument("sample_bn: unfitted model");
    std::vector<NetworkGenome> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        NetworkGenome g;
        const PhaseBayesNet::Key* previous = nullptr;
        for (std::size_t p = 0; p < bn.marginals.size(); ++p) {
            const auto& dist =
                p == 0 ? bn.marginal(0) : bn.transition(p - 1, *previous);
            const auto& key = draw(dist, rng);
            g.phases.push_back(bn.representatives.at(key));
            previous = &key;
        }
        out.push_back(std::move(g));
    }
    return out;
}

void PhaseBayesNet::dump(std::ostream& os) const
{
    os << "phase-chain bayesian network, alpha=" << alpha << "\n";
    for (std::size_t p = 0; p < marginals.size(); ++p) {
        os << "p(x" << p + 1 << ")\n";
        for (std::size_t k = 0; k < marginals[p].support.size(); ++k)
            os << "  " << format_phase(representatives.at(marginals[p].support[k]))
               << "  " << marginals[p].probability[k] << "\n";
    }
    for (std::size_t p = 0; p < conditionals.size(); ++p) {
        os << "p(x" << p + 2 << " | x" << p + 1 << ")\n";
        for (const auto& [from, dist] : conditionals[p]) {
            os << "  given " << format_phase(representatives.at(from)) << "\n";
            for (std::size_t k = 0; k < dist.support.size(); ++k)
                os << "    " << format_phase(representatives.at(dist.support[k]))
                   << "  " << dist.probability[k] << "\n";
        }
    }
}

} // namespace phasenas::boa
