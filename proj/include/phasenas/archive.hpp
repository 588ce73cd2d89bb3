#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "phasenas/dedup.hpp"
#include "phasenas/encoding.hpp"
#include "phasenas/evaluators.hpp"

namespace phasenas {

// One evaluated architecture. The archive keeps at most one record per
// canonical network key, so records count distinct phenotypes.
struct ArchiveRecord {
    NetworkGenome genome;
    std::string network_key;                         // canonical, binary
    std::vector<dedup::CanonicalPhaseKey> phase_keys;
    ObjectiveVector objectives;
    int generation = 0;
    std::string stage; // initialization / exploration / exploitation / random
};

// Append-only, insertion-ordered history of all evaluated genomes.
class SearchArchive {
public:
    // no-op when the canonical key is already present
    bool push(ArchiveRecord record);

    bool contains(const std::string& network_key) const
    {
        return index_.contains(network_key);
    }

    const std::vector<ArchiveRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    const ArchiveRecord& at(std::size_t i) const { return records_[i]; }

private:
    std::vector<ArchiveRecord> records_;
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace phasenas
