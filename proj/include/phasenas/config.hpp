#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phasenas/engine.hpp"

namespace phasenas {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Flat key=value configuration, one pair per line, '#' comments. Entry
// order matters only for the repeatable seed_genome key.
ConfigEntries parse_config_text(std::string_view text);
ConfigEntries parse_config_file(const std::string& path);

const std::vector<std::string>& config_keys();

// Applies entries in order on top of the defaults; unknown keys raise
// std::invalid_argument listing every valid key. The result is validated.
SearchConfig build_search_config(const ConfigEntries& entries);

// Echo of a config as parseable flat text; build_search_config on the
// echo reproduces the config exactly.
std::string config_echo(const SearchConfig& cfg);

// Equality of everything that shapes the search outcome; run-local keys
// (out, halt_after, workers) are ignored.
bool structurally_equal(const SearchConfig& a, const SearchConfig& b);

} // namespace phasenas
