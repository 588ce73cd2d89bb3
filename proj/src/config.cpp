#include "phasenas/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace phasenas {

namespace {

std::string trim(std::string_view s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return std::string(s.substr(begin, end - begin + 1));
}

long parse_int(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(value, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + value + "'");
    }
    if (used != value.size())
        throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + value + "'");
    return v;
}

double parse_real(const std::string& key, const std::string& value)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + value + "'");
    }
    if (used != value.size())
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + value + "'");
    return v;
}

bool parse_flag(const std::string& key, const std::string& value)
{
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    throw std::invalid_argument("config: key '" + key + "' expects 0/1, got '" + value + "'");
}

} // namespace

ConfigEntries parse_config_text(std::string_view text)
{
    ConfigEntries entries;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not key=value: '" + stripped + "'");
        entries.emplace_back(trim(std::string_view(stripped).substr(0, eq)),
                             trim(std::string_view(stripped).substr(eq + 1)));
    }
    return entries;
}

ConfigEntries parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {
        "ablation",
        "bn_alpha",
        "bn_front_rank",
        "bn_mutate",
        "channel_width",
        "crossover_scope",
        "dedup_retry_limit",
        "evaluator",
        "exploitation_generations",
        "exploration_generations",
        "external_cmd",
        "external_timeout_s",
        "halt_after",
        "input_channels",
        "input_resolution",
        "n_o",
        "n_p",
        "out",
        "p_c",
        "p_m",
        "population_size",
        "seed",
        "seed_genome",
        "surrogate_beta",
        "surrogate_e_max",
        "surrogate_e_min",
        "surrogate_rho",
        "survival_rate_switch_threshold",
        "workers",
    };
    return keys;
}

SearchConfig build_search_config(const ConfigEntries& entries)
{
    SearchConfig cfg;
    int n_p = cfg.encoding.n_p;
    int n_o = cfg.encoding.n_o;
    int input_resolution = cfg.encoding.input_resolution;
    int channel_width = cfg.encoding.channel_width;
    int input_channels = cfg.encoding.input_channels;

    for (const auto& [key, value] : entries) {
        if (key == "n_p") n_p = static_cast<int>(parse_int(key, value));
        else if (key == "n_o") n_o = static_cast<int>(parse_int(key, value));
        else if (key == "input_resolution") input_resolution = static_cast<int>(parse_int(key, value));
        else if (key == "channel_width") channel_width = static_cast<int>(parse_int(key, value));
        else if (key == "input_channels") input_channels = static_cast<int>(parse_int(key, value));
        else if (key == "population_size") cfg.population_size = static_cast<int>(parse_int(key, value));
        else if (key == "exploration_generations") cfg.exploration_generations = static_cast<int>(parse_int(key, value));
        else if (key == "exploitation_generations") cfg.exploitation_generations = static_cast<int>(parse_int(key, value));
        else if (key == "p_c") cfg.p_c = parse_real(key, value);
        else if (key == "p_m") cfg.p_m = parse_real(key, value);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "dedup_retry_limit") cfg.dedup_retry_limit = static_cast<int>(parse_int(key, value));
        else if (key == "survival_rate_switch_threshold") {
            if (value.empty()) cfg.survival_rate_switch_threshold.reset();
            else cfg.survival_rate_switch_threshold = parse_real(key, value);
        }
        else if (key == "seed_genome") cfg.seed_genomes.push_back(value);
        else if (key == "ablation") {
            if (value == "none") {
                cfg.disable_crossover = false;
                cfg.random_search_mode = false;
                cfg.exploitation_sampler = ExploitationSampler::bn;
            } else if (value == "random-search") cfg.random_search_mode = true;
            else if (value == "no-crossover") cfg.disable_crossover = true;
            else if (value == "uniform-exploitation") cfg.exploitation_sampler = ExploitationSampler::uniform;
            else throw std::invalid_argument(
                "config: ablation must be one of none, random-search, no-crossover, uniform-exploitation");
        }
        else if (key == "crossover_scope") {
            if (value == "genome") cfg.crossover_scope = CrossoverScope::genome;
            else if (value == "phase") cfg.crossover_scope = CrossoverScope::phase;
            else throw std::invalid_argument("config: crossover_scope must be genome or phase");
        }
        else if (key == "bn_alpha") cfg.bn_alpha = parse_real(key, value);
        else if (key == "bn_mutate") cfg.bn_mutate = parse_flag(key, value);
        else if (key == "bn_front_rank") {
            if (value.empty()) cfg.bn_front_rank.reset();
            else cfg.bn_front_rank = static_cast<int>(parse_int(key, value));
        }
        else if (key == "evaluator") {
            if (value != "surrogate" && value != "external")
                throw std::invalid_argument("config: evaluator must be surrogate or external");
            cfg.evaluator = value;
        }
        else if (key == "external_cmd") cfg.external_cmd = value;
        else if (key == "external_timeout_s") cfg.external_timeout_s = parse_real(key, value);
        else if (key == "surrogate_e_min") cfg.surrogate.e_min = parse_real(key, value);
        else if (key == "surrogate_e_max") cfg.surrogate.e_max = parse_real(key, value);
        else if (key == "surrogate_beta") cfg.surrogate.beta = parse_real(key, value);
        else if (key == "surrogate_rho") cfg.surrogate.rho = parse_real(key, value);
        else if (key == "workers") cfg.workers = static_cast<int>(parse_int(key, value));
        else if (key == "out") cfg.out_dir = value;
        else if (key == "halt_after") {
            if (value.empty()) cfg.halt_after.reset();
            else cfg.halt_after = static_cast<int>(parse_int(key, value));
        }
        else {
            std::ostringstream os;
            os << "config: unknown key '" << key << "'; valid keys are:";
            for (const auto& k : config_keys()) os << ' ' << k;
            throw std::invalid_argument(os.str());
        }
    }

    cfg.encoding = EncodingConfig::make(n_p, n_o, input_resolution, channel_width, input_channels);
    cfg.validate();
    return cfg;
}

std::string config_echo(const SearchConfig& cfg)
{
    std::ostringstream os;
    os << "n_p=" << cfg.encoding.n_p << "\n";
    os << "n_o=" << cfg.encoding.n_o << "\n";
    os << "input_resolution=" << cfg.encoding.input_resolution << "\n";
    os << "channel_width=" << cfg.encoding.channel_width << "\n";
    os << "input_channels=" << cfg.encoding.input_channels << "\n";
    os << "population_size=" << cfg.population_size << "\n";
    os << "exploration_generations=" << cfg.exploration_generations << "\n";
    os << "exploitation_generations=" << cfg.exploitation_generations << "\n";
    os << "p_c=" << format_double(cfg.p_c) << "\n";
    os << "p_m=" << format_double(cfg.p_m) << "\n";
    os << "seed=" << cfg.seed << "\n";
    os << "dedup_retry_limit=" << cfg.dedup_retry_limit << "\n";
    if (cfg.survival_rate_switch_threshold)
        os << "survival_rate_switch_threshold="
           << format_double(*cfg.survival_rate_switch_threshold) << "\n";
    for (const auto& g : cfg.seed_genomes) os << "seed_genome=" << g << "\n";
    if (cfg.random_search_mode) os << "ablation=random-search\n";
    if (cfg.disable_crossover) os << "ablation=no-crossover\n";
    if (cfg.exploitation_sampler == ExploitationSampler::uniform)
        os << "ablation=uniform-exploitation\n";
    os << "crossover_scope="
       << (cfg.crossover_scope == CrossoverScope::genome ? "genome" : "phase") << "\n";
    os << "bn_alpha=" << format_double(cfg.bn_alpha) << "\n";
    os << "bn_mutate=" << (cfg.bn_mutate ? 1 : 0) << "\n";
    if (cfg.bn_front_rank) os << "bn_front_rank=" << *cfg.bn_front_rank << "\n";
    os << "evaluator=" << cfg.evaluator << "\n";
    if (!cfg.external_cmd.empty()) os << "external_cmd=" << cfg.external_cmd << "\n";
    os << "external_timeout_s=" << format_double(cfg.external_timeout_s) << "\n";
    os << "surrogate_e_min=" << format_double(cfg.surrogate.e_min) << "\n";
    os << "surrogate_e_max=" << format_double(cfg.surrogate.e_max) << "\n";
    os << "surrogate_beta=" << format_double(cfg.surrogate.beta) << "\n";
    os << "surrogate_rho=" << format_double(cfg.surrogate.rho) << "\n";
    os << "workers=" << cfg.workers << "\n";
    if (!cfg.out_dir.empty()) os << "out=" << cfg.out_dir << "\n";
    if (cfg.halt_after) os << "halt_after=" << *cfg.halt_after << "\n";
    return os.str();
}

bool structurally_equal(const SearchConfig& a, const SearchConfig& b)
{
    return a.encoding == b.encoding && a.population_size == b.population_size &&
           a.exploration_generations == b.exploration_generations &&
           a.exploitation_generations == b.exploitation_generations && a.p_c == b.p_c &&
           a.p_m == b.p_m && a.seed == b.seed &&
           a.dedup_retry_limit == b.dedup_retry_limit &&
           a.survival_rate_switch_threshold == b.survival_rate_switch_threshold &&
           a.seed_genomes == b.seed_genomes &&
           a.disable_crossover == b.disable_crossover &&
           a.exploitation_sampler == b.exploitation_sampler &&
           a.random_search_mode == b.random_search_mode &&
           a.crossover_scope == b.crossover_scope && a.bn_alpha == b.bn_alpha &&
           a.bn_mutate == b.bn_mutate && a.bn_front_rank == b.bn_front_rank &&
           a.evaluator == b.evaluator && a.external_cmd == b.external_cmd &&
           a.external_timeout_s == b.external_timeout_s &&
           a.surrogate.e_min == b.surrogate.e_min && a.surrogate.e_max == b.surrogate.e_max &&
           a.surrogate.beta == b.surrogate.beta && a.surrogate.rho == b.surrogate.rho;
}

} // namespace phasenas
