#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasenas/boa.hpp"
#include "phasenas/complexity.hpp"
#include "phasenas/config.hpp"
#include "phasenas/dedup.hpp"
#include "phasenas/encoding.hpp"
#include "phasenas/engine.hpp"
#include "phasenas/evaluators.hpp"
#include "phasenas/metrics.hpp"

namespace {

using namespace phasenas;

void print_front_summary(const SearchResult& result)
{
    std::cout << "archive: " << result.archive.size() << " records, "
              << result.offspring_created << " offspring created, "
              << result.evaluator_calls << " evaluator calls\n";
    std::cout << "final front (" << result.front.size() << " architectures):\n";
    std::cout << "  error,flops,genome\n";
    for (const auto& r : result.front)
        std::cout << "  " << format_double(r.objectives.error) << ','
                  << format_double(r.objectives.complexity) << ',' << format_genome(r.genome)
                  << "\n";
    if (!result.trace.empty()) {
        const auto& last = result.trace.back();
        std::cout << "final normalized hv: " << format_double(last.normalized_hv) << "\n";
    }
    if (!result.config.out_dir.empty())
        std::cout << "run directory: " << result.config.out_dir << "\n";
}

int cmd_search(const std::string& config_path, const ConfigEntries& overrides,
               const std::string& resume_path)
{
    if (!resume_path.empty()) {
        // run-local keys travel separately; structural keys, when given,
        // must match the checkpointed config
        ConfigEntries structural;
        std::optional<std::string> out_override;
        if (!config_path.empty()) structural = parse_config_file(config_path);
        structural.insert(structural.end(), overrides.begin(), overrides.end());
        std::erase_if(structural, [&](const auto& kv) {
            if (kv.first == "out") {
                out_override = kv.second;
                return true;
            }
            return kv.first == "workers" || kv.first == "halt_after";
        });
        std::optional<SearchConfig> expected;
        if (!structural.empty()) expected = build_search_config(structural);
        const SearchResult result = resume_search(resume_path, expected, out_override);
        print_front_summary(result);
        return 0;
    }

    ConfigEntries entries;
    if (!config_path.empty()) entries = parse_config_file(config_path);
    entries.insert(entries.end(), overrides.begin(), overrides.end());
    const SearchConfig cfg = build_search_config(entries);
    const SearchResult result =
        cfg.random_search_mode ? run_random_search(cfg) : run_search(cfg);
    if (!result.completed)
        std::cout << "halted after " << result.trace.size()
                  << " trace rows; checkpoint written\n";
    print_front_summary(result);
    return 0;
}

int cmd_evaluate(const std::string& genome_text, const ConfigEntries& overrides)
{
    const SearchConfig cfg = build_search_config(overrides);
    const NetworkGenome genome = parse_genome(genome_text, cfg.encoding);
    const NetworkArchitecture arch = decode_network(genome, cfg.encoding);
    const ComplexityReport report = estimate_complexity(arch);
    std::cout << export_architecture_text(arch);
    std::cout << "active_nodes " << report.active_nodes << "\n";
    std::cout << "active_connections " << report.active_connections << "\n";
    std::cout << "params " << report.params << "\n";
    std::cout << "flops " << report.flops << "\n";
    if (report.active_nodes == 0)
        std::cout << "note: no active nodes; phases pass their input through\n";
    std::cout << "surrogate_error " << format_double(surrogate_error(genome, arch, cfg.surrogate))
              << "\n";
    return 0;
}

int cmd_census(int n_o, bool serial)
{
    std::cout << "n_o,total,unique,ratio\n";
    for (int n = 2; n <= n_o; ++n) {
        const auto result = serial ? dedup::redundancy_census_serial(n) : dedup::redundancy_census(n);
        std::cout << n << ',' << result.total << ',' << result.unique << ','
                  << format_double(result.ratio()) << "\n";
    }
    return 0;
}

int cmd_hv(const std::string& front_path, const std::string& ref_text)
{
    ObjectiveVector ref;
    {
        std::istringstream is(ref_text);
        char comma = 0;
        if (!(is >> ref.error >> comma >> ref.complexity) || comma != ',')
            throw std::invalid_argument("hv: --ref expects 'error,complexity'");
    }
    std::ifstream in(front_path);
    if (!in) throw std::invalid_argument("hv: cannot read front file '" + front_path + "'");
    std::vector<ObjectiveVector> points;
    std::string line;
    int error_col = 0;
    int complexity_col = 1;
    bool header_checked = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!header_checked) {
            header_checked = true;
            bool is_header = false;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == "error") { error_col = static_cast<int>(i); is_header = true; }
                if (fields[i] == "flops" || fields[i] == "complexity")
                    { complexity_col = static_cast<int>(i); is_header = true; }
            }
            if (is_header) continue;
        }
        if (static_cast<int>(fields.size()) <= std::max(error_col, complexity_col))
            throw std::invalid_argument("hv: malformed front line: " + line);
        points.push_back({std::stod(fields[static_cast<std::size_t>(error_col)]),
                          std::stod(fields[static_cast<std::size_t>(complexity_col)])});
    }
    std::cout << format_double(metrics::hypervolume_2d(points, ref)) << "\n";
    return 0;
}

int cmd_export_dot(const std::string& genome_text, const ConfigEntries& overrides,
                   const std::string& out_path)
{
    const SearchConfig cfg = build_search_config(overrides);
    const NetworkGenome genome = parse_genome(genome_text, cfg.encoding);
    const std::string dot = export_architecture_dot(decode_network(genome, cfg.encoding));
    if (out_path.empty()) {
        std::cout << dot;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("export-dot: cannot write '" + out_path + "'");
        out << dot;
    }
    return 0;
}

int cmd_bn_dump(const std::string& archive_path, double alpha, const ConfigEntries& overrides)
{
    const SearchConfig cfg = build_search_config(overrides);
    std::ifstream in(archive_path);
    if (!in) throw std::invalid_argument("bn-dump: cannot read '" + archive_path + "'");
    SearchArchive archive;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.rfind("genome,", 0) == 0) { first = false; continue; }
        first = false;
        const auto comma = line.find(',');
        const std::string genome_text = comma == std::string::npos ? line : line.substr(0, comma);
        ArchiveRecord record;
        record.genome = parse_genome(genome_text, cfg.encoding);
        record.phase_keys = dedup::canonical_network(record.genome);
        record.network_key = dedup::join_network_key(record.phase_keys);
        archive.push(std::move(record));
    }
    boa::fit_bn(archive, alpha).dump(std::cout);
    return 0;
}

ConfigEntries parse_set_overrides(const std::vector<std::string>& sets)
{
    ConfigEntries entries;
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        entries.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return entries;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"multi-objective evolutionary search over phase-encoded architectures"};
    app.require_subcommand(1);

    // search
    auto* search = app.add_subcommand("search", "run a search and write a run directory");
    std::string config_path;
    std::string resume_path;
    std::string out_dir;
    std::string evaluator;
    std::string external_cmd;
    std::string ablation;
    std::vector<std::string> sets;
    std::int64_t seed = -1;
    int workers = 0;
    search->add_option("--config", config_path, "flat key=value config file");
    search->add_option("--resume", resume_path, "checkpoint file to resume from");
    search->add_option("--seed", seed, "random seed");
    search->add_option("--workers", workers, "evaluation worker count");
    search->add_option("--evaluator", evaluator, "surrogate or external");
    search->add_option("--external-cmd", external_cmd, "external evaluator command line");
    search->add_option("--ablation", ablation,
                       "none, random-search, no-crossover or uniform-exploitation");
    search->add_option("--out", out_dir, "run directory");
    search->add_option("--set", sets, "extra key=value override, repeatable");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "decode a genome and report its objectives");
    std::string genome_text;
    std::vector<std::string> eval_sets;
    evaluate->add_option("genome", genome_text, "genome string")->required();
    evaluate->add_option("--set", eval_sets, "config override, repeatable");

    // census
    auto* census = app.add_subcommand("census", "count phase-isomorphism classes");
    int census_n_o = 4;
    bool census_serial = false;
    census->add_option("n_o", census_n_o, "largest node count to enumerate")->required();
    census->add_flag("--serial", census_serial, "use the serial reference implementation");

    // hv
    auto* hv = app.add_subcommand("hv", "hypervolume of a front file");
    std::string front_path;
    std::string ref_text = "1.01,1.01";
    hv->add_option("front", front_path, "CSV with error,flops columns")->required();
    hv->add_option("--ref", ref_text, "reference point 'error,complexity'");

    // export-dot
    auto* export_dot = app.add_subcommand("export-dot", "write a DOT digraph of a genome");
    std::string dot_genome;
    std::string dot_out;
    std::vector<std::string> dot_sets;
    export_dot->add_option("genome", dot_genome, "genome string")->required();
    export_dot->add_option("--out", dot_out, "output file (default stdout)");
    export_dot->add_option("--set", dot_sets, "config override, repeatable");

    // bn-dump
    auto* bn_dump = app.add_subcommand("bn-dump", "fit and print a phase Bayesian network");
    std::string bn_archive;
    double bn_alpha = 1.0;
    std::vector<std::string> bn_sets;
    bn_dump->add_option("archive", bn_archive, "archive.csv of a run")->required();
    bn_dump->add_option("--alpha", bn_alpha, "Laplace smoothing");
    bn_dump->add_option("--set", bn_sets, "config override, repeatable");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*search) {
            ConfigEntries overrides = parse_set_overrides(sets);
            if (seed >= 0) overrides.emplace_back("seed", std::to_string(seed));
            if (workers > 0) overrides.emplace_back("workers", std::to_string(workers));
            if (!evaluator.empty()) overrides.emplace_back("evaluator", evaluator);
            if (!external_cmd.empty()) overrides.emplace_back("external_cmd", external_cmd);
            if (!ablation.empty()) overrides.emplace_back("ablation", ablation);
            if (!out_dir.empty()) overrides.emplace_back("out", out_dir);
            return cmd_search(config_path, overrides, resume_path);
        }
        if (*evaluate) return cmd_evaluate(genome_text, parse_set_overrides(eval_sets));
        if (*census) return cmd_census(census_n_o, census_serial);
        if (*hv) return cmd_hv(front_path, ref_text);
        if (*export_dot) return cmd_export_dot(dot_genome, parse_set_overrides(dot_sets), dot_out);
        if (*bn_dump) return cmd_bn_dump(bn_archive, bn_alpha, parse_set_overrides(bn_sets));
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
