#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "lexis/centrality.hpp"
#include "lexis/corpus.hpp"
#include "lexis/metrics.hpp"
#include "lexis/repeats.hpp"
#include "lexis/report.hpp"
#include "lexis/run.hpp"
#include "lexis/snapshot.hpp"
#include "lexis/version.hpp"

namespace {

using namespace lexis;

struct CommonOptions {
    std::string out_dir = "out";
    double tau = 0.85;
    std::size_t min_target_length = 2;
    std::string year_range = "2003:2017";
    std::string formats = "csv,json";
};

std::pair<int, int> parse_year_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw InputError("year range must look like 2003:2017, got '" + text + "'");
    try {
        int a = std::stoi(text.substr(0, colon));
        int b = std::stoi(text.substr(colon + 1));
        if (a > b) throw InputError("year range is reversed: '" + text + "'");
        return {a, b};
    } catch (const std::logic_error&) {
        throw InputError("year range must look like 2003:2017, got '" + text + "'");
    }
}

std::set<std::string> parse_formats(const std::string& text) {
    std::set<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item != "csv" && item != "json")
            throw InputError("unknown format '" + item + "' (expected csv and/or json)");
        out.insert(item);
    }
    if (out.empty()) throw InputError("no output format selected");
    return out;
}

void require_valid_or_die(const LexisDag& dag, const std::string& what) {
    std::vector<Violation> violations = dag.validate();
    if (violations.empty()) return;
    std::string msg = what + " failed validation:";
    for (std::size_t i = 0; i < std::min<std::size_t>(10, violations.size()); ++i)
        msg += "\n  node " + std::to_string(violations[i].node) + ": " +
               violations[i].constraint + " (" + violations[i].detail + ")";
    throw InvariantError(msg);
}

int cmd_ingest(const std::string& corpus_path, const CommonOptions& options) {
    auto [year_min, year_max] = parse_year_range(options.year_range);
    LoadResult loaded = load_corpus(corpus_path, {year_min, year_max});

    TokenTable tokens;
    BatchingResult batching =
        make_batches(loaded.records, tokens, options.min_target_length);

    std::filesystem::create_directories(options.out_dir);
    std::ostringstream normalized;
    write_corpus(normalized, loaded.records);
    write_text_atomic(std::filesystem::path(options.out_dir) / "corpus_normalized.tsv",
                      normalized.str());

    nlohmann::json report;
    report["records"] = loaded.records.size();
    report["ignored_lines"] = loaded.ignored_lines;
    report["dropped_out_of_range"] = loaded.dropped_out_of_range;
    report["dropped_short"] = batching.dropped_short;
    report["targets_kept"] = batching.targets_kept;
    report["distinct_sources"] = batching.distinct_sources;
    report["total_length"] = batching.total_length;
    report["min_target_length"] = batching.min_target_length;
    report["max_target_length"] = batching.max_target_length;
    nlohmann::json malformed = nlohmann::json::array();
    for (const MalformedLine& m : loaded.malformed)
        malformed.push_back({{"line", m.line_number}, {"reason", m.reason}});
    report["malformed"] = std::move(malformed);
    nlohmann::json years = nlohmann::json::array();
    for (const Batch& b : batching.batches)
        years.push_back({{"year", b.label},
                         {"targets", b.targets.size()},
                         {"new_sources", b.new_sources.size()}});
    report["years"] = std::move(years);
    write_text_atomic(std::filesystem::path(options.out_dir) / "ingest_report.json",
                      report.dump(2) + "\n");

    std::cout << "ingest: " << loaded.records.size() << " records, "
              << batching.targets_kept << " targets kept, "
              << batching.distinct_sources << " sources, "
              << loaded.malformed.size() << " malformed line(s)\n";
    return 0;
}

int cmd_build(const std::string& corpus_path, const CommonOptions& options) {
    auto [year_min, year_max] = parse_year_range(options.year_range);
    LoadResult loaded = load_corpus(corpus_path, {year_min, year_max});
    TokenTable tokens;
    BatchingResult batching =
        make_batches(loaded.records, tokens, options.min_target_length);

    std::vector<TokenId> sources;
    std::vector<Sequence> targets;
    for (const Batch& b : batching.batches) {
        sources.insert(sources.end(), b.new_sources.begin(), b.new_sources.end());
        for (const auto& [ext_id, seq] : b.targets) targets.push_back(seq);
    }

    LexisDag dag = LexisDag::flat(sources, targets);
    const std::uint64_t flat_cost = dag.edge_cost();
    GLexisResult built = g_lexis(dag);
    require_valid_or_die(dag, "clean-slate build");

    HScoreReport hs = h_score_report(dag, options.tau);

    std::filesystem::create_directories(options.out_dir);
    std::ostringstream snapshot;
    save_snapshot(snapshot, dag, tokens);
    write_text_atomic(std::filesystem::path(options.out_dir) / "dag.txt", snapshot.str());

    nlohmann::json report;
    report["sources"] = dag.source_count();
    report["intermediates"] = dag.intermediate_count();
    report["targets"] = dag.target_count();
    report["flat_cost"] = flat_cost;
    report["edge_cost"] = dag.edge_cost();
    report["iterations"] = built.iterations.size();
    report["normalized_cost"] = normalized_cost(dag);
    report["avg_depth"] = dag.avg_depth();
    report["avg_node_length"] = avg_node_length(dag);
    report["tau"] = options.tau;
    report["core_size"] = hs.core.members.size();
    report["flat_core_size"] = hs.flat_core.members.size();
    report["h_score"] = hs.value;
    report["core_feasible"] = hs.core.feasible;
    write_text_atomic(std::filesystem::path(options.out_dir) / "build_report.json",
                      report.dump(2) + "\n");

    std::cout << "build: cost " << flat_cost << " -> " << dag.edge_cost() << " ("
              << built.iterations.size() << " intermediates), H(" << options.tau
              << ") = " << format_double(hs.value) << "\n";
    return 0;
}

int cmd_evolve(const std::string& corpus_path, const CommonOptions& options,
               std::int64_t steady_state) {
    RunConfig config;
    config.corpus_path = corpus_path;
    config.output_dir = options.out_dir;
    config.tau = options.tau;
    if (steady_state > 0) config.steady_state = static_cast<std::uint64_t>(steady_state);
    config.formats = parse_formats(options.formats);
    config.min_target_length = options.min_target_length;
    std::tie(config.year_min, config.year_max) = parse_year_range(options.year_range);
    config.threads = thread_cap_from_env();
    int status = run_evolve(config);
    std::cout << "evolve: wrote " << options.out_dir << "\n";
    return status;
}

int cmd_core(const std::string& dag_path, const CommonOptions& options) {
    std::ifstream in(dag_path);
    if (!in) throw InputError("cannot open snapshot: " + dag_path);
    TokenTable tokens;
    LexisDag dag = load_snapshot(in, tokens);
    require_valid_or_die(dag, "snapshot " + dag_path);

    HScoreReport hs = h_score_report(dag, options.tau);

    std::filesystem::create_directories(options.out_dir);
    std::string members;
    for (NodeId id : hs.core.members) members += to_surface(dag.node(id).str, tokens) + "\n";
    write_text_atomic(std::filesystem::path(options.out_dir) / "core_members.txt", members);

    nlohmann::json report;
    report["tau"] = options.tau;
    report["core_size"] = hs.core.members.size();
    report["flat_core_size"] = hs.flat_core.members.size();
    report["h_score"] = hs.value;
    report["core_feasible"] = hs.core.feasible;
    report["remaining_fraction"] = hs.core.remaining_fraction;
    report["total_paths"] = total_paths(dag).str();
    write_text_atomic(std::filesystem::path(options.out_dir) / "core_report.json",
                      report.dump(2) + "\n");

    std::cout << "core: |Core| = " << hs.core.members.size()
              << ", |Core_f| = " << hs.flat_core.members.size()
              << ", H = " << format_double(hs.value) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lexis-DAG construction, incremental evolution and analysis"};
    app.set_version_flag("--version",
                         std::string(lexis::kToolName) + " " + std::string(lexis::kToolVersion));
    app.require_subcommand(1);

    CommonOptions options;
    std::string corpus_path;
    std::string dag_path;
    std::int64_t steady_state = 0;

    auto add_common = [&](CLI::App* cmd, bool wants_corpus) {
        if (wants_corpus)
            cmd->add_option("corpus", corpus_path, "corpus TSV file")->required();
        cmd->add_option("--out", options.out_dir, "output directory");
        cmd->add_option("--tau", options.tau, "core path-coverage threshold")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--min-target-len", options.min_target_length,
                        "drop targets shorter than this many tokens");
        cmd->add_option("--year-range", options.year_range, "inclusive year filter a:b");
    };

    CLI::App* ingest = app.add_subcommand("ingest", "validate and normalize a corpus");
    add_common(ingest, true);

    CLI::App* build = app.add_subcommand("build", "clean-slate DAG over the whole corpus");
    add_common(build, true);

    CLI::App* evolve = app.add_subcommand("evolve", "yearly incremental timeline run");
    add_common(evolve, true);
    evolve->add_option("--steady-state", steady_state, "live-target cap (0 = unlimited)");
    evolve->add_option("--format", options.formats, "comma list out of csv,json");

    CLI::App* core = app.add_subcommand("core", "core and H-score of a saved DAG");
    core->add_option("dag", dag_path, "DAG snapshot file")->required();
    core->add_option("--out", options.out_dir, "output directory");
    core->add_option("--tau", options.tau, "core path-coverage threshold")
        ->check(CLI::Range(0.0, 1.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 1;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(corpus_path, options);
        if (build->parsed()) return cmd_build(corpus_path, options);
        if (evolve->parsed()) return cmd_evolve(corpus_path, options, steady_state);
        if (core->parsed()) return cmd_core(dag_path, options);
    } catch (const lexis::InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const lexis::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
