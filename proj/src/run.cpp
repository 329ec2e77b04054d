#include "lexis/run.hpp"

#include <cstdlib>
#include <thread>

#include "lexis/report.hpp"
#include "lexis/version.hpp"

namespace lexis {

unsigned thread_cap_from_env() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("LEXIS_THREADS");
    if (!env || !*env) return hw;
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 1) return hw;
    return std::min<long>(value, hw) > 0 ? static_cast<unsigned>(std::min<long>(value, hw)) : 1u;
}

int run_evolve(const RunConfig& config) {
    if (config.tau < 0.0 || config.tau > 1.0) throw InputError("tau must lie in [0, 1]");

    LoadOptions load_options{config.year_min, config.year_max};
    LoadResult loaded = load_corpus(config.corpus_path, load_options);

    TokenTable tokens;
    BatchingResult batching =
        make_batches(loaded.records, tokens, config.min_target_length);

    TimelineOptions options;
    options.tau = config.tau;
    options.steady_state_targets = config.steady_state;
    options.threads = config.threads;

    LexisDag dag;
    std::vector<TimelineRecord> records = evolve_timeline(dag, batching.batches, options);

    std::filesystem::create_directories(config.output_dir);
    if (config.formats.contains("csv"))
        write_text_atomic(config.output_dir / "metrics.csv", metrics_csv(records));
    if (config.formats.contains("json"))
        write_text_atomic(config.output_dir / "metrics.json",
                          metrics_json(records).dump(2) + "\n");

    for (const TimelineRecord& r : records) {
        std::string body;
        for (const Sequence& s : r.core_strings) body += to_surface(s, tokens) + "\n";
        write_text_atomic(config.output_dir / ("core_members_" + r.metrics.label + ".txt"),
                          body);
    }

    nlohmann::json manifest;
    manifest["tool"] = std::string(kToolName);
    manifest["version"] = std::string(kToolVersion);
    manifest["corpus"] = config.corpus_path.string();
    manifest["corpus_checksum"] = checksum_file(config.corpus_path);
    manifest["config"] = {
        {"tau", config.tau},
        {"steady_state",
         config.steady_state ? nlohmann::json(*config.steady_state) : nlohmann::json()},
        {"min_target_length", config.min_target_length},
        {"year_range", {config.year_min, config.year_max}},
        {"formats", std::vector<std::string>(config.formats.begin(), config.formats.end())},
    };
    manifest["corpus_stats"] = {
        {"records", batching.records_in},
        {"targets_kept", batching.targets_kept},
        {"dropped_short", batching.dropped_short},
        {"dropped_out_of_range", loaded.dropped_out_of_range},
        {"malformed", loaded.malformed.size()},
        {"distinct_sources", batching.distinct_sources},
        {"total_length", batching.total_length},
    };
    manifest["rows"] = records.size();
    write_text_atomic(config.output_dir / "run_manifest.json", manifest.dump(2) + "\n");
    return 0;
}

}  // namespace lexis
