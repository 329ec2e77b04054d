#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include "lexis/corpus.hpp"

namespace lexis {

struct RunConfig {
    std::filesystem::path corpus_path;
    std::filesystem::path output_dir;
    double tau = 0.85;
    std::optional<std::uint64_t> steady_state;
    std::set<std::string> formats = {"csv", "json"};
    std::size_t min_target_length = 2;
    int year_min = 2003;
    int year_max = 2017;
    unsigned threads = 1;
};

// LEXIS_THREADS caps internal parallelism; defaults to the hardware count.
unsigned thread_cap_from_env();

// The timeline driver: loads the corpus, replays the annual batches, and
// writes metrics.csv / metrics.json, core_members_<label>.txt and
// run_manifest.json into the output directory. Identical inputs produce
// byte-identical outputs. Returns the process exit status (0 on success).
int run_evolve(const RunConfig& config);

}  // namespace lexis
