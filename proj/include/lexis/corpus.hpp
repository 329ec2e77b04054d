#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lexis/evolve.hpp"
#include "lexis/token.hpp"

namespace lexis {

// One corpus line: `part_id <TAB> year <TAB> token token ...`
struct CorpusRecord {
    std::string part_id;
    int year = 0;
    std::vector<std::string> parts;  // token surfaces, length >= 1

    friend bool operator==(const CorpusRecord&, const CorpusRecord&) = default;
};

struct MalformedLine {
    std::size_t line_number = 0;
    std::string content;
    std::string reason;
};

struct LoadOptions {
    int year_min = 2003;
    int year_max = 2017;
};

struct LoadResult {
    std::vector<CorpusRecord> records;
    std::vector<MalformedLine> malformed;
    std::size_t dropped_out_of_range = 0;
    std::size_t ignored_lines = 0;  // comments and blanks
};

// Parses the TSV corpus. Lines starting with '#' are ignored. Malformed
// lines are collected, and more than 1% of them aborts with an InputError
// summarizing the first few.
LoadResult load_corpus(const std::filesystem::path& path, const LoadOptions& options = {});
LoadResult parse_corpus(std::istream& in, const LoadOptions& options = {});

void write_corpus(std::ostream& out, const std::vector<CorpusRecord>& records);

struct BatchingResult {
    std::vector<Batch> batches;  // one per year, ascending
    std::size_t records_in = 0;
    std::size_t dropped_short = 0;     // targets below the minimum length
    std::size_t targets_kept = 0;
    std::size_t distinct_sources = 0;  // union over kept targets
    std::uint64_t total_length = 0;    // token count over kept targets
    std::size_t min_target_length = 0;
    std::size_t max_target_length = 0;
};

// Groups records into annual batches (file order within a year), interning
// tokens into `tokens`. Each batch's new_sources are the tokens never seen in
// an earlier batch. Targets shorter than `min_target_length` are dropped and
// counted.
BatchingResult make_batches(const std::vector<CorpusRecord>& records, TokenTable& tokens,
                            std::size_t min_target_length = 2);

}  // namespace lexis
