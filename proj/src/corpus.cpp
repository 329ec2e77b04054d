#include "lexis/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "lexis/errors.hpp"

namespace lexis {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t begin = 0;
    while (begin <= s.size()) {
        std::size_t end = s.find(sep, begin);
        if (end == std::string::npos) end = s.size();
        out.push_back(s.substr(begin, end - begin));
        begin = end + 1;
    }
    return out;
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(std::move(tok));
    return out;
}

}  // namespace

LoadResult parse_corpus(std::istream& in, const LoadOptions& options) {
    LoadResult result;
    std::string line;
    std::size_t line_number = 0;
    std::size_t data_lines = 0;

    auto malformed = [&](const std::string& reason) {
        result.malformed.push_back({line_number, line, reason});
    };

    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') {
            result.ignored_lines++;
            continue;
        }
        ++data_lines;

        std::vector<std::string> fields = split(line, '\t');
        if (fields.size() != 3) {
            malformed("expected 3 tab-separated fields, got " + std::to_string(fields.size()));
            continue;
        }
        if (fields[0].empty()) {
            malformed("empty part id");
            continue;
        }
        int year = 0;
        auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), year);
        if (ec != std::errc() || ptr != fields[1].data() + fields[1].size()) {
            malformed("year is not an integer: '" + fields[1] + "'");
            continue;
        }
        std::vector<std::string> parts = split_tokens(fields[2]);
        if (parts.empty()) {
            malformed("no tokens");
            continue;
        }
        if (year < options.year_min || year > options.year_max) {
            result.dropped_out_of_range++;
            continue;
        }
        result.records.push_back({std::move(fields[0]), year, std::move(parts)});
    }

    if (data_lines > 0 && result.malformed.size() * 100 > data_lines) {
        std::string summary = std::to_string(result.malformed.size()) + " of " +
                              std::to_string(data_lines) + " lines malformed (>1%):";
        for (std::size_t i = 0; i < std::min<std::size_t>(5, result.malformed.size()); ++i)
            summary += "\n  line " + std::to_string(result.malformed[i].line_number) + ": " +
                       result.malformed[i].reason;
        throw InputError(summary);
    }
    return result;
}

LoadResult load_corpus(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open corpus file: " + path.string());
    return parse_corpus(in, options);
}

void write_corpus(std::ostream& out, const std::vector<CorpusRecord>& records) {
    for (const CorpusRecord& r : records) {
        out << r.part_id << '\t' << r.year << '\t';
        for (std::size_t i = 0; i < r.parts.size(); ++i) {
            if (i > 0) out << ' ';
            out << r.parts[i];
        }
        out << '\n';
    }
}

BatchingResult make_batches(const std::vector<CorpusRecord>& records, TokenTable& tokens,
                            std::size_t min_target_length) {
    BatchingResult result;
    result.records_in = records.size();
    result.min_target_length = std::numeric_limits<std::size_t>::max();

    std::map<int, std::vector<const CorpusRecord*>> by_year;
    for (const CorpusRecord& r : records) by_year[r.year].push_back(&r);

    std::unordered_set<TokenId> seen;
    for (const auto& [year, year_records] : by_year) {
        Batch batch;
        batch.label = std::to_string(year);
        for (const CorpusRecord* r : year_records) {
            if (r->parts.size() < min_target_length) {
                result.dropped_short++;
                continue;
            }
            Sequence seq;
            seq.reserve(r->parts.size());
            for (const std::string& surface : r->parts) {
                TokenId id = tokens.intern(surface);
                if (seen.insert(id).second) batch.new_sources.push_back(id);
                seq.push_back(id);
            }
            result.targets_kept++;
            result.total_length += seq.size();
            result.min_target_length = std::min(result.min_target_length, seq.size());
            result.max_target_length = std::max(result.max_target_length, seq.size());
            batch.targets.emplace_back(r->part_id, std::move(seq));
        }
        if (!batch.targets.empty()) result.batches.push_back(std::move(batch));
    }
    result.distinct_sources = seen.size();
    if (result.targets_kept == 0) result.min_target_length = 0;
    return result;
}

}  // namespace lexis
