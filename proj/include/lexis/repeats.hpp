#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lexis/dag.hpp"

namespace lexis {

// A repeated id-subsequence over the DAG's parses, with its greedy
// left-to-right non-overlapping occurrence list (R >= 2) and the edge-cost
// savings R*len - R - len of materializing it as a new intermediate.
struct RepeatCandidate {
    std::vector<NodeId> parts;
    std::vector<Occurrence> occurrences;
    std::int64_t savings = 0;

    std::uint32_t length() const { return static_cast<std::uint32_t>(parts.size()); }
    std::uint32_t count() const { return static_cast<std::uint32_t>(occurrences.size()); }
};

// Every distinct part-subsequence of length >= 2 that occurs at least twice
// (greedy non-overlapping) across all non-source parses. Occurrences that
// span an owner's entire parse are not rewireable and do not count.
// Sorted by (savings desc, length desc, expanded string asc, parts asc).
std::vector<RepeatCandidate> enumerate_repeats(const LexisDag& dag);

struct GLexisIteration {
    NodeId node = 0;            // created or merged-into intermediate
    std::uint32_t count = 0;    // R
    std::uint32_t length = 0;   // len
    std::int64_t savings = 0;   // actual edge-cost decrease of this iteration
    bool merged = false;        // true: rewired to an existing intermediate
    std::uint32_t repairs = 0;  // reuse-invariant repairs this iteration forced
};

struct GLexisResult {
    std::uint64_t cost_before = 0;
    std::uint64_t cost_after = 0;
    std::vector<GLexisIteration> iterations;
};

// Greedy hierarchy construction: repeatedly materialize the maximum-savings
// repeat until none saves edges. Ties prefer longer subsequences, then the
// lexicographically smallest expanded token string. When a candidate's
// expansion equals an existing intermediate's string, its occurrences are
// rewired to that node instead (savings R*(len-1)).
//
// `scope`, when given, restricts candidates to occurrences lying entirely in
// the parses of the listed nodes or of intermediates created during this run.
GLexisResult g_lexis(LexisDag& dag,
                     std::optional<std::vector<NodeId>> scope = std::nullopt);

}  // namespace lexis
