#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "lexis/dag.hpp"

namespace lexis {

// One timeline step's exported measurements.
struct MetricRecord {
    std::string label;
    double normalized_cost = 1.0;
    double normalized_cost_stage1 = 1.0;
    double avg_depth = 0.0;
    double avg_node_length = 0.0;
    std::uint64_t core_size = 0;
    std::uint64_t flat_core_size = 0;
    double h_score = 0.0;
    bool core_feasible = true;
    double diversity = 0.0;
    std::optional<double> core_stability_vs_prev;
    std::optional<double> source_similarity_vs_prev;
    std::map<std::uint64_t, std::uint64_t> source_reuse_histogram;
};

// Token-level edit distance with unit insert/delete/substitute costs.
std::size_t levenshtein(std::span<const TokenId> a, std::span<const TokenId> b);

struct DiversityResult {
    std::size_t medoid_index = 0;  // ties resolved to the first in input order
    double sigma = 0.0;            // mean normalized distance to the medoid
};

// The medoid minimizes the total edit distance to the set; sigma averages
// LD(t, medoid) / max(|t|, |medoid|) over the set. Distances are computed in
// parallel when `threads` > 1 (the result does not depend on it).
DiversityResult normalized_diversity(const std::vector<Sequence>& targets,
                                     unsigned threads = 1);

// Levenshtein-Jaccard set similarity: every element of each set is mapped to
// its most similar element of the other set (Sim = 1 - LD/max-length, ties to
// the lexicographically smallest partner), and the similarities of both
// mappings are averaged. Inputs are treated as sets (deduplicated).
double lev_jaccard(const std::vector<Sequence>& a, const std::vector<Sequence>& b);

// Edge cost relative to the flat DAG over the same targets; flat is 1.0.
double normalized_cost(const LexisDag& dag);

// Mean token length of intermediate nodes; 0 without intermediates.
double avg_node_length(const LexisDag& dag);

// Fraction of the previous step's used sources that are still used:
// |prev ∩ cur| / |prev|.
double source_similarity(const std::unordered_set<TokenId>& prev,
                         const std::unordered_set<TokenId>& cur);

// reuse count -> number of sources appearing that many times across targets.
std::map<std::uint64_t, std::uint64_t> source_reuse_histogram(
    const std::vector<Sequence>& targets);

}  // namespace lexis
