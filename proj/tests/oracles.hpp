#pragma once

#include <map>
#include <set>
#include <vector>

#include "lexis/centrality.hpp"
#include "lexis/dag.hpp"

// Independent reference implementations used to freeze expected values.
// Everything here favors obviousness over speed and must stay decoupled from
// the library's algorithmic paths.
namespace lexis::testing {

// True minimum edge cost over every valid Lexis-DAG for the given targets
// (every token of which is a source). Exhaustive search over intermediate
// string sets; practical for total token length up to ~12.
std::uint64_t brute_force_min_cost(const std::vector<Sequence>& targets);

struct PathEnumeration {
    PathCount total = 0;                    // all source-to-target paths
    std::map<NodeId, PathCount> through;    // paths traversing each node
};

// Walks every source-to-target path explicitly (edge multiplicity included),
// optionally with some nodes removed. Exponential; tiny DAGs only.
PathEnumeration enumerate_paths(const LexisDag& dag, const std::set<NodeId>& removed = {});

struct SegmentationOracle {
    std::size_t min_parts = 0;
    std::vector<std::size_t> lengths;  // tie-broken: longest leading parts
};

// All segmentations of `target` into single tokens or dictionary strings,
// at least two parts total.
SegmentationOracle exhaustive_min_segmentation(const Sequence& target,
                                               const std::vector<Sequence>& dictionary);

struct NaiveCandidate {
    std::vector<NodeId> parts;
    std::vector<Occurrence> occurrences;  // greedy left-to-right non-overlap
};

// Repeated part-subsequences (R >= 2) found by direct nested scans of every
// parse, skipping whole-parse runs. Sorted by parts.
std::vector<NaiveCandidate> naive_repeats(const LexisDag& dag);

// remaining <= tau * total against the exact binary value of tau.
bool within_tau(const PathCount& remaining, const PathCount& total, double tau);

}  // namespace lexis::testing
