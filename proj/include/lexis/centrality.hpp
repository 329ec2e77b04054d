#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "lexis/dag.hpp"

namespace lexis {

// Source-to-target path counts grow multiplicatively with depth; exact
// arbitrary-precision arithmetic keeps them overflow-free.
using PathCount = boost::multiprecision::cpp_int;

// P(v) = P_S(v) * P_T(v) for every intermediate, where P_S counts paths from
// any source to v and P_T counts paths from v to any target, both with edge
// multiplicity. Pairs are sorted by node id.
std::vector<std::pair<NodeId, PathCount>> path_centrality(const LexisDag& dag);

// Number of source-to-target paths: the sum of P_S over targets.
PathCount total_paths(const LexisDag& dag);

// Which nodes G-Core may remove.
enum class NodeClass {
    Intermediates,       // core of a hierarchical DAG
    SourcesAndTargets,   // core of a flat DAG, which has no intermediates
};

struct CoreResult {
    std::vector<NodeId> members;   // removal order
    double remaining_fraction = 1.0;
    double tau = 1.0;
    // False when every candidate was removed and the remaining fraction is
    // still above tau (possible with NodeClass::Intermediates when enough
    // paths run directly from sources to targets).
    bool feasible = true;
};

// Greedy core identification: repeatedly remove the highest-path-centrality
// candidate (ties: lexicographically smaller expanded string, then smaller
// id) from an analysis copy until the remaining source-to-target paths are
// at most tau times the original count. The input DAG is never mutated.
CoreResult g_core(const LexisDag& dag, double tau, NodeClass candidates);

struct HScoreReport {
    double value = 0.0;
    CoreResult core;       // of the DAG itself
    CoreResult flat_core;  // of its flat companion
    bool degenerate = false;  // flat core empty; value forced to 0
};

// H = 1 - |Core| / |Core_f| where Core_f is the core of the flat companion
// built from the same sources and targets (candidate class
// SourcesAndTargets). A DAG with no intermediates is its own companion and
// scores 0. Clamped to [0, 1].
HScoreReport h_score_report(const LexisDag& dag, double tau);
double h_score(const LexisDag& dag, double tau);

}  // namespace lexis
