#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lexis/dag.hpp"
#include "lexis/metrics.hpp"
#include "lexis/repeats.hpp"

namespace lexis {

// A time step's worth of new targets, with the tokens they introduce.
struct Batch {
    std::string label;
    std::vector<std::pair<std::string, Sequence>> targets;  // (external id, tokens)
    std::vector<TokenId> new_sources;  // tokens first seen in this batch
};

struct StepReport {
    std::string label;
    std::uint64_t cost_flat = 0;  // DAG cost had the batch been added flat
    std::uint64_t cost_after_stage1 = 0;
    std::uint64_t cost_after_stage2 = 0;
    std::uint64_t targets_added = 0;
    std::uint64_t targets_skipped = 0;  // shorter than 2 tokens
    std::uint64_t targets_removed = 0;  // by steady-state retirement
    std::uint64_t sources_added = 0;
};

struct IncLexisOutcome {
    StepReport report;
    std::vector<NodeId> added_targets;  // node ids in batch order
    GLexisResult stage2;
};

// Two-stage incremental design: stage 1 adds every batch target with its
// minimum-part parse over the existing dictionary; stage 2 runs g_lexis
// restricted to the new targets' parses (and to intermediates it creates).
// New sources are registered first. Length-1 targets are skipped and counted.
// The DAG validates cleanly afterwards or an InvariantError is thrown.
IncLexisOutcome inc_lexis(LexisDag& dag, const Batch& batch);

// Deletes the given targets, then repairs the reuse invariant: intermediates
// left with out-degree 0 are erased and intermediates with out-degree 1 are
// inlined into their single remaining user, cascading until every
// intermediate is used at least twice.
void remove_batch(LexisDag& dag, const std::vector<NodeId>& targets);

struct TimelineOptions {
    double tau = 0.85;
    // Live-target cap: before a batch is added, oldest batches retire (FIFO,
    // whole batches) while live + incoming targets would exceed the cap.
    std::optional<std::uint64_t> steady_state_targets;
    unsigned threads = 1;
};

struct TimelineRecord {
    StepReport report;
    MetricRecord metrics;
    std::vector<Sequence> core_strings;  // expanded core members, removal order
};

// Replays the batches in order onto `dag` (normally empty: the first step is
// then a clean-slate build) and measures every step.
std::vector<TimelineRecord> evolve_timeline(LexisDag& dag,
                                            const std::vector<Batch>& batches,
                                            const TimelineOptions& options);

}  // namespace lexis
