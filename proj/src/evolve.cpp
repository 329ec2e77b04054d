#include "lexis/evolve.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lexis/centrality.hpp"
#include "lexis/segment.hpp"

namespace lexis {

namespace {

void require_valid(const LexisDag& dag, const std::string& where) {
    std::vector<Violation> violations = dag.validate();
    if (violations.empty()) return;
    const Violation& v = violations.front();
    throw InvariantError(where + ": node " + std::to_string(v.node) + " violates " +
                         v.constraint + " (" + v.detail + "); " +
                         std::to_string(violations.size()) + " violation(s) total");
}

}  // namespace

IncLexisOutcome inc_lexis(LexisDag& dag, const Batch& batch) {
    IncLexisOutcome out;
    out.report.label = batch.label;

    for (TokenId t : batch.new_sources) {
        if (!dag.source_of(t)) {
            dag.add_source(t);
            out.report.sources_added++;
        }
    }

    const std::uint64_t cost_before = dag.edge_cost();
    std::uint64_t batch_length = 0;
    for (const auto& [ext_id, seq] : batch.targets) {
        if (seq.size() < 2) {
            out.report.targets_skipped++;
            continue;
        }
        std::vector<NodeId> parts = parse_with_dictionary(seq, dag);
        out.added_targets.push_back(dag.add_target(seq, std::move(parts)));
        out.report.targets_added++;
        batch_length += seq.size();
    }
    out.report.cost_flat = cost_before + batch_length;
    out.report.cost_after_stage1 = dag.edge_cost();

    out.stage2 = g_lexis(dag, out.added_targets);
    out.report.cost_after_stage2 = dag.edge_cost();

    if (out.report.cost_after_stage2 > out.report.cost_after_stage1 ||
        out.report.cost_after_stage1 > out.report.cost_flat)
        throw InvariantError("inc_lexis(" + batch.label + "): stage costs out of order");
    require_valid(dag, "inc_lexis(" + batch.label + ")");
    return out;
}

void remove_batch(LexisDag& dag, const std::vector<NodeId>& targets) {
    for (NodeId id : targets) {
        if (!dag.contains(id) || dag.node(id).kind != NodeKind::Target)
            throw InputError("remove_batch: " + std::to_string(id) + " is not a live target");
    }
    for (NodeId id : targets) dag.erase_target(id);
    dag.repair_underused(dag.intermediate_ids());
    require_valid(dag, "remove_batch");
}

std::vector<TimelineRecord> evolve_timeline(LexisDag& dag,
                                            const std::vector<Batch>& batches,
                                            const TimelineOptions& options) {
    if (options.tau < 0.0 || options.tau > 1.0) throw InputError("tau must lie in [0, 1]");

    std::vector<TimelineRecord> records;
    records.reserve(batches.size());
    std::deque<std::vector<NodeId>> live_batches;
    std::unordered_set<TokenId> prev_used;
    std::vector<Sequence> prev_core;
    bool have_prev = false;

    for (const Batch& batch : batches) {
        std::uint64_t removed = 0;
        if (options.steady_state_targets) {
            std::uint64_t incoming = 0;
            for (const auto& [ext_id, seq] : batch.targets) incoming += seq.size() >= 2;
            while (!live_batches.empty() &&
                   dag.target_count() + incoming > *options.steady_state_targets) {
                remove_batch(dag, live_batches.front());
                removed += live_batches.front().size();
                live_batches.pop_front();
            }
        }

        IncLexisOutcome outcome = inc_lexis(dag, batch);
        outcome.report.targets_removed = removed;
        live_batches.push_back(outcome.added_targets);

        std::vector<Sequence> added_strings;
        added_strings.reserve(outcome.added_targets.size());
        std::unordered_set<TokenId> used;
        for (NodeId id : outcome.added_targets) {
            added_strings.push_back(dag.node(id).str);
            for (TokenId t : added_strings.back()) used.insert(t);
        }

        MetricRecord m;
        m.label = batch.label;
        const double flat_length = static_cast<double>(dag.total_target_length());
        m.normalized_cost = flat_length == 0 ? 1.0 : dag.edge_cost() / flat_length;
        m.normalized_cost_stage1 =
            flat_length == 0 ? 1.0 : outcome.report.cost_after_stage1 / flat_length;
        m.avg_depth = dag.avg_depth();
        m.avg_node_length = avg_node_length(dag);

        HScoreReport hs = h_score_report(dag, options.tau);
        m.core_size = hs.core.members.size();
        m.flat_core_size = hs.flat_core.members.size();
        m.h_score = hs.value;
        m.core_feasible = hs.core.feasible && hs.flat_core.feasible;

        m.diversity = added_strings.empty()
                          ? 0.0
                          : normalized_diversity(added_strings, options.threads).sigma;

        std::vector<Sequence> core_strings;
        core_strings.reserve(hs.core.members.size());
        for (NodeId id : hs.core.members) core_strings.push_back(dag.node(id).str);
        if (have_prev && !prev_core.empty() && !core_strings.empty())
            m.core_stability_vs_prev = lev_jaccard(prev_core, core_strings);
        if (have_prev && !prev_used.empty())
            m.source_similarity_vs_prev = source_similarity(prev_used, used);
        m.source_reuse_histogram = source_reuse_histogram(added_strings);

        prev_core = core_strings;
        prev_used = std::move(used);
        have_prev = true;

        records.push_back({outcome.report, std::move(m), std::move(core_strings)});
    }
    return records;
}

}  // namespace lexis
