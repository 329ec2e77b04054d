#include "lexis/centrality.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <unordered_map>

namespace lexis {

namespace {

// Compact analysis copy; node removal here never touches the real DAG.
struct AnalysisGraph {
    std::vector<NodeId> ids;                  // topological order (by string length)
    std::vector<NodeKind> kinds;
    std::vector<std::vector<std::uint32_t>> parts;            // compact indices
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> users;  // (idx, multiplicity)
    std::vector<bool> removed;

    std::vector<PathCount> from_sources;  // P_S
    std::vector<PathCount> to_targets;    // P_T

    explicit AnalysisGraph(const LexisDag& dag) {
        ids = dag.ids_by_length();
        std::unordered_map<NodeId, std::uint32_t> index;
        index.reserve(ids.size());
        for (std::uint32_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

        const std::size_t n = ids.size();
        kinds.resize(n);
        parts.resize(n);
        users.resize(n);
        removed.assign(n, false);
        for (std::uint32_t i = 0; i < n; ++i) {
            const Node& node = dag.node(ids[i]);
            kinds[i] = node.kind;
            parts[i].reserve(node.parts.size());
            for (NodeId p : node.parts) parts[i].push_back(index.at(p));
        }
        // Aggregate multiplicities so P_T sweeps touch each user once.
        for (std::uint32_t i = 0; i < n; ++i) {
            std::vector<std::uint32_t> sorted = parts[i];
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t j = 0; j < sorted.size();) {
                std::size_t k = j;
                while (k < sorted.size() && sorted[k] == sorted[j]) ++k;
                users[sorted[j]].push_back({i, static_cast<std::uint32_t>(k - j)});
                j = k;
            }
        }
    }

    void recount() {
        const std::size_t n = ids.size();
        from_sources.assign(n, 0);
        to_targets.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {  // topological: parts precede owners
            if (removed[i]) continue;
            if (kinds[i] == NodeKind::Source) {
                from_sources[i] = 1;
            } else {
                for (std::uint32_t p : parts[i])
                    if (!removed[p]) from_sources[i] += from_sources[p];
            }
        }
        for (std::size_t i = n; i-- > 0;) {  // reverse: users processed first
            if (removed[i]) continue;
            if (kinds[i] == NodeKind::Target) {
                to_targets[i] = 1;
            } else {
                for (auto [u, mult] : users[i])
                    if (!removed[u]) to_targets[i] += mult * to_targets[u];
            }
        }
    }

    PathCount total() const {
        PathCount sum = 0;
        for (std::size_t i = 0; i < ids.size(); ++i)
            if (!removed[i] && kinds[i] == NodeKind::Target) sum += from_sources[i];
        return sum;
    }
};

// Exact comparison remaining <= tau * total using the binary value of tau.
bool within_fraction(const PathCount& remaining, const PathCount& total, double tau) {
    if (tau < 0.0 || tau > 1.0) throw InputError("tau must lie in [0, 1]");
    if (tau == 0.0) return remaining == 0;
    int exp = 0;
    double mant = std::frexp(tau, &exp);  // tau = mant * 2^exp, mant in [0.5, 1)
    auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    // remaining <= total * scaled * 2^(exp-53)
    return (remaining << (53 - exp)) <= total * scaled;
}

}  // namespace

std::vector<std::pair<NodeId, PathCount>> path_centrality(const LexisDag& dag) {
    AnalysisGraph g(dag);
    g.recount();
    std::vector<std::pair<NodeId, PathCount>> out;
    for (std::size_t i = 0; i < g.ids.size(); ++i)
        if (g.kinds[i] == NodeKind::Intermediate)
            out.emplace_back(g.ids[i], g.from_sources[i] * g.to_targets[i]);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

PathCount total_paths(const LexisDag& dag) {
    AnalysisGraph g(dag);
    g.recount();
    return g.total();
}

CoreResult g_core(const LexisDag& dag, double tau, NodeClass candidates) {
    if (tau < 0.0 || tau > 1.0) throw InputError("tau must lie in [0, 1]");
    AnalysisGraph g(dag);
    g.recount();
    const PathCount original = g.total();

    auto is_candidate = [&](std::size_t i) {
        if (g.removed[i]) return false;
        return candidates == NodeClass::Intermediates
                   ? g.kinds[i] == NodeKind::Intermediate
                   : g.kinds[i] != NodeKind::Intermediate;
    };

    CoreResult result;
    result.tau = tau;
    PathCount remaining = original;
    while (!within_fraction(remaining, original, tau)) {
        std::size_t best = g.ids.size();
        PathCount best_paths = 0;
        for (std::size_t i = 0; i < g.ids.size(); ++i) {
            if (!is_candidate(i)) continue;
            PathCount paths = g.from_sources[i] * g.to_targets[i];
            if (paths == 0) continue;
            if (best == g.ids.size() || paths > best_paths) {
                best = i;
                best_paths = std::move(paths);
            } else if (paths == best_paths) {
                const Sequence& cur = dag.node(g.ids[i]).str;
                const Sequence& champ = dag.node(g.ids[best]).str;
                if (cur < champ || (cur == champ && g.ids[i] < g.ids[best])) best = i;
            }
        }
        if (best == g.ids.size()) {
            result.feasible = false;  // nothing removable still carries paths
            break;
        }
        g.removed[best] = true;
        result.members.push_back(g.ids[best]);
        g.recount();
        remaining = g.total();
    }

    result.remaining_fraction =
        original == 0 ? 0.0
                      : static_cast<double>(remaining) / static_cast<double>(original);
    return result;
}

HScoreReport h_score_report(const LexisDag& dag, double tau) {
    HScoreReport report;
    // A DAG without intermediates is its own flat companion.
    NodeClass cls = dag.intermediate_count() > 0 ? NodeClass::Intermediates
                                                 : NodeClass::SourcesAndTargets;
    report.core = g_core(dag, tau, cls);

    std::vector<TokenId> source_tokens;
    for (NodeId id : dag.source_ids()) source_tokens.push_back(dag.node(id).str[0]);
    std::vector<Sequence> targets;
    for (NodeId id : dag.target_ids()) targets.push_back(dag.node(id).str);
    LexisDag flat = LexisDag::flat(source_tokens, targets);
    report.flat_core = g_core(flat, tau, NodeClass::SourcesAndTargets);

    if (report.flat_core.members.empty()) {
        report.degenerate = true;
        report.value = 0.0;
        return report;
    }
    double h = 1.0 - static_cast<double>(report.core.members.size()) /
                         static_cast<double>(report.flat_core.members.size());
    report.value = std::clamp(h, 0.0, 1.0);
    return report;
}

double h_score(const LexisDag& dag, double tau) { return h_score_report(dag, tau).value; }

}  // namespace lexis
