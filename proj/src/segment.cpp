#include "lexis/segment.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace lexis {

std::vector<NodeId> parse_with_dictionary(std::span<const TokenId> target,
                                          const LexisDag& dag) {
    const std::size_t n = target.size();
    if (n < 2) throw InputError("cannot parse a target shorter than 2 tokens");

    std::vector<NodeId> source_node(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto src = dag.source_of(target[i]);
        if (!src) throw InputError("target token not registered as a source");
        source_node[i] = *src;
    }

    // Distinct intermediate string lengths bound the match probes per position.
    std::set<std::size_t> lengths;
    for (NodeId id : dag.intermediate_ids()) lengths.insert(dag.node(id).str.size());

    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;
    // parts[i]: minimum part count covering the suffix starting at i.
    std::vector<std::size_t> parts(n + 1, kInf);
    parts[n] = 0;
    for (std::size_t i = n; i-- > 0;) {
        parts[i] = 1 + parts[i + 1];  // single source token always matches
        for (std::size_t len : lengths) {
            if (len > n - i) break;
            if (dag.find_intermediate(target.subspan(i, len)))
                parts[i] = std::min(parts[i], 1 + parts[i + len]);
        }
    }

    // The target itself also needs a parse of two or more parts, so the
    // whole-string transition is excluded at the root only.
    std::size_t root_best = 1 + parts[1];
    for (std::size_t len : lengths) {
        if (len >= n) break;
        if (dag.find_intermediate(target.subspan(0, len)))
            root_best = std::min(root_best, 1 + parts[len]);
    }

    // Reconstruct left to right, preferring the longest part that still
    // completes an optimal parse.
    std::vector<NodeId> out;
    out.reserve(root_best);
    std::size_t i = 0;
    std::size_t need = root_best;
    while (i < n) {
        std::size_t chosen = 1;
        NodeId chosen_node = source_node[i];
        for (auto it = lengths.rbegin(); it != lengths.rend(); ++it) {
            std::size_t len = *it;
            if (len > n - i || (i == 0 && len == n)) continue;
            if (1 + parts[i + len] != need) continue;
            if (auto hit = dag.find_intermediate(target.subspan(i, len))) {
                chosen = len;
                chosen_node = *hit;
                break;
            }
        }
        out.push_back(chosen_node);
        i += chosen;
        need -= 1;
    }
    return out;
}

}  // namespace lexis
