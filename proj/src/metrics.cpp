#include "lexis/metrics.hpp"

#include <algorithm>
#include <limits>
#include <thread>
#include <unordered_map>

namespace lexis {

std::size_t levenshtein(std::span<const TokenId> a, std::span<const TokenId> b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
            diag = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, sub});
        }
    }
    return row[b.size()];
}

DiversityResult normalized_diversity(const std::vector<Sequence>& targets,
                                     unsigned threads) {
    if (targets.empty()) throw InputError("normalized_diversity needs a non-empty set");
    const std::size_t n = targets.size();

    std::vector<std::uint64_t> totals(n, 0);
    auto fill_rows = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::uint64_t sum = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) sum += levenshtein(targets[i], targets[j]);
            totals[i] = sum;
        }
    };
    if (threads <= 1 || n < 64) {
        fill_rows(0, n);
    } else {
        unsigned workers = std::min<unsigned>(threads, std::thread::hardware_concurrency());
        workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
        std::vector<std::thread> pool;
        std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t begin = w * chunk;
            if (begin >= n) break;
            pool.emplace_back(fill_rows, begin, std::min(n, begin + chunk));
        }
        for (auto& t : pool) t.join();
    }

    std::size_t medoid = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (totals[i] < totals[medoid]) medoid = i;

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t denom = std::max(targets[i].size(), targets[medoid].size());
        if (denom == 0) continue;  // two empty sequences: distance 0
        sum += static_cast<double>(levenshtein(targets[i], targets[medoid])) /
               static_cast<double>(denom);
    }
    return {medoid, sum / static_cast<double>(n)};
}

namespace {

double similarity(const Sequence& a, const Sequence& b) {
    std::size_t denom = std::max(a.size(), b.size());
    if (denom == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(denom);
}

std::vector<Sequence> as_set(std::vector<Sequence> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Sum over every element of `from` of its best similarity into `to`; the
// sorted order of `to` makes the tie rule (smallest partner) implicit.
double best_match_sum(const std::vector<Sequence>& from, const std::vector<Sequence>& to) {
    double sum = 0.0;
    for (const Sequence& f : from) {
        double best = 0.0;
        bool any = false;
        for (const Sequence& t : to) {
            double s = similarity(f, t);
            if (!any || s > best) {
                best = s;
                any = true;
            }
        }
        sum += best;
    }
    return sum;
}

}  // namespace

double lev_jaccard(const std::vector<Sequence>& a, const std::vector<Sequence>& b) {
    std::vector<Sequence> sa = as_set(a), sb = as_set(b);
    if (sa.empty() || sb.empty()) throw InputError("lev_jaccard needs non-empty sets");
    double total = best_match_sum(sa, sb) + best_match_sum(sb, sa);
    return total / static_cast<double>(sa.size() + sb.size());
}

double normalized_cost(const LexisDag& dag) {
    if (dag.target_count() == 0) throw InputError("normalized_cost needs at least one target");
    return static_cast<double>(dag.edge_cost()) /
           static_cast<double>(dag.total_target_length());
}

double avg_node_length(const LexisDag& dag) {
    if (dag.intermediate_count() == 0) return 0.0;
    std::uint64_t sum = 0;
    for (NodeId id : dag.intermediate_ids()) sum += dag.node(id).str.size();
    return static_cast<double>(sum) / static_cast<double>(dag.intermediate_count());
}

double source_similarity(const std::unordered_set<TokenId>& prev,
                         const std::unordered_set<TokenId>& cur) {
    if (prev.empty()) throw InputError("source_similarity needs a non-empty previous set");
    std::size_t shared = 0;
    for (TokenId t : prev) shared += cur.contains(t);
    return static_cast<double>(shared) / static_cast<double>(prev.size());
}

std::map<std::uint64_t, std::uint64_t> source_reuse_histogram(
    const std::vector<Sequence>& targets) {
    std::unordered_map<TokenId, std::uint64_t> uses;
    for (const Sequence& t : targets)
        for (TokenId tok : t) uses[tok]++;
    std::map<std::uint64_t, std::uint64_t> histogram;
    for (const auto& [tok, count] : uses) histogram[count]++;
    return histogram;
}

}  // namespace lexis
