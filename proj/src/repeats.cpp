#include "lexis/repeats.hpp"

#include <algorithm>
#include <cassert>
#include <memory>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace lexis {

namespace {

// One sighting of a subsequence inside a specific version of a parse.
// Bumping the owner's version invalidates all sightings of older versions.
struct Sighting {
    NodeId owner;
    std::uint32_t version;
    std::uint32_t offset;
};

struct Candidate {
    std::vector<NodeId> parts;
    Sequence expanded;
    std::vector<Sighting> sightings;  // append-only between compactions
    std::int64_t savings = 0;         // effective (merge-aware), valid if !dirty
    std::uint32_t live = 0;           // greedy non-overlapping count R
    bool dirty = false;               // set via mark_dirty so the queue stays in sync
    bool in_sel = false;
};

struct SelKey {
    std::int64_t savings;
    std::uint32_t length;
    const Sequence* expanded;
    const std::vector<NodeId>* parts;
};

struct SelLess {
    bool operator()(const SelKey& a, const SelKey& b) const {
        if (a.savings != b.savings) return a.savings > b.savings;
        if (a.length != b.length) return a.length > b.length;
        if (*a.expanded != *b.expanded) return *a.expanded < *b.expanded;
        return *a.parts < *b.parts;
    }
};

// Incremental index of all repeated subsequences over the in-scope parses.
// Parses are versioned; mutations invalidate the old version's sightings and
// rescan the new content, so the greedy loop never re-enumerates untouched
// parses.
class RepeatIndex {
public:
    RepeatIndex(LexisDag& dag, std::optional<std::vector<NodeId>> scope)
        : dag_(dag) {
        if (scope) {
            scoped_ = true;
            scope_.insert(scope->begin(), scope->end());
        }
        for (NodeId id : dag_.node_ids())
            if (in_scope(id)) scan(id);
    }

    // Applies the best positive-savings candidate; returns its record.
    std::optional<GLexisIteration> step() {
        refresh();
        if (sel_.empty()) return std::nullopt;
        Candidate& best = *table_.at(*sel_.begin()->parts);
        return apply(best);
    }

    // All candidates with R >= 2, sorted for stable output.
    std::vector<RepeatCandidate> snapshot() {
        refresh();
        std::vector<const Candidate*> cands;
        for (auto& [key, cand] : table_)
            if (cand->live >= 2) cands.push_back(cand.get());
        std::sort(cands.begin(), cands.end(), [](const Candidate* a, const Candidate* b) {
            return SelLess{}(SelKey{creation_savings(*a), length(*a), &a->expanded, &a->parts},
                             SelKey{creation_savings(*b), length(*b), &b->expanded, &b->parts});
        });
        std::vector<RepeatCandidate> out;
        out.reserve(cands.size());
        for (const Candidate* c : cands)
            out.push_back({c->parts, selected_occurrences(*c), creation_savings(*c)});
        return out;
    }

private:
    static std::uint32_t length(const Candidate& c) {
        return static_cast<std::uint32_t>(c.parts.size());
    }

    // Savings as if materialized fresh, regardless of merging.
    static std::int64_t creation_savings(const Candidate& c) {
        std::int64_t r = c.live, l = length(c);
        return r * l - r - l;
    }

    bool in_scope(NodeId id) const {
        if (dag_.node(id).kind == NodeKind::Source) return false;
        return !scoped_ || scope_.contains(id);
    }

    std::uint32_t version(NodeId id) const {
        auto it = versions_.find(id);
        return it == versions_.end() ? 0 : it->second;
    }

    // Every subsequence instance of `parts`, skipping the run that covers the
    // whole parse (rewiring it would leave a 1-part parse).
    template <typename Fn>
    void for_each_instance(const std::vector<NodeId>& parts, Fn&& fn) const {
        const std::size_t n = parts.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t l = 2; i + l <= n; ++l) {
                if (i == 0 && l == n) continue;
                fn(i, l);
            }
        }
    }

    void scan(NodeId owner) {
        const std::vector<NodeId>& parts = dag_.node(owner).parts;
        const std::uint32_t ver = version(owner);
        for_each_instance(parts, [&](std::size_t i, std::size_t l) {
            std::vector<NodeId> key(parts.begin() + i, parts.begin() + i + l);
            auto it = table_.find(key);
            if (it == table_.end()) {
                auto cand = std::make_unique<Candidate>();
                cand->parts = key;
                cand->expanded = expand(key);
                by_expansion_[cand->expanded].push_back(cand.get());
                it = table_.emplace(std::move(key), std::move(cand)).first;
            }
            Candidate& c = *it->second;
            c.sightings.push_back({owner, ver, static_cast<std::uint32_t>(i)});
            mark_dirty(c);
        });
    }

    // Called with the parse content *before* a mutation: flags every
    // candidate sighted there so its counts get recomputed.
    void mark_stale(const std::vector<NodeId>& old_parts) {
        for_each_instance(old_parts, [&](std::size_t i, std::size_t l) {
            std::vector<NodeId> key(old_parts.begin() + i, old_parts.begin() + i + l);
            auto it = table_.find(key);
            if (it != table_.end()) mark_dirty(*it->second);
        });
    }

    void mark_dirty(Candidate& c) {
        if (!c.dirty) {
            c.dirty = true;
            dirty_.push_back(&c);
        }
    }

    Sequence expand(const std::vector<NodeId>& parts) const {
        Sequence out;
        for (NodeId p : parts) {
            const Sequence& s = dag_.node(p).str;
            out.insert(out.end(), s.begin(), s.end());
        }
        return out;
    }

    void compact(Candidate& c) const {
        std::erase_if(c.sightings, [&](const Sighting& s) {
            return !dag_.contains(s.owner) || s.version != version(s.owner);
        });
        std::sort(c.sightings.begin(), c.sightings.end(),
                  [](const Sighting& a, const Sighting& b) {
                      return a.owner != b.owner ? a.owner < b.owner : a.offset < b.offset;
                  });
    }

    // Greedy left-to-right non-overlapping count, parses in node-id order.
    std::uint32_t greedy_count(const Candidate& c) const {
        const std::uint32_t len = length(c);
        std::uint32_t r = 0;
        NodeId cur_owner = 0;
        std::uint64_t next_free = 0;
        bool first = true;
        for (const Sighting& s : c.sightings) {
            if (first || s.owner != cur_owner) {
                cur_owner = s.owner;
                next_free = 0;
                first = false;
            }
            if (s.offset >= next_free) {
                ++r;
                next_free = static_cast<std::uint64_t>(s.offset) + len;
            }
        }
        return r;
    }

    std::vector<Occurrence> selected_occurrences(const Candidate& c) const {
        const std::uint32_t len = length(c);
        std::vector<Occurrence> out;
        NodeId cur_owner = 0;
        std::uint64_t next_free = 0;
        bool first = true;
        for (const Sighting& s : c.sightings) {
            if (first || s.owner != cur_owner) {
                cur_owner = s.owner;
                next_free = 0;
                first = false;
            }
            if (s.offset >= next_free) {
                out.push_back({s.owner, s.offset});
                next_free = static_cast<std::uint64_t>(s.offset) + len;
            }
        }
        return out;
    }

    void refresh() {
        for (Candidate* c : dirty_) recompute(*c);
        dirty_.clear();
    }

    void recompute(Candidate& c) {
        if (!c.dirty) return;
        c.dirty = false;
        if (c.in_sel) {
            sel_.erase(SelKey{c.savings, length(c), &c.expanded, &c.parts});
            c.in_sel = false;
        }
        compact(c);
        c.live = greedy_count(c);
        if (c.live < 2) return;
        std::int64_t r = c.live, l = length(c);
        c.savings = dag_.find_intermediate(c.expanded) ? r * (l - 1) : r * l - r - l;
        if (c.savings > 0) {
            sel_.insert(SelKey{c.savings, length(c), &c.expanded, &c.parts});
            c.in_sel = true;
        }
    }

    GLexisIteration apply(Candidate& chosen) {
        const std::uint64_t cost_before = dag_.edge_cost();
        std::vector<Occurrence> occs = selected_occurrences(chosen);
        assert(occs.size() == chosen.live);

        std::vector<NodeId> owners;
        for (const Occurrence& o : occs)
            if (owners.empty() || owners.back() != o.owner) owners.push_back(o.owner);
        for (NodeId owner : owners) {
            mark_stale(dag_.node(owner).parts);
            versions_[owner] = version(owner) + 1;
        }

        GLexisIteration rec;
        rec.count = static_cast<std::uint32_t>(occs.size());
        rec.length = length(chosen);
        const std::vector<NodeId> parts = chosen.parts;  // survives repairs below
        auto outcome = dag_.add_intermediate(parts, occs);
        if (outcome.created) {
            rec.node = outcome.node;
            if (scoped_) scope_.insert(outcome.node);
            scan(outcome.node);
            // Candidates with this expansion switch to merge savings now.
            if (auto it = by_expansion_.find(dag_.node(outcome.node).str);
                it != by_expansion_.end())
                for (Candidate* c : it->second) mark_dirty(*c);
        } else {
            dag_.rewire_to(outcome.node, parts, occs);
            rec.node = outcome.node;
            rec.merged = true;
        }
        for (NodeId owner : owners) scan(owner);

        // Rewiring may have consumed every other use of one of the parts;
        // restore the out-degree >= 2 invariant and keep the index in sync.
        bool needs_repair = false;
        for (NodeId p : parts)
            needs_repair |= dag_.node(p).kind == NodeKind::Intermediate &&
                            dag_.out_degree(p) < 2;
        if (needs_repair) {
            std::set<NodeId> changed;
            for (const auto& event : dag_.repair_underused(parts)) {
                mark_stale(event.old_parts);
                versions_[event.node] = version(event.node) + 1;
                if (event.kind == LexisDag::RepairEvent::Kind::ParseChanged) {
                    changed.insert(event.node);
                } else {
                    changed.erase(event.node);
                    // Candidates matching the erased string lose their merge
                    // target and fall back to creation savings.
                    if (auto it = by_expansion_.find(event.old_string);
                        it != by_expansion_.end())
                        for (Candidate* c : it->second) mark_dirty(*c);
                }
                ++rec.repairs;
            }
            for (NodeId owner : changed)
                if (dag_.contains(owner) && in_scope(owner)) scan(owner);
        }

        rec.savings = static_cast<std::int64_t>(cost_before - dag_.edge_cost());
        return rec;
    }

    LexisDag& dag_;
    bool scoped_ = false;
    std::unordered_set<NodeId> scope_;
    std::unordered_map<std::vector<NodeId>, std::unique_ptr<Candidate>, SequenceHash> table_;
    std::unordered_map<Sequence, std::vector<Candidate*>, SequenceHash> by_expansion_;
    std::unordered_map<NodeId, std::uint32_t> versions_;
    std::vector<Candidate*> dirty_;
    std::set<SelKey, SelLess> sel_;
};

}  // namespace

std::vector<RepeatCandidate> enumerate_repeats(const LexisDag& dag) {
    // The index never mutates the DAG unless step()/apply() is driven.
    RepeatIndex index(const_cast<LexisDag&>(dag), std::nullopt);
    return index.snapshot();
}

GLexisResult g_lexis(LexisDag& dag, std::optional<std::vector<NodeId>> scope) {
    GLexisResult result;
    result.cost_before = dag.edge_cost();
    RepeatIndex index(dag, std::move(scope));
    while (auto iter = index.step()) {
        assert(iter->savings > 0);
        result.iterations.push_back(*iter);
    }
    result.cost_after = dag.edge_cost();
    return result;
}

}  // namespace lexis
