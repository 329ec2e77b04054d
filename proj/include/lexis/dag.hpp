#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexis/errors.hpp"
#include "lexis/token.hpp"

namespace lexis {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { Source, Intermediate, Target };

const char* to_string(NodeKind kind);

// A vertex of the hierarchy. Non-source nodes carry their parse: the ordered
// list of in-neighbors whose expanded strings concatenate to `str`. Position
// in `parts` is the occurrence index of the edge, so multi-edges fall out of
// repeated ids.
struct Node {
    NodeId id = 0;
    NodeKind kind = NodeKind::Source;
    Sequence str;                // expanded token string of this node
    std::vector<NodeId> parts;   // empty iff kind == Source
};

// A contiguous run inside an owner's parse, addressed by start offset.
struct Occurrence {
    NodeId owner = 0;
    std::uint32_t offset = 0;

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
    friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

struct Violation {
    NodeId node = 0;
    std::string constraint;  // short tag, e.g. "out-degree>=2"
    std::string detail;
};

// A minimum-edge-cost hierarchy over token sequences:
//   - sources are single tokens with no in-edges,
//   - every other node is the ordered concatenation of two or more parts,
//   - intermediates are reused (out-degree >= 2) and carry distinct strings,
//   - targets have no out-edges.
// Edge cost is the total number of edges, i.e. the sum of parse lengths.
//
// Single-writer: mutations need exclusive access; const queries may run
// concurrently between mutations. Instances are plain values and can move
// between threads.
class LexisDag {
public:
    LexisDag() = default;

    // The flat hierarchy: every target parsed directly into source tokens.
    // Throws InputError for a target shorter than 2 tokens or containing a
    // token that is not in `sources`.
    static LexisDag flat(const std::vector<TokenId>& sources,
                         const std::vector<Sequence>& targets);

    // Builds from explicit nodes without enforcing invariants (snapshot
    // loading, validate() tests). Structural requirements only: unique ids,
    // parts referencing present ids. Out-degrees, cost and the string index
    // are derived from the parts lists.
    static LexisDag assemble_unchecked(std::vector<Node> nodes);

    // --- mutation ---

    // Registers a source node for `token`; returns the existing node if the
    // token is already registered.
    NodeId add_source(TokenId token);

    // Adds a target whose parse is `parts`. Checks parts >= 2, parts live and
    // not targets, and that the parts' strings concatenate to `str`.
    NodeId add_target(const Sequence& str, std::vector<NodeId> parts);

    struct AddOutcome {
        bool created = false;  // false: an intermediate with this string exists
        NodeId node = 0;       // the new node, or the existing duplicate
    };

    // Materializes `parts` as a new intermediate and rewires every listed
    // occurrence run to a single edge from it. Occurrences must be
    // non-overlapping runs equal to `parts`, at least two of them, and none
    // may span an owner's entire parse (the rewired parse must keep >= 2
    // parts). If an intermediate with the same expanded string already
    // exists, nothing is mutated and its id is returned with created=false;
    // the caller decides whether to merge via rewire_to().
    // On creation, edge cost drops by exactly R*len - R - len.
    AddOutcome add_intermediate(const std::vector<NodeId>& parts,
                                std::vector<Occurrence> occurrences);

    // Merge path: rewires occurrence runs equal to `run` (whose expansion
    // must equal S(existing)) to single edges from `existing`. Accepts one or
    // more occurrences. Edge cost drops by exactly R*(len-1).
    void rewire_to(NodeId existing, const std::vector<NodeId>& run,
                   std::vector<Occurrence> occurrences);

    // Replaces a non-source node's parse. The new parts must concatenate to
    // the node's existing string.
    void set_parse(NodeId id, std::vector<NodeId> parts);

    void erase_target(NodeId id);
    // Requires out-degree 0.
    void erase_intermediate(NodeId id);

    struct RepairEvent {
        enum class Kind { ParseChanged, Erased } kind;
        NodeId node;
        std::vector<NodeId> old_parts;  // parse content before the change
        Sequence old_string;            // expanded string, Erased events only
    };

    // Restores the reuse invariant starting from the suspects: intermediates
    // with out-degree 0 are erased and intermediates with out-degree 1 are
    // inlined into their single remaining user, cascading until every
    // intermediate is used at least twice. Every parse change and erasure is reported so
    // callers can maintain derived indexes. Each inline lowers the edge cost
    // by one; each erasure removes the node's parse outright.
    std::vector<RepairEvent> repair_underused(const std::vector<NodeId>& suspects);

    // --- queries ---

    bool contains(NodeId id) const;
    const Node& node(NodeId id) const;
    std::uint64_t out_degree(NodeId id) const;

    std::size_t node_count() const { return live_count_; }
    std::size_t source_count() const { return source_count_; }
    std::size_t intermediate_count() const { return intermediate_count_; }
    std::size_t target_count() const { return target_count_; }

    // Sum of parse lengths == |E| with multi-edge multiplicity.
    std::uint64_t edge_cost() const { return edge_cost_; }
    // Sum of live targets' token lengths (the flat cost for the same targets).
    std::uint64_t total_target_length() const { return total_target_length_; }

    std::optional<NodeId> source_of(TokenId token) const;
    std::optional<NodeId> find_intermediate(std::span<const TokenId> str) const;

    // Live ids ascending (creation order).
    std::vector<NodeId> node_ids() const;
    std::vector<NodeId> target_ids() const;
    std::vector<NodeId> intermediate_ids() const;
    std::vector<NodeId> source_ids() const;

    // Live ids ordered by (token length, id): a topological order for any
    // valid DAG, since every part's string is strictly shorter than its
    // owner's.
    std::vector<NodeId> ids_by_length() const;

    // Longest source-to-node path length in edges (0 for sources, 1 for flat
    // targets). Whole-DAG pass; prefer depths() when querying many nodes.
    std::uint32_t node_depth(NodeId id) const;
    std::unordered_map<NodeId, std::uint32_t> depths() const;
    // Mean depth over targets; 0 when there are none.
    double avg_depth() const;

    // Full invariant sweep. Reports instead of throwing; empty means valid.
    std::vector<Violation> validate() const;

private:
    NodeId fresh_id();
    Node& live_node(NodeId id, const char* who);
    void check_occurrences(const std::vector<NodeId>& run,
                           std::vector<Occurrence>& occurrences,
                           bool allow_single) const;
    void splice_occurrences(const std::vector<NodeId>& run,
                            const std::vector<Occurrence>& occurrences,
                            NodeId replacement);

    std::vector<std::optional<Node>> nodes_;  // index == id; nullopt == erased
    std::vector<std::uint64_t> out_degree_;
    std::unordered_map<Sequence, NodeId, SequenceHash> string_index_;  // intermediates
    std::unordered_map<TokenId, NodeId> source_ids_by_token_;
    std::uint64_t edge_cost_ = 0;
    std::uint64_t total_target_length_ = 0;
    std::size_t live_count_ = 0;
    std::size_t source_count_ = 0;
    std::size_t intermediate_count_ = 0;
    std::size_t target_count_ = 0;
};

}  // namespace lexis
