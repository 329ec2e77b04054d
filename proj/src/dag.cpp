#include "lexis/dag.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>
#include <unordered_map>

namespace lexis {

namespace {

std::string id_str(NodeId id) { return std::to_string(id); }

Sequence concat_strings(const LexisDag& dag, const std::vector<NodeId>& parts) {
    Sequence out;
    std::size_t total = 0;
    for (NodeId p : parts) total += dag.node(p).str.size();
    out.reserve(total);
    for (NodeId p : parts) {
        const Sequence& s = dag.node(p).str;
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

}  // namespace

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Source: return "source";
        case NodeKind::Intermediate: return "intermediate";
        case NodeKind::Target: return "target";
    }
    return "?";
}

LexisDag LexisDag::flat(const std::vector<TokenId>& sources,
                        const std::vector<Sequence>& targets) {
    LexisDag dag;
    for (TokenId t : sources) dag.add_source(t);
    for (const Sequence& t : targets) {
        std::vector<NodeId> parts;
        parts.reserve(t.size());
        for (TokenId tok : t) {
            auto src = dag.source_of(tok);
            if (!src) throw InputError("target uses unknown token id " + std::to_string(tok));
            parts.push_back(*src);
        }
        dag.add_target(t, std::move(parts));
    }
    return dag;
}

LexisDag LexisDag::assemble_unchecked(std::vector<Node> nodes) {
    LexisDag dag;
    NodeId max_id = 0;
    for (const Node& n : nodes) max_id = std::max(max_id, n.id);
    dag.nodes_.resize(static_cast<std::size_t>(max_id) + 1);
    dag.out_degree_.assign(static_cast<std::size_t>(max_id) + 1, 0);
    for (Node& n : nodes) {
        if (dag.nodes_[n.id].has_value()) throw InputError("duplicate node id " + id_str(n.id));
        NodeId id = n.id;
        dag.nodes_[id] = std::move(n);
        dag.live_count_++;
    }
    for (const auto& slot : dag.nodes_) {
        if (!slot) continue;
        const Node& n = *slot;
        switch (n.kind) {
            case NodeKind::Source:
                dag.source_count_++;
                dag.source_ids_by_token_.emplace(n.str.empty() ? 0 : n.str[0], n.id);
                break;
            case NodeKind::Intermediate:
                dag.intermediate_count_++;
                dag.string_index_.emplace(n.str, n.id);  // first wins; validate() flags dups
                break;
            case NodeKind::Target:
                dag.target_count_++;
                dag.total_target_length_ += n.str.size();
                break;
        }
        dag.edge_cost_ += n.parts.size();
        for (NodeId p : n.parts) {
            if (p >= dag.nodes_.size() || !dag.nodes_[p])
                throw InputError("node " + id_str(n.id) + " references missing part " + id_str(p));
            dag.out_degree_[p]++;
        }
    }
    return dag;
}

NodeId LexisDag::fresh_id() {
    if (nodes_.size() >= static_cast<std::size_t>(static_cast<NodeId>(-1)))
        throw InputError("node id space exhausted");
    nodes_.emplace_back();
    out_degree_.push_back(0);
    return static_cast<NodeId>(nodes_.size() - 1);
}

Node& LexisDag::live_node(NodeId id, const char* who) {
    if (!contains(id)) throw InputError(std::string(who) + ": no such node " + id_str(id));
    return *nodes_[id];
}

NodeId LexisDag::add_source(TokenId token) {
    if (auto it = source_ids_by_token_.find(token); it != source_ids_by_token_.end())
        return it->second;
    NodeId id = fresh_id();
    nodes_[id] = Node{id, NodeKind::Source, Sequence{token}, {}};
    source_ids_by_token_.emplace(token, id);
    live_count_++;
    source_count_++;
    return id;
}

NodeId LexisDag::add_target(const Sequence& str, std::vector<NodeId> parts) {
    if (str.size() < 2) throw InputError("target shorter than 2 tokens");
    if (parts.size() < 2) throw InputError("target parse needs >= 2 parts");
    for (NodeId p : parts) {
        const Node& pn = live_node(p, "add_target");
        if (pn.kind == NodeKind::Target)
            throw InputError("target " + id_str(p) + " cannot be a parse part");
    }
    if (concat_strings(*this, parts) != str)
        throw InputError("target parse does not concatenate to the target string");
    NodeId id = fresh_id();
    for (NodeId p : parts) out_degree_[p]++;
    edge_cost_ += parts.size();
    total_target_length_ += str.size();
    nodes_[id] = Node{id, NodeKind::Target, str, std::move(parts)};
    live_count_++;
    target_count_++;
    return id;
}

void LexisDag::check_occurrences(const std::vector<NodeId>& run,
                                 std::vector<Occurrence>& occurrences,
                                 bool allow_single) const {
    const std::size_t len = run.size();
    if (len < 2) throw InputError("occurrence run needs >= 2 parts");
    if (occurrences.empty() || (!allow_single && occurrences.size() < 2))
        throw InputError("need at least two occurrences");
    std::sort(occurrences.begin(), occurrences.end());
    for (std::size_t i = 0; i < occurrences.size(); ++i) {
        const Occurrence& occ = occurrences[i];
        if (!contains(occ.owner))
            throw InputError("occurrence in missing node " + id_str(occ.owner));
        const Node& owner = *nodes_[occ.owner];
        if (owner.kind == NodeKind::Source)
            throw InputError("occurrence in source node " + id_str(occ.owner));
        if (occ.offset + len > owner.parts.size())
            throw InputError("occurrence out of range in node " + id_str(occ.owner));
        if (len == owner.parts.size())
            throw InputError("occurrence spans the entire parse of node " + id_str(occ.owner) +
                             " (rewiring would leave a 1-part parse)");
        if (!std::equal(run.begin(), run.end(), owner.parts.begin() + occ.offset))
            throw InputError("occurrence mismatch at node " + id_str(occ.owner) + " offset " +
                             std::to_string(occ.offset));
        if (i > 0 && occurrences[i - 1].owner == occ.owner &&
            occurrences[i - 1].offset + len > occ.offset)
            throw InputError("overlapping occurrences in node " + id_str(occ.owner));
    }
}

void LexisDag::splice_occurrences(const std::vector<NodeId>& run,
                                  const std::vector<Occurrence>& occurrences,
                                  NodeId replacement) {
    // occurrences sorted by (owner, offset); rebuild each owner's parse once.
    const std::size_t len = run.size();
    std::size_t i = 0;
    while (i < occurrences.size()) {
        NodeId owner_id = occurrences[i].owner;
        Node& owner = *nodes_[owner_id];
        std::vector<NodeId> rebuilt;
        rebuilt.reserve(owner.parts.size());
        std::size_t cursor = 0;
        for (; i < occurrences.size() && occurrences[i].owner == owner_id; ++i) {
            std::size_t off = occurrences[i].offset;
            rebuilt.insert(rebuilt.end(), owner.parts.begin() + cursor, owner.parts.begin() + off);
            rebuilt.push_back(replacement);
            cursor = off + len;
        }
        rebuilt.insert(rebuilt.end(), owner.parts.begin() + cursor, owner.parts.end());
        owner.parts = std::move(rebuilt);
    }
    for (NodeId p : run) out_degree_[p] -= occurrences.size();
    out_degree_[replacement] += occurrences.size();
    edge_cost_ -= occurrences.size() * (len - 1);
}

LexisDag::AddOutcome LexisDag::add_intermediate(const std::vector<NodeId>& parts,
                                                std::vector<Occurrence> occurrences) {
    for (NodeId p : parts) {
        const Node& pn = live_node(p, "add_intermediate");
        if (pn.kind == NodeKind::Target)
            throw InputError("target " + id_str(p) + " cannot be a parse part");
    }
    check_occurrences(parts, occurrences, /*allow_single=*/false);

    Sequence expanded = concat_strings(*this, parts);
    if (auto it = string_index_.find(expanded); it != string_index_.end())
        return {false, it->second};  // signal only; caller may merge via rewire_to

    NodeId id = fresh_id();
    for (NodeId p : parts) out_degree_[p]++;
    edge_cost_ += parts.size();
    nodes_[id] = Node{id, NodeKind::Intermediate, expanded, parts};
    string_index_.emplace(std::move(expanded), id);
    live_count_++;
    intermediate_count_++;
    splice_occurrences(parts, occurrences, id);
    return {true, id};
}

void LexisDag::rewire_to(NodeId existing, const std::vector<NodeId>& run,
                         std::vector<Occurrence> occurrences) {
    const Node& target_node = live_node(existing, "rewire_to");
    if (target_node.kind != NodeKind::Intermediate)
        throw InputError("rewire_to target must be an intermediate");
    check_occurrences(run, occurrences, /*allow_single=*/true);
    if (concat_strings(*this, run) != target_node.str)
        throw InputError("run does not expand to the string of node " + id_str(existing));
    splice_occurrences(run, occurrences, existing);
}

void LexisDag::set_parse(NodeId id, std::vector<NodeId> parts) {
    Node& n = live_node(id, "set_parse");
    if (n.kind == NodeKind::Source) throw InputError("sources have no parse");
    if (parts.size() < 2) throw InputError("parse needs >= 2 parts");
    for (NodeId p : parts) {
        const Node& pn = live_node(p, "set_parse");
        if (pn.kind == NodeKind::Target)
            throw InputError("target " + id_str(p) + " cannot be a parse part");
    }
    if (concat_strings(*this, parts) != n.str)
        throw InputError("parse does not concatenate to the string of node " + id_str(id));
    for (NodeId p : n.parts) out_degree_[p]--;
    for (NodeId p : parts) out_degree_[p]++;
    edge_cost_ += parts.size();
    edge_cost_ -= n.parts.size();
    n.parts = std::move(parts);
}

void LexisDag::erase_target(NodeId id) {
    Node& n = live_node(id, "erase_target");
    if (n.kind != NodeKind::Target) throw InputError("node " + id_str(id) + " is not a target");
    for (NodeId p : n.parts) out_degree_[p]--;
    edge_cost_ -= n.parts.size();
    total_target_length_ -= n.str.size();
    nodes_[id].reset();
    live_count_--;
    target_count_--;
}

void LexisDag::erase_intermediate(NodeId id) {
    Node& n = live_node(id, "erase_intermediate");
    if (n.kind != NodeKind::Intermediate)
        throw InputError("node " + id_str(id) + " is not an intermediate");
    if (out_degree_[id] != 0)
        throw InputError("intermediate " + id_str(id) + " still in use");
    for (NodeId p : n.parts) out_degree_[p]--;
    edge_cost_ -= n.parts.size();
    string_index_.erase(n.str);
    nodes_[id].reset();
    live_count_--;
    intermediate_count_--;
}

std::vector<LexisDag::RepairEvent> LexisDag::repair_underused(
    const std::vector<NodeId>& suspects) {
    std::vector<RepairEvent> events;
    std::set<NodeId> worklist;
    for (NodeId id : suspects)
        if (contains(id) && nodes_[id]->kind == NodeKind::Intermediate &&
            out_degree_[id] < 2)
            worklist.insert(id);
    if (worklist.empty()) return events;

    // Reverse index for the inline path; verified against live parses on use.
    std::unordered_map<NodeId, std::vector<NodeId>> users;
    for (NodeId id = 0; id < nodes_.size(); ++id) {
        if (!nodes_[id]) continue;
        for (NodeId p : nodes_[id]->parts)
            if (nodes_[p]->kind == NodeKind::Intermediate) users[p].push_back(id);
    }

    while (!worklist.empty()) {
        NodeId x = *worklist.begin();
        worklist.erase(worklist.begin());
        if (!contains(x)) continue;
        if (out_degree_[x] >= 2) continue;

        if (out_degree_[x] == 1) {
            NodeId user = 0;
            std::size_t offset = 0;
            bool found = false;
            for (NodeId u : users[x]) {
                if (!contains(u)) continue;
                const std::vector<NodeId>& parts = nodes_[u]->parts;
                for (std::size_t i = 0; i < parts.size() && !found; ++i) {
                    if (parts[i] == x) {
                        user = u;
                        offset = i;
                        found = true;
                    }
                }
                if (found) break;
            }
            if (!found)
                throw InvariantError("intermediate " + id_str(x) +
                                     " has out-degree 1 but no user found");
            const std::vector<NodeId>& x_parts = nodes_[x]->parts;
            const std::vector<NodeId>& u_parts = nodes_[user]->parts;
            std::vector<NodeId> rebuilt;
            rebuilt.reserve(u_parts.size() + x_parts.size() - 1);
            rebuilt.insert(rebuilt.end(), u_parts.begin(), u_parts.begin() + offset);
            rebuilt.insert(rebuilt.end(), x_parts.begin(), x_parts.end());
            rebuilt.insert(rebuilt.end(), u_parts.begin() + offset + 1, u_parts.end());
            for (NodeId p : x_parts)
                if (nodes_[p]->kind == NodeKind::Intermediate) users[p].push_back(user);
            events.push_back({RepairEvent::Kind::ParseChanged, user, u_parts, {}});
            set_parse(user, std::move(rebuilt));
        }

        // Out-degree is 0 now either way.
        events.push_back({RepairEvent::Kind::Erased, x, nodes_[x]->parts, nodes_[x]->str});
        for (NodeId p : nodes_[x]->parts)
            if (nodes_[p]->kind == NodeKind::Intermediate) worklist.insert(p);
        erase_intermediate(x);
        users.erase(x);
    }
    return events;
}

bool LexisDag::contains(NodeId id) const {
    return id < nodes_.size() && nodes_[id].has_value();
}

const Node& LexisDag::node(NodeId id) const {
    if (!contains(id)) throw InputError("no such node " + id_str(id));
    return *nodes_[id];
}

std::uint64_t LexisDag::out_degree(NodeId id) const {
    if (!contains(id)) throw InputError("no such node " + id_str(id));
    return out_degree_[id];
}

std::optional<NodeId> LexisDag::source_of(TokenId token) const {
    auto it = source_ids_by_token_.find(token);
    if (it == source_ids_by_token_.end()) return std::nullopt;
    return it->second;
}

std::optional<NodeId> LexisDag::find_intermediate(std::span<const TokenId> str) const {
    // TODO(C++20 heterogeneous unordered lookup): avoid the copy once the
    // toolchain baseline supports transparent hashing here.
    Sequence key(str.begin(), str.end());
    auto it = string_index_.find(key);
    if (it == string_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<NodeId> LexisDag::node_ids() const {
    std::vector<NodeId> out;
    out.reserve(live_count_);
    for (NodeId id = 0; id < nodes_.size(); ++id)
        if (nodes_[id]) out.push_back(id);
    return out;
}

std::vector<NodeId> LexisDag::target_ids() const {
    std::vector<NodeId> out;
    out.reserve(target_count_);
    for (NodeId id = 0; id < nodes_.size(); ++id)
        if (nodes_[id] && nodes_[id]->kind == NodeKind::Target) out.push_back(id);
    return out;
}

std::vector<NodeId> LexisDag::intermediate_ids() const {
    std::vector<NodeId> out;
    out.reserve(intermediate_count_);
    for (NodeId id = 0; id < nodes_.size(); ++id)
        if (nodes_[id] && nodes_[id]->kind == NodeKind::Intermediate) out.push_back(id);
    return out;
}

std::vector<NodeId> LexisDag::source_ids() const {
    std::vector<NodeId> out;
    out.reserve(source_count_);
    for (NodeId id = 0; id < nodes_.size(); ++id)
        if (nodes_[id] && nodes_[id]->kind == NodeKind::Source) out.push_back(id);
    return out;
}

std::vector<NodeId> LexisDag::ids_by_length() const {
    std::vector<NodeId> ids = node_ids();
    std::stable_sort(ids.begin(), ids.end(), [this](NodeId a, NodeId b) {
        return nodes_[a]->str.size() != nodes_[b]->str.size()
                   ? nodes_[a]->str.size() < nodes_[b]->str.size()
                   : a < b;
    });
    return ids;
}

std::unordered_map<NodeId, std::uint32_t> LexisDag::depths() const {
    std::unordered_map<NodeId, std::uint32_t> depth;
    depth.reserve(live_count_);
    for (NodeId id : ids_by_length()) {
        const Node& n = *nodes_[id];
        std::uint32_t d = 0;
        for (NodeId p : n.parts) d = std::max(d, depth.at(p) + 1);
        depth[id] = d;
    }
    return depth;
}

std::uint32_t LexisDag::node_depth(NodeId id) const {
    if (!contains(id)) throw InputError("no such node " + id_str(id));
    return depths().at(id);
}

double LexisDag::avg_depth() const {
    if (target_count_ == 0) return 0.0;
    auto depth = depths();
    std::uint64_t sum = 0;
    for (NodeId id : target_ids()) sum += depth.at(id);
    return static_cast<double>(sum) / static_cast<double>(target_count_);
}

std::vector<Violation> LexisDag::validate() const {
    std::vector<Violation> out;
    auto flag = [&out](NodeId id, std::string constraint, std::string detail) {
        out.push_back({id, std::move(constraint), std::move(detail)});
    };

    std::vector<std::uint64_t> recount(nodes_.size(), 0);
    std::uint64_t edges = 0;
    std::uint64_t target_len = 0;
    std::unordered_map<Sequence, NodeId, SequenceHash> seen_strings;

    for (NodeId id = 0; id < nodes_.size(); ++id) {
        if (!nodes_[id]) continue;
        const Node& n = *nodes_[id];
        if (n.id != id) flag(id, "id", "stored id mismatch");
        if (n.str.empty()) flag(id, "string-nonempty", "empty expanded string");

        if (n.kind == NodeKind::Source) {
            if (n.str.size() != 1) flag(id, "source-length-1", "source string is not one token");
            if (!n.parts.empty()) flag(id, "source-in-degree-0", "source has a parse");
            continue;
        }

        if (n.kind == NodeKind::Target) target_len += n.str.size();
        edges += n.parts.size();
        if (n.parts.size() < 2)
            flag(id, "parts>=2", "parse has " + std::to_string(n.parts.size()) + " part(s)");

        Sequence expansion;
        bool parts_ok = true;
        for (NodeId p : n.parts) {
            if (!contains(p)) {
                flag(id, "part-live", "parse references erased node " + id_str(p));
                parts_ok = false;
                continue;
            }
            const Node& pn = *nodes_[p];
            if (pn.kind == NodeKind::Target)
                flag(id, "target-out-degree-0", "parse uses target " + id_str(p));
            if (pn.str.size() >= n.str.size())
                flag(id, "acyclic", "part " + id_str(p) + " is not strictly shorter");
            expansion.insert(expansion.end(), pn.str.begin(), pn.str.end());
            recount[p]++;
        }
        if (parts_ok && expansion != n.str)
            flag(id, "concatenation", "parts do not concatenate to the node string");

        if (n.kind == NodeKind::Intermediate) {
            auto [it, inserted] = seen_strings.emplace(n.str, id);
            if (!inserted)
                flag(id, "unique-string",
                     "same expanded string as intermediate " + id_str(it->second));
            auto idx = string_index_.find(n.str);
            if (idx == string_index_.end())
                flag(id, "string-index", "intermediate missing from string index");
        }
    }

    for (NodeId id = 0; id < nodes_.size(); ++id) {
        if (!nodes_[id]) continue;
        const Node& n = *nodes_[id];
        if (recount[id] != out_degree_[id])
            flag(id, "out-degree-count",
                 "cached " + std::to_string(out_degree_[id]) + " actual " +
                     std::to_string(recount[id]));
        if (n.kind == NodeKind::Intermediate && recount[id] < 2)
            flag(id, "out-degree>=2",
                 "intermediate used " + std::to_string(recount[id]) + " time(s)");
        if (n.kind == NodeKind::Target && recount[id] != 0)
            flag(id, "target-out-degree-0", "target used as a part");
    }

    if (edges != edge_cost_)
        flag(0, "edge-cost",
             "cached cost " + std::to_string(edge_cost_) + " != edge count " +
                 std::to_string(edges));
    if (target_len != total_target_length_)
        flag(0, "target-length", "cached total target length is stale");
    return out;
}

}  // namespace lexis
