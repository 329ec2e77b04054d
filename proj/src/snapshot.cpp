#include "lexis/snapshot.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "lexis/errors.hpp"

namespace lexis {

void save_snapshot(std::ostream& out, const LexisDag& dag, const TokenTable& tokens) {
    out << "# lexis dag v1\n";
    for (NodeId id : dag.node_ids()) {
        const Node& n = dag.node(id);
        out << "n " << id << ' ';
        switch (n.kind) {
            case NodeKind::Source: {
                const std::string& surface = tokens.surface(n.str[0]);
                if (surface.find_first_of(" \t\n") != std::string::npos)
                    throw InputError("token surface contains whitespace: '" + surface + "'");
                out << "S " << surface;
                break;
            }
            case NodeKind::Intermediate:
                out << 'I';
                for (NodeId p : n.parts) out << ' ' << p;
                break;
            case NodeKind::Target:
                out << 'T';
                for (NodeId p : n.parts) out << ' ' << p;
                break;
        }
        out << '\n';
    }
}

LexisDag load_snapshot(std::istream& in, TokenTable& tokens) {
    struct Raw {
        NodeId id;
        char kind;
        std::string surface;
        std::vector<NodeId> parts;
    };
    std::vector<Raw> raws;
    std::unordered_map<NodeId, std::size_t> index;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream iss(line);
        std::string tag, kind;
        Raw raw;
        if (!(iss >> tag >> raw.id >> kind) || tag != "n" || kind.size() != 1 ||
            (kind[0] != 'S' && kind[0] != 'I' && kind[0] != 'T'))
            throw InputError("snapshot line " + std::to_string(line_number) + ": bad syntax");
        raw.kind = kind[0];
        if (raw.kind == 'S') {
            if (!(iss >> raw.surface))
                throw InputError("snapshot line " + std::to_string(line_number) +
                                 ": source without token");
        } else {
            NodeId p;
            while (iss >> p) raw.parts.push_back(p);
            if (raw.parts.empty())
                throw InputError("snapshot line " + std::to_string(line_number) +
                                 ": node without parts");
        }
        if (!index.emplace(raw.id, raws.size()).second)
            throw InputError("snapshot line " + std::to_string(line_number) +
                             ": duplicate node id " + std::to_string(raw.id));
        raws.push_back(std::move(raw));
    }

    // Resolve expanded strings bottom-up; parses may reference ids in any order.
    std::vector<Sequence> strings(raws.size());
    std::vector<int> state(raws.size(), 0);  // 0 new, 1 visiting, 2 done
    auto resolve = [&](auto&& self, std::size_t i) -> const Sequence& {
        if (state[i] == 2) return strings[i];
        if (state[i] == 1)
            throw InputError("snapshot contains a parse cycle at node " +
                             std::to_string(raws[i].id));
        state[i] = 1;
        if (raws[i].kind == 'S') {
            strings[i] = {tokens.intern(raws[i].surface)};
        } else {
            for (NodeId p : raws[i].parts) {
                auto it = index.find(p);
                if (it == index.end())
                    throw InputError("snapshot node " + std::to_string(raws[i].id) +
                                     " references missing node " + std::to_string(p));
                const Sequence& s = self(self, it->second);
                strings[i].insert(strings[i].end(), s.begin(), s.end());
            }
        }
        state[i] = 2;
        return strings[i];
    };

    for (std::size_t i = 0; i < raws.size(); ++i) resolve(resolve, i);

    std::vector<Node> nodes;
    nodes.reserve(raws.size());
    for (std::size_t i = 0; i < raws.size(); ++i) {
        NodeKind kind = raws[i].kind == 'S'   ? NodeKind::Source
                        : raws[i].kind == 'I' ? NodeKind::Intermediate
                                              : NodeKind::Target;
        nodes.push_back({raws[i].id, kind, std::move(strings[i]), std::move(raws[i].parts)});
    }
    return LexisDag::assemble_unchecked(std::move(nodes));
}

}  // namespace lexis
