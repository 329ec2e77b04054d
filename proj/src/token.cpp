#include "lexis/token.hpp"

#include "lexis/errors.hpp"

namespace lexis {

TokenId TokenTable::intern(std::string_view surface) {
    auto it = ids_.find(std::string(surface));
    if (it != ids_.end()) return it->second;
    if (surfaces_.size() >= npos) throw InputError("token table full");
    TokenId id = static_cast<TokenId>(surfaces_.size());
    surfaces_.emplace_back(surface);
    ids_.emplace(surfaces_.back(), id);
    return id;
}

TokenId TokenTable::find(std::string_view surface) const {
    auto it = ids_.find(std::string(surface));
    return it == ids_.end() ? npos : it->second;
}

const std::string& TokenTable::surface(TokenId id) const {
    if (id >= surfaces_.size()) throw InputError("unknown token id " + std::to_string(id));
    return surfaces_[id];
}

std::string to_surface(const Sequence& seq, const TokenTable& table) {
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += table.surface(seq[i]);
    }
    return out;
}

}  // namespace lexis
