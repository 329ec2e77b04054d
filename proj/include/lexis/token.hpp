#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lexis {

// One alphabet symbol (a BioBrick basic part name, or a single character in
// toy inputs), interned to a dense id.
using TokenId = std::uint32_t;

// A string over the alphabet. Length counts tokens, not characters.
using Sequence = std::vector<TokenId>;

// Bijective interning: equal surface strings map to equal ids and vice versa.
// Ids are assigned in first-appearance order.
class TokenTable {
public:
    TokenId intern(std::string_view surface);

    // Returns the id if interned, or npos.
    TokenId find(std::string_view surface) const;

    const std::string& surface(TokenId id) const;
    std::size_t size() const { return surfaces_.size(); }

    static constexpr TokenId npos = static_cast<TokenId>(-1);

private:
    std::vector<std::string> surfaces_;
    std::unordered_map<std::string, TokenId> ids_;
};

struct SequenceHash {
    std::size_t operator()(const Sequence& s) const noexcept { return hash_span(s); }
    static std::size_t hash_span(std::span<const TokenId> s) noexcept {
        // FNV-1a over the id words
        std::uint64_t h = 1469598103934665603ull;
        for (TokenId t : s) {
            h ^= t;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

// Renders a sequence as space-joined surfaces, for reports and error text.
std::string to_surface(const Sequence& seq, const TokenTable& table);

}  // namespace lexis
