#pragma once

#include <initializer_list>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexis/dag.hpp"
#include "lexis/token.hpp"

namespace lexis::testing {

// Single-character tokens interned alphabetically, so token-id order matches
// surface order in every test.
struct CharAlphabet {
    TokenTable table;

    CharAlphabet() {
        for (char c = 'a'; c <= 'z'; ++c) table.intern(std::string(1, c));
    }

    Sequence seq(std::string_view s) const {
        Sequence out;
        out.reserve(s.size());
        for (char c : s) out.push_back(table.find(std::string_view(&c, 1)));
        return out;
    }

    std::vector<Sequence> seqs(std::initializer_list<std::string_view> strings) const {
        std::vector<Sequence> out;
        for (std::string_view s : strings) out.push_back(seq(s));
        return out;
    }

    std::vector<TokenId> tokens_of(const std::vector<Sequence>& targets) const {
        std::set<TokenId> distinct;
        for (const Sequence& t : targets) distinct.insert(t.begin(), t.end());
        return {distinct.begin(), distinct.end()};
    }
};

inline LexisDag flat_of(const CharAlphabet& alpha,
                        std::initializer_list<std::string_view> targets) {
    std::vector<Sequence> seqs = alpha.seqs(targets);
    return LexisDag::flat(alpha.tokens_of(seqs), seqs);
}

// Random target sets over a small alphabet; `total_budget` caps the summed
// token length.
inline std::vector<Sequence> random_targets(std::mt19937_64& rng, std::size_t alphabet,
                                            std::size_t max_targets,
                                            std::size_t total_budget) {
    std::uniform_int_distribution<std::size_t> target_count(1, max_targets);
    std::uniform_int_distribution<TokenId> token(0, static_cast<TokenId>(alphabet - 1));
    std::vector<Sequence> out;
    std::size_t n = target_count(rng);
    std::size_t budget = total_budget;
    for (std::size_t i = 0; i < n && budget >= 2; ++i) {
        std::size_t max_len = std::min<std::size_t>(budget, total_budget);
        std::uniform_int_distribution<std::size_t> len_dist(2, max_len);
        std::size_t len = len_dist(rng);
        Sequence t;
        t.reserve(len);
        for (std::size_t j = 0; j < len; ++j) t.push_back(token(rng));
        budget -= len;
        out.push_back(std::move(t));
    }
    return out;
}

inline std::vector<TokenId> tokens_of(const std::vector<Sequence>& targets) {
    std::set<TokenId> distinct;
    for (const Sequence& t : targets) distinct.insert(t.begin(), t.end());
    return {distinct.begin(), distinct.end()};
}

inline Sequence expansion_of(const LexisDag& dag, const std::vector<NodeId>& parts) {
    Sequence out;
    for (NodeId p : parts) {
        const Sequence& s = dag.node(p).str;
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

}  // namespace lexis::testing
