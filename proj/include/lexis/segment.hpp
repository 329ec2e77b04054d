#pragma once

#include <span>
#include <vector>

#include "lexis/dag.hpp"

namespace lexis {

// Parses `target` over the DAG's current node strings (sources and
// intermediates) with the minimum number of parts, at least two of them
// (a whole-string dictionary hit alone is not a valid parse). Ties prefer
// longer leading parts. Every token of `target` must be a source in `dag`;
// the all-source parse is the worst case, so a parse always exists.
std::vector<NodeId> parse_with_dictionary(std::span<const TokenId> target,
                                          const LexisDag& dag);

}  // namespace lexis
