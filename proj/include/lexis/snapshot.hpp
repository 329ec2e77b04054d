#pragma once

#include <iosfwd>

#include "lexis/dag.hpp"
#include "lexis/token.hpp"

namespace lexis {

// Line-oriented DAG snapshot:
//   # lexis dag v1
//   n <id> S <token-surface>
//   n <id> I <part-id>...
//   n <id> T <part-id>...
// Non-source strings are reconstructed from their parses on load. The loader
// performs structural checks only; run validate() afterwards.
void save_snapshot(std::ostream& out, const LexisDag& dag, const TokenTable& tokens);
LexisDag load_snapshot(std::istream& in, TokenTable& tokens);

}  // namespace lexis
