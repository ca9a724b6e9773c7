#pragma once

#include <string>

#include "slcs2/evolution.hpp"

namespace slcs2 {

// Text form of a full solution. Self-describing and diff-friendly:
//
//   slcs2-solution v1
//   grammar standard
//   agents 2
//   rules 3
//   meta fitness 0.25 phi 1 evals 2
//   agent 0
//   c 12,4,255 a 0,1,3 | NO_PACKET => MOVE AWAY SINK_NEIGHBOR
//   ...
//
// Genomes are authoritative; everything after '|' is a decoded comment the
// loader regenerates. Learned stats are not persisted (they reset at the
// start of every operation anyway).
std::string solution_to_text(const Solution& s, const GrammarConfig& gc);

// Parses the format above; grammar variant comes from the header. Throws
// std::runtime_error on malformed input.
Solution solution_from_text(const std::string& text);

} // namespace slcs2
