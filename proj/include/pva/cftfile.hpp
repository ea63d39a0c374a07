#pragma once

// Declaration files for CFT-type structures.
//
//   format: 1
//   generators: L W          first generator is the Virasoro element
//   weights: 2 3
//   symbol: c                same syntax as --symbol, repeatable
//   central: c
//   P1: 256*L^2 + 24*c*L''   {W_l W} = sum (D + 2l)^j P_j (two generators)
//   bracket W W: <bracket>   explicit entry, skew mirror filled in
//
// Lines starting with '#' and blank lines are ignored.

#include <optional>
#include <string>

#include "pva/cftcheck.hpp"
#include "pva/parse.hpp"

namespace pva {

struct CFTFile {
    Session session;
    CFTStructure structure;
    /// Set when P_j lines were given.
    std::optional<WAlgebraData> data;
};

CFTFile parse_cft_file(const std::string& text);

} // namespace pva
