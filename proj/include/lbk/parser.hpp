#pragma once

#include <string_view>

#include "lbk/series.hpp"

namespace lbk {

// Grammar:
//   series   := ["-"] term (("+"|"-") term)*
//   term     := [rational "*"] forest
//   rational := integer ["/" positive-integer]
//   forest   := tree+ | "1"
//   tree     := color "[" tree* "]"
//   color    := identifier
// Whitespace between tokens (including between sibling trees) is ignored.
// parse(print(s)) == s on canonical forms; print(parse(text)) canonicalizes.
Series parse_series(Context* ctx, int order, std::string_view text);

TreeId parse_tree(Context* ctx, std::string_view text);

}  // namespace lbk
