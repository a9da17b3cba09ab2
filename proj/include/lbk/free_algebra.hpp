#pragma once

#include "lbk/series.hpp"

namespace lbk {

// Products and coproducts of the tensor algebra on planar trees. Basis-level
// results are memoized in the Context; everything here is pure with respect
// to observable values.

// Word concatenation, bilinearly extended and truncated. Unit: empty forest.
Series conc_mul(const Series& u, const Series& v);

// Shuffle of words of trees. Commutative and associative.
Series shuffle_mul(const Series& u, const Series& v);

// Grafting: for trees, the sum over attachment vertices of the right factor
// with the new edge placed leftmost; extended to forests on the right by
// A |> BC = sum (A1 |> B)(A2 |> C) over the unshuffle of A, on the left by
// (x.A) |> B = x |> (A |> B) - (x |> A) |> B, with 1 |> B = B and
// u |> 1 = counit(u) 1. Not associative.
Series graft(const Series& u, const Series& v);

// Grossman-Larson product A * B = sum A1 . (A2 |> B). Associative, unit 1.
Series gl_mul(const Series& u, const Series& v);

// Deconcatenation: all cut positions of each word, trivial cuts included.
TensorSeries deconcat(const Series& w);

// Unshuffle: all complementary subword pairs; single trees are primitive.
TensorSeries unshuffle(const Series& w);

// [x,y] = xy - yx with respect to concatenation.
Series bracket_conc(const Series& x, const Series& y);

// [[x,y]] = x|>y - y|>x + [x,y]; defined on primitives.
Series double_bracket(const Series& x, const Series& y);

// True iff unshuffle(u) == u (x) 1 + 1 (x) u (and u has no constant term).
bool is_primitive(const Series& u);

Rat counit(const Series& u);

// Basis-level homogeneous products (memoized); grade = grade(a) + grade(b).
const ForestMap& graft_forests(Context& ctx, ForestId a, ForestId b);
const ForestMap& gl_forests(Context& ctx, ForestId a, ForestId b);
ForestMap shuffle_forests(Context& ctx, ForestId a, ForestId b);

}  // namespace lbk
