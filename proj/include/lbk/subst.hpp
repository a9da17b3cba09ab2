#pragma once

#include <map>
#include <memory>
#include <random>
#include <vector>

#include "lbk/polynomial.hpp"
#include "lbk/series.hpp"

namespace lbk {

// A filtered endomorphism of the free post-Lie algebra: one primitive image
// series per color. Acts on the whole tensor algebra by the substitution
// action (grafting-compatible on trees, concatenation-multiplicative on
// forests).
class Endomorphism {
 public:
  Endomorphism(const Context* ctx, int order, std::vector<Series> images);
  static Endomorphism identity(Context& ctx, int order);

  const Context* ctx() const { return ctx_; }
  int order() const { return order_; }
  const Series& image(int color) const { return images_[color]; }

  // Substitution action on a series, truncated at the series' order.
  Series apply(const Series& u) const;

  // (a o b)(c) = a applied to b's image of c.
  Endomorphism compose_after(const Endomorphism& inner) const;

 private:
  const Context* ctx_;
  int order_;
  std::vector<Series> images_;
  // one entry per tree; idempotent inserts keep this deterministic
  std::shared_ptr<Memo<TreeId, Series>> tree_cache_;
};

// Variable ids of the universal coefficient ring: a_c(l) for color c and Lie
// basis element l (1-based flat index).
std::uint32_t subst_var(const Context& ctx, int color, int lie_flat);
int subst_var_color(const Context& ctx, std::uint32_t var);
int subst_var_flat(const Context& ctx, std::uint32_t var);
std::string subst_var_name(const Context& ctx, std::uint32_t var);

// Character of the coefficient ring: the rational point selecting one
// concrete endomorphism, alpha(a_c(l)) = coefficient of l in the image of c.
class EndoCharacter {
 public:
  EndoCharacter(const Context* ctx, std::map<std::uint32_t, Rat> values);
  static EndoCharacter from_endomorphism(const Endomorphism& a);
  Rat operator()(std::uint32_t var) const;
  Endomorphism to_endomorphism(Context& ctx, int order) const;

 private:
  const Context* ctx_;
  std::map<std::uint32_t, Rat> values_;
};

// Linear combination of dual forests with universal-ring coefficients.
using PolySeries = std::map<ForestId, Poly>;

// Universal substitution on the dual side, over the polynomial ring in the
// a_c(l). Values are memoized per dual forest.
class UniversalSubst {
 public:
  UniversalSubst(Context& ctx, int order);

  // Full recursion over deconcatenation cuts.
  const PolySeries& forest_transform(ForestId omega);
  // Partial recursion over the grafting coproduct; supported on dual trees.
  const PolySeries& tree_transform(ForestId omega);
  // Euler projection onto Lie duals, expressed in the a_c(l): one polynomial
  // per color.
  std::vector<Poly> lie_projection(ForestId omega);

  // Co-substitution as the coaction on a dual series: a K-coefficient
  // combination of dual forests.
  PolySeries cosubstitution(const Series& dual);

  // Evaluate the coefficient ring at a character; yields the transpose of
  // the corresponding concrete substitution applied to `dual`.
  Series evaluate(const PolySeries& t, const EndoCharacter& alpha, int order) const;

  Context& ctx() { return ctx_; }
  int order() const { return order_; }

 private:
  Context& ctx_;
  int order_;
  std::map<ForestId, PolySeries> forest_memo_;
  std::map<ForestId, PolySeries> tree_memo_;
};

// Transpose of the concrete substitution action: the dual series
// sum_u <a(u), omega> u over basis forests u of grade(omega).
Series substitution_transpose(const Endomorphism& a, ForestId omega, int order);

// Deterministic generator for test/verify drivers: a random endomorphism
// whose images are small integer combinations of Lie basis elements.
Endomorphism random_endomorphism(Context& ctx, int order, std::mt19937_64& rng);
Series random_primitive(Context& ctx, int order, std::mt19937_64& rng);

}  // namespace lbk
