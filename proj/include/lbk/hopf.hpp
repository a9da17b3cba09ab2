#pragma once

#include <span>
#include <vector>

#include "lbk/kernels.hpp"
#include "lbk/series.hpp"

namespace lbk {

// Eulerian idempotent for the pair (concatenation, unshuffle): the
// convolution logarithm of the identity. Projects onto the free Lie algebra
// inside the tensor algebra; identity on primitives, kills symmetrized
// products.
Series euler_idempotent(const Series& w);
const ForestMap& euler_forest(Context& ctx, ForestId f);

// Projection e^{*p}/p! onto the p-th symmetrized component; the components
// sum to the identity.
Series eulerian_component(const Series& w, int p);

// Formal exp/log for the concatenation product. exp requires no constant
// term; log requires constant term 1. Mutually inverse up to the order.
Series exp_conc(const Series& x);
Series log_conc(const Series& s);

// Same power series for the Grossman-Larson product.
Series exp_gl(const Series& x);
Series log_gl(const Series& s);

// Lyndon-word basis of the free Lie algebra on the graded tree alphabet
// (letters ordered by grade, then canonical string). Elements carry their
// standard-bracketing expansion; flat indices are 1-based, grade-major.
const std::vector<LieElem>& lie_basis(Context& ctx, int grade);
Series lie_elem_series(const Context& ctx, const LieElem& l, int order);

// Dual-side section of the Lie piece at `grade`: the unique element of the
// image of the transposed Euler idempotent pairing as `coords` against the
// Lie basis. Homogeneous of that grade.
Series embed_lie_dual(Context& ctx, int grade, std::span<const Rat> coords,
                      int order);

// PBW map on the dual side: a multiset of Lie basis elements (flat indices)
// maps to the shuffle product of the Euler-section embeddings of their dual
// basis functionals.
Series pbw_iso(Context& ctx, std::span<const int> multiset, int order);

// Rank of the PBW matrix at one grade (rows: forests, columns: multisets of
// total that grade). Full rank equals the forest count.
int pbw_rank(Context& ctx, int grade, Exec exec = Exec::serial);
std::vector<std::vector<int>> lie_multisets_of_grade(Context& ctx, int grade);

// Dual coproducts, computed as transposes of the product tables.
TensorSeries coproduct_gl(const Series& w);
TensorSeries coproduct_graft(const Series& w);

// Multiplicative functional on the shuffle algebra up to an order; the dual
// face of a grouplike element.
class Character {
 public:
  Character(const Context* ctx, int order);
  static Character counit(const Context* ctx, int order);
  static Character from_values(Series values);  // coefficient map, chi(1) = 1

  const Context* ctx() const { return values_.ctx(); }
  int order() const { return values_.order(); }
  Rat operator()(ForestId f) const { return values_.coeff(f); }
  const Series& values() const { return values_; }
  bool operator==(const Character&) const = default;

 private:
  explicit Character(Series values) : values_(std::move(values)) {}
  Series values_;
};

// Derivation-like functional: vanishes on the unit and on shuffle products,
// i.e. pairing against a primitive element.
class InfinitesimalCharacter {
 public:
  explicit InfinitesimalCharacter(Series primitive);
  Rat operator()(ForestId f) const { return primitive_.coeff(f); }
  const Series& primitive() const { return primitive_; }

 private:
  Series primitive_;
};

Character char_from_lie(const Series& primitive);
Series lie_from_char(const Character& chi);
bool is_multiplicative(const Character& chi);

enum class CoproductKind { deconcat, gl };
Character convolve(const Character& a, const Character& b, CoproductKind kind);

// Convolution exp/log with respect to deconcatenation: the bijection between
// infinitesimal characters and characters.
Character conv_exp(const InfinitesimalCharacter& alpha);
InfinitesimalCharacter conv_log(const Character& chi);

}  // namespace lbk
