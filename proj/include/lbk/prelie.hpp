#pragma once

#include <string_view>
#include <vector>

#include "lbk/series.hpp"

namespace lbk {

// Truncated element of the symmetric algebra on non-planar trees: a sparse
// rational combination of multiset forests. The abelianized (pre-Lie) image
// of the planar world.
class PreLieSeries {
 public:
  PreLieSeries() = default;
  PreLieSeries(const Context* ctx, int order);
  static PreLieSeries unit(const Context* ctx, int order);
  static PreLieSeries of_forest(const Context* ctx, int order, NpForestId f,
                                Rat c = 1);

  const Context* ctx() const { return ctx_; }
  int order() const { return order_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<NpForestId, Rat>& terms() const { return terms_; }
  Rat coeff(NpForestId f) const;
  void add_term(NpForestId f, const Rat& c);

  PreLieSeries& operator+=(const PreLieSeries& rhs);
  PreLieSeries& operator-=(const PreLieSeries& rhs);
  PreLieSeries& operator*=(const Rat& c);
  friend PreLieSeries operator+(PreLieSeries a, const PreLieSeries& b) {
    return a += b;
  }
  friend PreLieSeries operator-(PreLieSeries a, const PreLieSeries& b) {
    return a -= b;
  }
  bool operator==(const PreLieSeries&) const = default;

  std::string str() const;

 private:
  const Context* ctx_ = nullptr;
  int order_ = 0;
  std::map<NpForestId, Rat> terms_;
};

// Algebra map from the planar world: forgets sibling order tree by tree and
// sends words to multisets. Intertwines grafting, the Grossman-Larson
// product and sharp with their pre-Lie counterparts.
PreLieSeries project_abelian(const Series& u);

PreLieSeries np_mul(const PreLieSeries& u, const PreLieSeries& v);
PreLieSeries np_graft(const PreLieSeries& u, const PreLieSeries& v);
PreLieSeries np_gl_mul(const PreLieSeries& u, const PreLieSeries& v);
PreLieSeries np_exp_mul(const PreLieSeries& x);  // exp for the multiset product
bool np_is_primitive(const PreLieSeries& u);     // supported on single trees

// Pre-Lie composition of principal flows: x + exp(x) |> y.
PreLieSeries pre_lie_sharp(const PreLieSeries& x, const PreLieSeries& y);

// Substitution action on the pre-Lie side: one tree-supported image per
// color, grafting-compatible on trees, multiplicative on multisets.
PreLieSeries np_apply_endomorphism(const std::vector<PreLieSeries>& images,
                                   const PreLieSeries& u);

// ---- scalar polynomial ODE oracle ---------------------------------------------

// Dense univariate rational polynomial in the state variable y.
struct YPoly {
  std::vector<Rat> coeffs;  // coeffs[k] * y^k

  static YPoly zero() { return {}; }
  static YPoly constant(Rat c);
  static YPoly y();
  bool is_zero() const;
  void normalize();
  Rat coeff(std::size_t k) const;
  YPoly derivative() const;
  YPoly operator+(const YPoly&) const;
  YPoly operator-(const YPoly&) const;
  YPoly operator*(const YPoly&) const;
  YPoly& operator*=(const Rat& c);
  bool operator==(const YPoly&) const;
  std::string str() const;
};

YPoly parse_ypoly(std::string_view text);

// Coefficients of the powers of the step size h; each entry a polynomial in y.
struct HSeries {
  std::vector<YPoly> by_h;

  const YPoly& at(std::size_t k) const;
  bool operator==(const HSeries&) const;
};

// Taylor coefficients of the exact solution of y' = f(y): entry k is the
// polynomial D_k / k! where D_0 = y and D_{k+1} = D_k' * f.
std::vector<YPoly> exact_flow_taylor(const YPoly& f, int order);

// Elementary-differential evaluation against the scalar field f: a tree maps
// to its elementary differential, a forest of k trees acts on phi as the
// k-th derivative of phi times the product of the trees' differentials, and
// each term carries h^grade. Single-color contexts only.
HSeries elementary_differential_eval(const Series& u, const YPoly& f,
                                     const YPoly& phi);
HSeries elementary_differential_eval(const PreLieSeries& u, const YPoly& f,
                                     const YPoly& phi);

}  // namespace lbk
