#pragma once

#include <map>
#include <string>
#include <utility>

#include "lbk/context.hpp"
#include "lbk/rational.hpp"

namespace lbk {

// Truncated element of the (completed) tensor algebra on planar trees: a
// sparse rational combination of forests of grade <= order(). The truncation
// order is part of the value; binary operations demand equal orders rather
// than silently re-truncating. The same container represents elements of the
// graded dual, with forests as an orthonormal pairing basis.
class Series {
 public:
  Series() = default;
  Series(const Context* ctx, int order);

  static Series unit(const Context* ctx, int order);               // empty forest
  static Series of_forest(const Context* ctx, int order, ForestId f, Rat c = 1);
  static Series of_tree(Context* ctx, int order, TreeId t, Rat c = 1);

  const Context* ctx() const { return ctx_; }
  int order() const { return order_; }
  bool is_zero() const { return terms_.empty(); }

  const std::map<ForestId, Rat>& terms() const { return terms_; }
  Rat coeff(ForestId f) const;

  // Drops the term when c becomes zero; ignores forests beyond order().
  void add_term(ForestId f, const Rat& c);
  void set_coeff(ForestId f, Rat c);

  Series graded_part(int grade) const;
  Series truncated(int new_order) const;  // new_order <= order()
  int min_grade() const;                  // order()+1 when zero

  Series& operator+=(const Series& rhs);
  Series& operator-=(const Series& rhs);
  Series& operator*=(const Rat& c);
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(const Rat& c, Series a) { return a *= c; }
  Series operator-() const;
  bool operator==(const Series& rhs) const;

  std::string str() const;  // canonical print

 private:
  const Context* ctx_ = nullptr;
  int order_ = 0;
  std::map<ForestId, Rat> terms_;
};

// Element of the two-fold tensor square, truncated by total grade. Used for
// coproduct values.
class TensorSeries {
 public:
  TensorSeries() = default;
  TensorSeries(const Context* ctx, int order) : ctx_(ctx), order_(order) {}

  const Context* ctx() const { return ctx_; }
  int order() const { return order_; }
  const std::map<std::pair<ForestId, ForestId>, Rat>& terms() const { return terms_; }

  void add_term(ForestId left, ForestId right, const Rat& c);
  Rat coeff(ForestId left, ForestId right) const;

  TensorSeries& operator+=(const TensorSeries& rhs);
  TensorSeries& operator-=(const TensorSeries& rhs);
  TensorSeries& operator*=(const Rat& c);
  bool operator==(const TensorSeries& rhs) const;

  std::string str() const;

 private:
  const Context* ctx_ = nullptr;
  int order_ = 0;
  std::map<std::pair<ForestId, ForestId>, Rat> terms_;
};

// <u, w> = sum over forests of coeff_u * coeff_w (orthonormal forest basis).
Rat pair(const Series& u, const Series& w);
Rat pair(const TensorSeries& t, const Series& left, const Series& right);

void require_compatible(const Series& a, const Series& b);

}  // namespace lbk
