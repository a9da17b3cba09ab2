#include "lbk/series.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

#include "lbk/errors.hpp"

namespace lbk {

Series::Series(const Context* ctx, int order) : ctx_(ctx), order_(order) {
  if (order < 0) throw ContractError("truncation order must be nonnegative");
  if (order > ctx->max_order())
    throw CapacityError("order " + std::to_string(order) +
                        " exceeds context capacity " +
                        std::to_string(ctx->max_order()));
}

Series Series::unit(const Context* ctx, int order) {
  Series s(ctx, order);
  s.add_term(ctx->empty_forest(), 1);
  return s;
}

Series Series::of_forest(const Context* ctx, int order, ForestId f, Rat c) {
  Series s(ctx, order);
  s.add_term(f, c);
  return s;
}

Series Series::of_tree(Context* ctx, int order, TreeId t, Rat c) {
  return of_forest(ctx, order, ctx->forest_of_tree(t), std::move(c));
}

Rat Series::coeff(ForestId f) const {
  auto it = terms_.find(f);
  return it == terms_.end() ? Rat(0) : it->second;
}

void Series::add_term(ForestId f, const Rat& c) {
  if (c == 0) return;
  if (ctx_->forest_grade(f) > order_) return;
  auto [it, inserted] = terms_.try_emplace(f, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Series::set_coeff(ForestId f, Rat c) {
  if (c == 0)
    terms_.erase(f);
  else if (ctx_->forest_grade(f) <= order_)
    terms_[f] = std::move(c);
}

Series Series::graded_part(int grade) const {
  Series out(ctx_, order_);
  for (const auto& [f, c] : terms_)
    if (ctx_->forest_grade(f) == grade) out.add_term(f, c);
  return out;
}

Series Series::truncated(int new_order) const {
  Series out(ctx_, new_order);
  for (const auto& [f, c] : terms_) out.add_term(f, c);
  return out;
}

int Series::min_grade() const {
  int g = order_ + 1;
  for (const auto& [f, c] : terms_) g = std::min(g, ctx_->forest_grade(f));
  return g;
}

Series& Series::operator+=(const Series& rhs) {
  require_compatible(*this, rhs);
  for (const auto& [f, c] : rhs.terms_) add_term(f, c);
  return *this;
}

Series& Series::operator-=(const Series& rhs) {
  require_compatible(*this, rhs);
  for (const auto& [f, c] : rhs.terms_) add_term(f, -c);
  return *this;
}

Series& Series::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [f, v] : terms_) v *= c;
  return *this;
}

Series Series::operator-() const {
  Series out = *this;
  for (auto& [f, v] : out.terms_) v = -v;
  return out;
}

bool Series::operator==(const Series& rhs) const {
  return order_ == rhs.order_ && terms_ == rhs.terms_;
}

std::string Series::str() const {
  if (terms_.empty()) return "0";
  std::vector<std::tuple<int, std::string, const Rat*>> items;
  items.reserve(terms_.size());
  for (const auto& [f, c] : terms_)
    items.emplace_back(ctx_->forest_grade(f), ctx_->forest_string(f), &c);
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) {
              return std::tie(std::get<0>(a), std::get<1>(a)) <
                     std::tie(std::get<0>(b), std::get<1>(b));
            });
  std::string out;
  bool first = true;
  for (const auto& [grade, fstr, cp] : items) {
    Rat c = *cp;
    if (first) {
      if (c < 0) {
        out += '-';
        c = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    if (c != 1 || fstr == "1") {
      out += rat_str(c);
      if (fstr != "1") out += '*';
    }
    if (fstr != "1") out += fstr;
    first = false;
  }
  return out;
}

void TensorSeries::add_term(ForestId left, ForestId right, const Rat& c) {
  if (c == 0) return;
  if (ctx_->forest_grade(left) + ctx_->forest_grade(right) > order_) return;
  auto key = std::make_pair(left, right);
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rat TensorSeries::coeff(ForestId left, ForestId right) const {
  auto it = terms_.find({left, right});
  return it == terms_.end() ? Rat(0) : it->second;
}

TensorSeries& TensorSeries::operator+=(const TensorSeries& rhs) {
  for (const auto& [k, c] : rhs.terms_) add_term(k.first, k.second, c);
  return *this;
}

TensorSeries& TensorSeries::operator-=(const TensorSeries& rhs) {
  for (const auto& [k, c] : rhs.terms_) add_term(k.first, k.second, -c);
  return *this;
}

TensorSeries& TensorSeries::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

bool TensorSeries::operator==(const TensorSeries& rhs) const {
  return order_ == rhs.order_ && terms_ == rhs.terms_;
}

std::string TensorSeries::str() const {
  if (terms_.empty()) return "0";
  std::vector<std::tuple<int, std::string, const Rat*>> items;
  for (const auto& [k, c] : terms_) {
    int g = ctx_->forest_grade(k.first) + ctx_->forest_grade(k.second);
    items.emplace_back(
        g, ctx_->forest_string(k.first) + " (x) " + ctx_->forest_string(k.second),
        &c);
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) {
              return std::tie(std::get<0>(a), std::get<1>(a)) <
                     std::tie(std::get<0>(b), std::get<1>(b));
            });
  std::string out;
  bool first = true;
  for (const auto& [grade, label, cp] : items) {
    Rat c = *cp;
    if (first) {
      if (c < 0) {
        out += '-';
        c = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    if (c != 1) {
      out += rat_str(c);
      out += '*';
    }
    out += label;
    first = false;
  }
  return out;
}

Rat pair(const Series& u, const Series& w) {
  require_compatible(u, w);
  // Iterate the smaller support.
  const Series& small = u.terms().size() <= w.terms().size() ? u : w;
  const Series& big = u.terms().size() <= w.terms().size() ? w : u;
  Rat acc = 0;
  for (const auto& [f, c] : small.terms()) {
    auto it = big.terms().find(f);
    if (it != big.terms().end()) acc += c * it->second;
  }
  return acc;
}

Rat pair(const TensorSeries& t, const Series& left, const Series& right) {
  Rat acc = 0;
  for (const auto& [k, c] : t.terms())
    acc += c * left.coeff(k.first) * right.coeff(k.second);
  return acc;
}

void require_compatible(const Series& a, const Series& b) {
  if (a.ctx() != b.ctx())
    throw ContractError("series built over different alphabets");
  if (a.order() != b.order())
    throw ContractError("truncation order mismatch: " +
                        std::to_string(a.order()) + " vs " +
                        std::to_string(b.order()));
}

}  // namespace lbk
