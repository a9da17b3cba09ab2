#include "lbk/subst.hpp"

#include <algorithm>
#include <functional>

#include "lbk/errors.hpp"
#include "lbk/free_algebra.hpp"
#include "lbk/hopf.hpp"
#include "lbk/linear_map.hpp"

namespace lbk {

Endomorphism::Endomorphism(const Context* ctx, int order,
                           std::vector<Series> images)
    : ctx_(ctx),
      order_(order),
      images_(std::move(images)),
      tree_cache_(std::make_shared<Memo<TreeId, Series>>()) {
  if (static_cast<int>(images_.size()) != ctx->num_colors())
    throw ContractError("one image series per color required");
  for (const auto& img : images_) {
    if (img.ctx() != ctx || img.order() != order)
      throw ContractError("endomorphism images must share context and order");
    if (!is_primitive(img))
      throw ContractError("endomorphism images must be primitive");
  }
}

Endomorphism Endomorphism::identity(Context& ctx, int order) {
  std::vector<Series> images;
  for (int c = 0; c < ctx.num_colors(); ++c)
    images.push_back(Series::of_tree(&ctx, order, ctx.leaf(c)));
  return Endomorphism(&ctx, order, std::move(images));
}

Series Endomorphism::apply(const Series& u) const {
  if (u.ctx() != ctx_ || u.order() != order_)
    throw ContractError("substitution action: order or alphabet mismatch");
  Context& ctx = *const_cast<Context*>(ctx_);

  // a(t) for a tree t with root color c and child forest w is
  // graft(a(w), image(c)); a is concatenation-multiplicative on forests.
  std::function<Series(TreeId)> on_tree = [&](TreeId t) -> Series {
    if (const Series* hit = tree_cache_->find(t)) return *hit;
    Series arg = Series::unit(ctx_, order_);
    for (TreeId child : ctx.tree_children(t))
      arg = conc_mul(arg, on_tree(child));
    Series result = graft(arg, images_[ctx.tree_color(t)]);
    return tree_cache_->store(t, std::move(result));
  };

  Series out(ctx_, order_);
  for (const auto& [f, c] : u.terms()) {
    Series word = Series::unit(ctx_, order_);
    for (TreeId t : ctx.forest_word(f)) {
      word = conc_mul(word, on_tree(t));
      if (word.is_zero()) break;
    }
    word *= c;
    out += word;
  }
  return out;
}

Endomorphism Endomorphism::compose_after(const Endomorphism& inner) const {
  std::vector<Series> images;
  for (int c = 0; c < ctx_->num_colors(); ++c)
    images.push_back(apply(inner.image(c)));
  return Endomorphism(ctx_, order_, std::move(images));
}

// ---- universal coefficient ring variables -----------------------------------

std::uint32_t subst_var(const Context& ctx, int color, int lie_flat) {
  (void)ctx;
  return (static_cast<std::uint32_t>(color) << 24) |
         static_cast<std::uint32_t>(lie_flat);
}
int subst_var_color(const Context&, std::uint32_t var) {
  return static_cast<int>(var >> 24);
}
int subst_var_flat(const Context&, std::uint32_t var) {
  return static_cast<int>(var & 0xffffffu);
}
std::string subst_var_name(const Context& ctx, std::uint32_t var) {
  return "a_" + ctx.color_name(subst_var_color(ctx, var)) + "(" +
         std::to_string(subst_var_flat(ctx, var)) + ")";
}

// ---- characters of the coefficient ring -------------------------------------

EndoCharacter::EndoCharacter(const Context* ctx,
                             std::map<std::uint32_t, Rat> values)
    : ctx_(ctx), values_(std::move(values)) {}

Rat EndoCharacter::operator()(std::uint32_t var) const {
  auto it = values_.find(var);
  return it == values_.end() ? Rat(0) : it->second;
}

EndoCharacter EndoCharacter::from_endomorphism(const Endomorphism& a) {
  Context& ctx = *const_cast<Context*>(a.ctx());
  std::map<std::uint32_t, Rat> values;
  for (int c = 0; c < ctx.num_colors(); ++c) {
    const Series& img = a.image(c);
    for (int g = 1; g <= a.order(); ++g) {
      Series part = img.graded_part(g);
      if (part.is_zero()) continue;
      const auto& level = ctx.lie_level(g);
      const auto& basis = ctx.forests_of_grade(g);
      SparseMatrix m(static_cast<int>(basis.size()),
                     static_cast<int>(level.size()));
      for (int j = 0; j < static_cast<int>(level.size()); ++j)
        for (const auto& [f, v] : level[j].expansion)
          m.add(ctx.forest_position(f), j, v);
      std::vector<Rat> rhs(basis.size(), Rat(0));
      for (const auto& [f, v] : part.terms()) rhs[ctx.forest_position(f)] = v;
      std::vector<Rat> coords = solve(m, rhs);
      for (int j = 0; j < static_cast<int>(level.size()); ++j)
        if (coords[j] != 0)
          values[subst_var(ctx, c, level[j].flat_index)] = coords[j];
    }
  }
  return EndoCharacter(a.ctx(), std::move(values));
}

Endomorphism EndoCharacter::to_endomorphism(Context& ctx, int order) const {
  std::vector<Series> images;
  for (int c = 0; c < ctx.num_colors(); ++c) {
    Series img(&ctx, order);
    for (const auto& [var, v] : values_) {
      if (subst_var_color(ctx, var) != c) continue;
      const LieElem& l = ctx.lie_elem_by_flat(subst_var_flat(ctx, var));
      if (l.grade > order) continue;
      Series s = lie_elem_series(ctx, l, order);
      s *= v;
      img += s;
    }
    images.push_back(std::move(img));
  }
  return Endomorphism(&ctx, order, std::move(images));
}

// ---- universal substitution ---------------------------------------------------

namespace {

void poly_series_add(PolySeries& acc, ForestId f, const Poly& p) {
  if (p.is_zero()) return;
  auto [it, inserted] = acc.try_emplace(f, p);
  if (!inserted) {
    it->second += p;
    if (it->second.is_zero()) acc.erase(it);
  }
}

}  // namespace

UniversalSubst::UniversalSubst(Context& ctx, int order)
    : ctx_(ctx), order_(order) {
  if (order >= 1) ctx.lie_level(std::min(order, ctx.max_order()));
}

std::vector<Poly> UniversalSubst::lie_projection(ForestId omega) {
  int g = ctx_.forest_grade(omega);
  std::vector<Poly> out(ctx_.num_colors());
  if (g < 1) return out;
  for (const LieElem& l : ctx_.lie_level(g)) {
    auto it = l.expansion.find(omega);
    if (it == l.expansion.end()) continue;
    for (int c = 0; c < ctx_.num_colors(); ++c) {
      Poly v = Poly::variable(subst_var(ctx_, c, l.flat_index));
      v *= it->second;
      out[c] += v;
    }
  }
  return out;
}

const PolySeries& UniversalSubst::tree_transform(ForestId omega) {
  if (auto it = tree_memo_.find(omega); it != tree_memo_.end())
    return it->second;
  PolySeries out;
  int g = ctx_.forest_grade(omega);
  if (g >= 1) {
    // Pair the grafting coproduct legs of omega with the forest transform on
    // the left and the Lie projection on the right, then re-root.
    for (int m = 0; m < g; ++m)
      for (ForestId u : ctx_.forests_of_grade(m))
        for (ForestId v : ctx_.forests_of_grade(g - m)) {
          const ForestMap& uv = graft_forests(ctx_, u, v);
          auto hit = uv.find(omega);
          if (hit == uv.end()) continue;
          std::vector<Poly> proj = lie_projection(v);
          const PolySeries& left = forest_transform(u);
          for (const auto& [f, p] : left) {
            std::vector<TreeId> word = ctx_.forest_word(f);
            for (int c = 0; c < ctx_.num_colors(); ++c) {
              if (proj[c].is_zero()) continue;
              TreeId rooted = ctx_.tree(c, word);
              Poly term = p * proj[c];
              term *= hit->second;
              poly_series_add(out, ctx_.forest_of_tree(rooted), term);
            }
          }
        }
  }
  return tree_memo_.emplace(omega, std::move(out)).first->second;
}

const PolySeries& UniversalSubst::forest_transform(ForestId omega) {
  if (auto it = forest_memo_.find(omega); it != forest_memo_.end())
    return it->second;
  PolySeries out;
  if (omega == ctx_.empty_forest()) {
    out.emplace(omega, Poly(Rat(1)));
  } else {
    // Deconcatenation cuts with the last block handled by the tree
    // transform; the empty suffix contributes nothing (no dual-tree part).
    std::vector<TreeId> word = ctx_.forest_word(omega);
    for (std::size_t cut = 0; cut < word.size(); ++cut) {
      std::vector<TreeId> prefix(word.begin(), word.begin() + cut);
      std::vector<TreeId> suffix(word.begin() + cut, word.end());
      const PolySeries& left = forest_transform(ctx_.forest(prefix));
      if (left.empty()) continue;
      const PolySeries& right = tree_transform(ctx_.forest(suffix));
      for (const auto& [ft, pt] : right) {
        std::vector<TreeId> tw = ctx_.forest_word(ft);
        for (const auto& [ff, pf] : left) {
          std::vector<TreeId> merged = ctx_.forest_word(ff);
          merged.insert(merged.end(), tw.begin(), tw.end());
          poly_series_add(out, ctx_.forest(merged), pf * pt);
        }
      }
    }
  }
  return forest_memo_.emplace(omega, std::move(out)).first->second;
}

PolySeries UniversalSubst::cosubstitution(const Series& dual) {
  PolySeries out;
  for (const auto& [f, c] : dual.terms()) {
    for (const auto& [g, p] : forest_transform(f)) {
      Poly scaled = p;
      scaled *= c;
      poly_series_add(out, g, scaled);
    }
  }
  return out;
}

Series UniversalSubst::evaluate(const PolySeries& t, const EndoCharacter& alpha,
                                int order) const {
  Series out(&ctx_, order);
  for (const auto& [f, p] : t)
    out.add_term(f, p.eval([&](std::uint32_t var) { return alpha(var); }));
  return out;
}

Series substitution_transpose(const Endomorphism& a, ForestId omega, int order) {
  Context& ctx = *const_cast<Context*>(a.ctx());
  int g = ctx.forest_grade(omega);
  Series out(a.ctx(), order);
  for (int m = 0; m <= g; ++m)
    for (ForestId u : ctx.forests_of_grade(m)) {
      Series img = a.apply(Series::of_forest(a.ctx(), a.order(), u));
      Rat c = img.coeff(omega);
      if (c != 0) out.add_term(u, c);
    }
  return out;
}

// ---- randomized generators ----------------------------------------------------

Series random_primitive(Context& ctx, int order, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coeff(-2, 2);
  Series out(&ctx, order);
  for (int g = 1; g <= order; ++g)
    for (const LieElem& l : ctx.lie_level(g)) {
      int c = coeff(rng);
      if (c == 0) continue;
      Series s = lie_elem_series(ctx, l, order);
      s *= Rat(c);
      out += s;
    }
  if (out.is_zero()) out = Series::of_tree(&ctx, order, ctx.leaf(0));
  return out;
}

Endomorphism random_endomorphism(Context& ctx, int order, std::mt19937_64& rng) {
  std::vector<Series> images;
  for (int c = 0; c < ctx.num_colors(); ++c)
    images.push_back(random_primitive(ctx, order, rng));
  return Endomorphism(&ctx, order, std::move(images));
}

}  // namespace lbk
