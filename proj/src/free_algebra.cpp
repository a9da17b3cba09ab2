#include "lbk/free_algebra.hpp"

#include <functional>
#include <vector>

#include "lbk/errors.hpp"

namespace lbk {
namespace {

void map_add(ForestMap& acc, ForestId f, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = acc.try_emplace(f, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) acc.erase(it);
  }
}

void map_add_scaled(ForestMap& acc, const ForestMap& src, const Rat& scale) {
  for (const auto& [f, c] : src) map_add(acc, f, c * scale);
}

// All trees obtained by attaching `x` as the new leftmost child of one
// vertex of `t`.
void attach_everywhere(Context& ctx, TreeId x, TreeId t, ForestMap& acc) {
  struct Walker {
    Context& ctx;
    TreeId x;
    // Rebuilds t with x attached at vertex `target` (preorder index); returns
    // the rebuilt tree and advances `cursor` past this subtree.
    TreeId rebuild(TreeId node, int target, int& cursor) {
      int me = cursor++;
      std::vector<TreeId> kids = ctx.tree_children(node);
      if (me == target) {
        kids.insert(kids.begin(), x);
        return ctx.tree(ctx.tree_color(node), kids);
      }
      for (auto& k : kids) k = rebuild(k, target, cursor);
      return ctx.tree(ctx.tree_color(node), kids);
    }
  };
  int vertices = ctx.tree_grade(t);
  Walker w{ctx, x};
  for (int v = 0; v < vertices; ++v) {
    int cursor = 0;
    map_add(acc, ctx.forest_of_tree(w.rebuild(t, v, cursor)), 1);
  }
}

const ForestMap& graft_impl(Context& ctx, ForestId a, ForestId b);

// x |> B for a single tree x. If B is a word tB', distribute x over the two
// factors (the unshuffle of a tree has only the two trivial legs).
ForestMap graft_tree_forest(Context& ctx, TreeId x, ForestId b) {
  ForestMap out;
  std::vector<TreeId> word = ctx.forest_word(b);
  if (word.empty()) return out;  // counit(x) = 0
  if (word.size() == 1) {
    attach_everywhere(ctx, x, word[0], out);
    return out;
  }
  TreeId head = word[0];
  std::vector<TreeId> rest_word(word.begin() + 1, word.end());
  ForestId rest = ctx.forest(rest_word);
  ForestMap head_hit = graft_impl(ctx, ctx.forest_of_tree(x), ctx.forest_of_tree(head));
  for (const auto& [f, c] : head_hit)
    map_add(out, ctx.concat(f, rest), c);
  ForestMap rest_hit = graft_impl(ctx, ctx.forest_of_tree(x), rest);
  ForestId head_f = ctx.forest_of_tree(head);
  for (const auto& [f, c] : rest_hit)
    map_add(out, ctx.concat(head_f, f), c);
  return out;
}

const ForestMap& graft_impl(Context& ctx, ForestId a, ForestId b) {
  if (const ForestMap* hit = ctx.graft_memo().find(pair_key(a, b))) return *hit;

  std::vector<TreeId> word = ctx.forest_word(a);
  ForestMap out;
  if (a == ctx.empty_forest()) {
    out.emplace(b, Rat(1));
  } else if (b == ctx.empty_forest()) {
    // counit of a nonempty forest: nothing
  } else if (word.size() == 1) {
    out = graft_tree_forest(ctx, word[0], b);
  } else {
    // (x . A') |> B = x |> (A' |> B) - (x |> A') |> B
    TreeId x = word[0];
    std::vector<TreeId> rest_word(word.begin() + 1, word.end());
    ForestId rest = ctx.forest(rest_word);
    ForestId xf = ctx.forest_of_tree(x);
    for (const auto& [f, c] : graft_impl(ctx, rest, b))
      map_add_scaled(out, graft_impl(ctx, xf, f), c);
    for (const auto& [f, c] : graft_impl(ctx, xf, rest))
      for (const auto& [g, d] : graft_impl(ctx, f, b)) map_add(out, g, -c * d);
  }
  return ctx.graft_memo().store(pair_key(a, b), std::move(out));
}

const ForestMap& gl_impl(Context& ctx, ForestId a, ForestId b) {
  if (const ForestMap* hit = ctx.gl_memo().find(pair_key(a, b))) return *hit;

  // A * B = sum over complementary subword pairs (S, S~) of S . (S~ |> B).
  ForestMap out;
  if (a == ctx.empty_forest()) {
    out.emplace(b, Rat(1));
  } else if (b == ctx.empty_forest()) {
    out.emplace(a, Rat(1));
  } else {
    std::vector<TreeId> word = ctx.forest_word(a);
    std::size_t k = word.size();
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      std::vector<TreeId> left, right;
      for (std::size_t i = 0; i < k; ++i)
        ((mask >> i) & 1u ? left : right).push_back(word[i]);
      ForestId lf = ctx.forest(left);
      for (const auto& [f, c] : graft_impl(ctx, ctx.forest(right), b))
        map_add(out, ctx.concat(lf, f), c);
    }
  }
  return ctx.gl_memo().store(pair_key(a, b), std::move(out));
}

// Bilinear extension of a basis-level product, truncated at the common order.
template <class BasisProduct>
Series bilinear(const Series& u, const Series& v, BasisProduct&& prod) {
  require_compatible(u, v);
  Context& ctx = *const_cast<Context*>(u.ctx());
  Series out(u.ctx(), u.order());
  for (const auto& [a, ca] : u.terms()) {
    int ga = ctx.forest_grade(a);
    for (const auto& [b, cb] : v.terms()) {
      if (ga + ctx.forest_grade(b) > u.order()) continue;
      Rat scale = ca * cb;
      for (const auto& [f, c] : prod(ctx, a, b)) out.add_term(f, c * scale);
    }
  }
  return out;
}

}  // namespace

const ForestMap& graft_forests(Context& ctx, ForestId a, ForestId b) {
  return graft_impl(ctx, a, b);
}

const ForestMap& gl_forests(Context& ctx, ForestId a, ForestId b) {
  return gl_impl(ctx, a, b);
}

ForestMap shuffle_forests(Context& ctx, ForestId a, ForestId b) {
  std::vector<TreeId> wa = ctx.forest_word(a);
  std::vector<TreeId> wb = ctx.forest_word(b);
  ForestMap out;
  std::vector<TreeId> cur;
  cur.reserve(wa.size() + wb.size());
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i,
                                                          std::size_t j) {
    if (i == wa.size() && j == wb.size()) {
      map_add(out, ctx.forest(cur), 1);
      return;
    }
    if (i < wa.size()) {
      cur.push_back(wa[i]);
      rec(i + 1, j);
      cur.pop_back();
    }
    if (j < wb.size()) {
      cur.push_back(wb[j]);
      rec(i, j + 1);
      cur.pop_back();
    }
  };
  rec(0, 0);
  return out;
}

Series conc_mul(const Series& u, const Series& v) {
  return bilinear(u, v, [](Context& ctx, ForestId a, ForestId b) {
    return ForestMap{{ctx.concat(a, b), Rat(1)}};
  });
}

Series shuffle_mul(const Series& u, const Series& v) {
  return bilinear(u, v, [](Context& ctx, ForestId a, ForestId b) {
    return shuffle_forests(ctx, a, b);
  });
}

Series graft(const Series& u, const Series& v) {
  return bilinear(u, v,
                  [](Context& ctx, ForestId a, ForestId b) -> const ForestMap& {
                    return graft_impl(ctx, a, b);
                  });
}

Series gl_mul(const Series& u, const Series& v) {
  return bilinear(u, v,
                  [](Context& ctx, ForestId a, ForestId b) -> const ForestMap& {
                    return gl_impl(ctx, a, b);
                  });
}

TensorSeries deconcat(const Series& w) {
  Context& ctx = *const_cast<Context*>(w.ctx());
  TensorSeries out(w.ctx(), w.order());
  for (const auto& [f, c] : w.terms()) {
    std::vector<TreeId> word = ctx.forest_word(f);
    for (std::size_t cut = 0; cut <= word.size(); ++cut) {
      std::vector<TreeId> left(word.begin(), word.begin() + cut);
      std::vector<TreeId> right(word.begin() + cut, word.end());
      out.add_term(ctx.forest(left), ctx.forest(right), c);
    }
  }
  return out;
}

TensorSeries unshuffle(const Series& w) {
  Context& ctx = *const_cast<Context*>(w.ctx());
  TensorSeries out(w.ctx(), w.order());
  for (const auto& [f, c] : w.terms()) {
    std::vector<TreeId> word = ctx.forest_word(f);
    std::size_t k = word.size();
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      std::vector<TreeId> left, right;
      for (std::size_t i = 0; i < k; ++i)
        ((mask >> i) & 1u ? left : right).push_back(word[i]);
      out.add_term(ctx.forest(left), ctx.forest(right), c);
    }
  }
  return out;
}

Series bracket_conc(const Series& x, const Series& y) {
  return conc_mul(x, y) - conc_mul(y, x);
}

Series double_bracket(const Series& x, const Series& y) {
  if (!is_primitive(x) || !is_primitive(y))
    throw ContractError("double bracket requires primitive arguments");
  return graft(x, y) - graft(y, x) + bracket_conc(x, y);
}

bool is_primitive(const Series& u) {
  if (counit(u) != 0) return false;
  TensorSeries expect(u.ctx(), u.order());
  ForestId unit = u.ctx()->empty_forest();
  for (const auto& [f, c] : u.terms()) {
    expect.add_term(f, unit, c);
    expect.add_term(unit, f, c);
  }
  return unshuffle(u) == expect;
}

Rat counit(const Series& u) { return u.coeff(u.ctx()->empty_forest()); }

}  // namespace lbk
