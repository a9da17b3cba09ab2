#include "lbk/hopf.hpp"

#include <algorithm>
#include <functional>

#include "lbk/errors.hpp"
#include "lbk/free_algebra.hpp"
#include "lbk/linear_map.hpp"

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

// Visits every assignment of the k word letters onto p legs that touches all
// legs (the iterated unshuffle with no empty tensor factor).
template <class Fn>
void for_each_surjection(int k, int p, Fn&& fn) {
  std::vector<int> leg(k, 0);
  while (true) {
    std::uint32_t used = 0;
    for (int i = 0; i < k; ++i) used |= 1u << leg[i];
    if (used == (1u << p) - 1u) fn(leg);
    int i = 0;
    while (i < k && ++leg[i] == p) leg[i++] = 0;
    if (i == k) break;
  }
}

ForestMap conc_maps(Context& ctx, const ForestMap& a, const ForestMap& b) {
  ForestMap out;
  for (const auto& [f, cf] : a)
    for (const auto& [g, cg] : b) map_add(out, ctx.concat(f, g), cf * cg);
  return out;
}

}  // namespace

const ForestMap& euler_forest(Context& ctx, ForestId f) {
  if (const ForestMap* hit = ctx.euler_memo().find(f)) return *hit;
  std::vector<TreeId> word = ctx.forest_word(f);
  int k = static_cast<int>(word.size());
  ForestMap out;
  for (int p = 1; p <= k; ++p) {
    Rat coeff = Rat((p % 2) ? 1 : -1, p);
    for_each_surjection(k, p, [&](const std::vector<int>& leg) {
      // Stable rearrangement: letters of leg 0, then leg 1, ...
      std::vector<TreeId> rearranged;
      rearranged.reserve(k);
      for (int l = 0; l < p; ++l)
        for (int i = 0; i < k; ++i)
          if (leg[i] == l) rearranged.push_back(word[i]);
      map_add(out, ctx.forest(rearranged), coeff);
    });
  }
  return ctx.euler_memo().store(f, std::move(out));
}

Series euler_idempotent(const Series& w) {
  Context& ctx = *const_cast<Context*>(w.ctx());
  Series out(w.ctx(), w.order());
  for (const auto& [f, c] : w.terms())
    for (const auto& [g, d] : euler_forest(ctx, f)) out.add_term(g, c * d);
  return out;
}

Series eulerian_component(const Series& w, int p) {
  if (p < 0) throw ContractError("component index must be nonnegative");
  Context& ctx = *const_cast<Context*>(w.ctx());
  Series out(w.ctx(), w.order());
  if (p == 0) {
    out.add_term(ctx.empty_forest(), counit(w));
    return out;
  }
  Rat inv_fact = 1 / factorial(p);
  for (const auto& [f, c] : w.terms()) {
    std::vector<TreeId> word = ctx.forest_word(f);
    int k = static_cast<int>(word.size());
    if (k < p) continue;
    for_each_surjection(k, p, [&](const std::vector<int>& leg) {
      ForestMap acc{{ctx.empty_forest(), Rat(1)}};
      for (int l = 0; l < p; ++l) {
        std::vector<TreeId> sub;
        for (int i = 0; i < k; ++i)
          if (leg[i] == l) sub.push_back(word[i]);
        acc = conc_maps(ctx, acc, euler_forest(ctx, ctx.forest(sub)));
        if (acc.empty()) break;
      }
      for (const auto& [g, d] : acc) out.add_term(g, c * d * inv_fact);
    });
  }
  return out;
}

namespace {

template <class Mul>
Series exp_generic(const Series& x, Mul&& mul) {
  if (counit(x) != 0)
    throw ContractError("exp requires a series with no constant term");
  Series out = Series::unit(x.ctx(), x.order());
  Series power = out;
  for (int n = 1; n <= x.order(); ++n) {
    power = mul(power, x);
    if (power.is_zero()) break;
    Series term = power;
    term *= 1 / factorial(n);
    out += term;
  }
  return out;
}

template <class Mul>
Series log_generic(const Series& s, Mul&& mul) {
  if (counit(s) != 1)
    throw ContractError("log requires a series with constant term 1");
  Series y = s;
  y.add_term(s.ctx()->empty_forest(), Rat(-1));
  Series out(s.ctx(), s.order());
  Series power = Series::unit(s.ctx(), s.order());
  for (int n = 1; n <= s.order(); ++n) {
    power = mul(power, y);
    if (power.is_zero()) break;
    Series term = power;
    term *= Rat((n % 2) ? 1 : -1, n);
    out += term;
  }
  return out;
}

}  // namespace

Series exp_conc(const Series& x) {
  return exp_generic(x, [](const Series& a, const Series& b) { return conc_mul(a, b); });
}
Series log_conc(const Series& s) {
  return log_generic(s, [](const Series& a, const Series& b) { return conc_mul(a, b); });
}
Series exp_gl(const Series& x) {
  return exp_generic(x, [](const Series& a, const Series& b) { return gl_mul(a, b); });
}
Series log_gl(const Series& s) {
  return log_generic(s, [](const Series& a, const Series& b) { return gl_mul(a, b); });
}

// ---- Lyndon basis -------------------------------------------------------------

namespace {

bool is_lyndon(const std::vector<int>& w) {
  int k = static_cast<int>(w.size());
  for (int r = 1; r < k; ++r) {
    // compare w with its rotation by r
    for (int i = 0; i < k; ++i) {
      int a = w[i];
      int b = w[(i + r) % k];
      if (a != b) {
        if (a > b) return false;  // rotation is smaller
        break;
      }
      if (i == k - 1) return false;  // periodic word
    }
  }
  return true;
}

// Standard factorization: split before the lexicographically smallest proper
// suffix.
std::size_t standard_split(const std::vector<int>& w) {
  std::size_t best = 1;
  for (std::size_t i = 2; i < w.size(); ++i) {
    if (std::lexicographical_compare(w.begin() + i, w.end(),
                                     w.begin() + best, w.end()))
      best = i;
  }
  return best;
}

ForestMap bracket_maps(Context& ctx, const ForestMap& a, const ForestMap& b) {
  ForestMap out;
  for (const auto& [f, cf] : a)
    for (const auto& [g, cg] : b) {
      map_add(out, ctx.concat(f, g), cf * cg);
      map_add(out, ctx.concat(g, f), -cf * cg);
    }
  return out;
}

ForestMap bracketing(Context& ctx, const std::vector<TreeId>& letters,
                     const std::vector<int>& word) {
  if (word.size() == 1)
    return ForestMap{{ctx.forest_of_tree(letters[word[0]]), Rat(1)}};
  std::size_t cut = standard_split(word);
  std::vector<int> left(word.begin(), word.begin() + cut);
  std::vector<int> right(word.begin() + cut, word.end());
  return bracket_maps(ctx, bracketing(ctx, letters, left),
                      bracketing(ctx, letters, right));
}

}  // namespace

void Context::build_lie_levels(int up_to) const {
  std::lock_guard lock(lie_mx_);
  auto& self = const_cast<Context&>(*this);

  // Graded alphabet: all trees of grade <= up_to, ordered by (grade, string).
  // Extending the alphabet later keeps the relative order of existing
  // letters, so already-built levels stay valid.
  std::vector<TreeId> letters;
  std::vector<int> letter_grade;
  for (int g = 1; g <= up_to; ++g)
    for (TreeId t : trees_of_grade(g)) {
      letters.push_back(t);
      letter_grade.push_back(g);
    }

  int flat = 0;
  for (int n = 1; n <= up_to; ++n) {
    if (!lie_levels_[n].empty()) {
      flat += static_cast<int>(lie_levels_[n].size());
      continue;
    }
    std::vector<std::vector<int>> words;
    std::vector<int> cur;
    std::function<void(int)> gen = [&](int remaining) {
      if (remaining == 0) {
        if (is_lyndon(cur)) words.push_back(cur);
        return;
      }
      for (int i = 0; i < static_cast<int>(letters.size()); ++i) {
        if (letter_grade[i] > remaining) continue;
        cur.push_back(i);
        gen(remaining - letter_grade[i]);
        cur.pop_back();
      }
    };
    gen(n);
    std::sort(words.begin(), words.end());
    std::vector<LieElem> level;
    level.reserve(words.size());
    for (const auto& w : words) {
      LieElem e;
      for (int idx : w) e.word.push_back(letters[idx]);
      e.expansion = bracketing(self, letters, w);
      e.grade = n;
      e.flat_index = ++flat;
      level.push_back(std::move(e));
    }
    lie_levels_[n] = std::move(level);
  }
}

const std::vector<LieElem>& Context::lie_level(int grade) const {
  check_capacity(grade);
  if (grade < 1) throw ContractError("lie basis grades start at 1");
  {
    std::lock_guard lock(lie_mx_);
    if (static_cast<int>(lie_levels_.size()) > grade &&
        !lie_levels_[grade].empty())
      return lie_levels_[grade];
  }
  build_lie_levels(grade);
  std::lock_guard lock(lie_mx_);
  return lie_levels_[grade];
}

const std::vector<LieElem>& lie_basis(Context& ctx, int grade) {
  return ctx.lie_level(grade);
}

Series lie_elem_series(const Context& ctx, const LieElem& l, int order) {
  Series out(&ctx, order);
  for (const auto& [f, c] : l.expansion) out.add_term(f, c);
  return out;
}

Series embed_lie_dual(Context& ctx, int grade, std::span<const Rat> coords,
                      int order) {
  const auto& level = ctx.lie_level(grade);
  const auto& basis = ctx.forests_of_grade(grade);
  if (coords.size() != level.size())
    throw ContractError("coordinate count does not match lie dimension");
  // Any functional with the prescribed values on the Lie basis...
  SparseMatrix m(static_cast<int>(level.size()), static_cast<int>(basis.size()));
  for (int i = 0; i < static_cast<int>(level.size()); ++i)
    for (const auto& [f, c] : level[i].expansion)
      m.add(i, ctx.forest_position(f), c);
  std::vector<Rat> rhs(coords.begin(), coords.end());
  std::vector<Rat> w0 = solve(m, rhs);
  // ...projected by the transposed Euler idempotent, which is independent of
  // the choice made above.
  Series out(&ctx, order);
  for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
    Rat acc = 0;
    for (const auto& [g, c] : euler_forest(ctx, basis[j]))
      acc += w0[ctx.forest_position(g)] * c;
    out.add_term(basis[j], acc);
  }
  return out;
}

Series pbw_iso(Context& ctx, std::span<const int> multiset, int order) {
  Series out = Series::unit(&ctx, order);
  for (int flat : multiset) {
    const LieElem& l = ctx.lie_elem_by_flat(flat);
    const auto& level = ctx.lie_level(l.grade);
    std::vector<Rat> coords(level.size(), Rat(0));
    for (int i = 0; i < static_cast<int>(level.size()); ++i)
      if (level[i].flat_index == flat) coords[i] = 1;
    out = shuffle_mul(out, embed_lie_dual(ctx, l.grade, coords, order));
  }
  return out;
}

std::vector<std::vector<int>> lie_multisets_of_grade(Context& ctx, int grade) {
  // Nondecreasing flat indices with grades summing to `grade`.
  int total_flat = ctx.lie_flat_count(grade);
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int min_flat, int remaining) {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int flat = min_flat; flat <= total_flat; ++flat) {
      int g = ctx.lie_elem_by_flat(flat).grade;
      if (g > remaining) continue;
      cur.push_back(flat);
      rec(flat, remaining - g);
      cur.pop_back();
    }
  };
  rec(1, grade);
  return out;
}

int pbw_rank(Context& ctx, int grade, Exec exec) {
  auto multisets = lie_multisets_of_grade(ctx, grade);
  const auto& basis = ctx.forests_of_grade(grade);
  SparseMatrix m(static_cast<int>(basis.size()),
                 static_cast<int>(multisets.size()));
  std::vector<std::map<int, Rat>> cols(multisets.size());
  for_each_index(static_cast<int>(multisets.size()), exec, [&](int j) {
    Series psi = pbw_iso(ctx, multisets[j], grade);
    for (const auto& [f, c] : psi.terms()) cols[j].emplace(ctx.forest_position(f), c);
  });
  m.columns = std::move(cols);
  return rank(m);
}

// ---- dual coproducts ------------------------------------------------------------

namespace {

template <class BasisProduct>
TensorSeries transpose_coproduct(const Series& w, BasisProduct&& prod) {
  Context& ctx = *const_cast<Context*>(w.ctx());
  TensorSeries out(w.ctx(), w.order());
  for (const auto& [f, c] : w.terms()) {
    int g = ctx.forest_grade(f);
    for (int m = 0; m <= g; ++m)
      for (ForestId u : ctx.forests_of_grade(m))
        for (ForestId v : ctx.forests_of_grade(g - m)) {
          const ForestMap& uv = prod(ctx, u, v);
          auto it = uv.find(f);
          if (it != uv.end()) out.add_term(u, v, c * it->second);
        }
  }
  return out;
}

}  // namespace

TensorSeries coproduct_gl(const Series& w) {
  return transpose_coproduct(
      w, [](Context& ctx, ForestId u, ForestId v) -> const ForestMap& {
        return gl_forests(ctx, u, v);
      });
}

TensorSeries coproduct_graft(const Series& w) {
  return transpose_coproduct(
      w, [](Context& ctx, ForestId u, ForestId v) -> const ForestMap& {
        return graft_forests(ctx, u, v);
      });
}

// ---- characters ---------------------------------------------------------------

Character::Character(const Context* ctx, int order)
    : values_(Series::unit(ctx, order)) {}

Character Character::counit(const Context* ctx, int order) {
  return Character(ctx, order);
}

Character Character::from_values(Series values) {
  if (lbk::counit(values) != 1)
    throw ContractError("a character maps the empty forest to 1");
  return Character(std::move(values));
}

InfinitesimalCharacter::InfinitesimalCharacter(Series primitive)
    : primitive_(std::move(primitive)) {
  if (!is_primitive(primitive_))
    throw ContractError("infinitesimal characters pair against primitives");
}

Character char_from_lie(const Series& primitive) {
  if (!is_primitive(primitive))
    throw ContractError("char_from_lie requires a primitive series");
  return Character::from_values(exp_conc(primitive));
}

Series lie_from_char(const Character& chi) {
  if (!is_multiplicative(chi))
    throw ContractError("lie_from_char requires a multiplicative character");
  return log_conc(chi.values());
}

bool is_multiplicative(const Character& chi) {
  Context& ctx = *const_cast<Context*>(chi.ctx());
  if (chi(ctx.empty_forest()) != 1) return false;
  int order = chi.order();
  for (int m = 1; m + 1 <= order; ++m)
    for (int n = 1; m + n <= order; ++n)
      for (ForestId u : ctx.forests_of_grade(m))
        for (ForestId v : ctx.forests_of_grade(n)) {
          Rat lhs = 0;
          for (const auto& [f, c] : shuffle_forests(ctx, u, v)) lhs += c * chi(f);
          if (lhs != chi(u) * chi(v)) return false;
        }
  return true;
}

Character convolve(const Character& a, const Character& b, CoproductKind kind) {
  if (a.ctx() != b.ctx() || a.order() != b.order())
    throw ContractError("character convolution needs matching contexts");
  Context& ctx = *const_cast<Context*>(a.ctx());
  Series values(a.ctx(), a.order());
  for (int g = 0; g <= a.order(); ++g)
    for (ForestId f : ctx.forests_of_grade(g)) {
      Series w = Series::of_forest(a.ctx(), a.order(), f);
      TensorSeries cop = kind == CoproductKind::deconcat ? deconcat(w)
                                                         : coproduct_gl(w);
      Rat acc = 0;
      for (const auto& [k, c] : cop.terms()) acc += c * a(k.first) * b(k.second);
      values.add_term(f, acc);
    }
  return Character::from_values(std::move(values));
}

Character conv_exp(const InfinitesimalCharacter& alpha) {
  const Series& prim = alpha.primitive();
  Context& ctx = *const_cast<Context*>(prim.ctx());
  int order = prim.order();
  Series values(prim.ctx(), order);
  for (int g = 0; g <= order; ++g)
    for (ForestId f : ctx.forests_of_grade(g)) {
      std::vector<TreeId> word = ctx.forest_word(f);
      int k = static_cast<int>(word.size());
      Rat acc = k == 0 ? Rat(1) : Rat(0);
      // Sum over compositions into n nonempty contiguous blocks.
      std::function<void(int, int, Rat)> rec = [&](int start, int blocks,
                                                   Rat partial) {
        if (start == k) {
          acc += partial / factorial(blocks);
          return;
        }
        for (int end = start + 1; end <= k; ++end) {
          std::vector<TreeId> block(word.begin() + start, word.begin() + end);
          Rat v = alpha(ctx.forest(block));
          if (v != 0) rec(end, blocks + 1, partial * v);
        }
      };
      if (k > 0) rec(0, 0, Rat(1));
      values.add_term(f, acc);
    }
  return Character::from_values(std::move(values));
}

InfinitesimalCharacter conv_log(const Character& chi) {
  Context& ctx = *const_cast<Context*>(chi.ctx());
  int order = chi.order();
  Series prim(chi.ctx(), order);
  for (int g = 1; g <= order; ++g)
    for (ForestId f : ctx.forests_of_grade(g)) {
      std::vector<TreeId> word = ctx.forest_word(f);
      int k = static_cast<int>(word.size());
      Rat acc = 0;
      std::function<void(int, int, Rat)> rec = [&](int start, int blocks,
                                                   Rat partial) {
        if (start == k) {
          acc += partial * Rat((blocks % 2) ? 1 : -1, blocks);
          return;
        }
        for (int end = start + 1; end <= k; ++end) {
          std::vector<TreeId> block(word.begin() + start, word.begin() + end);
          Rat v = chi(ctx.forest(block));
          if (v != 0) rec(end, blocks + 1, partial * v);
        }
      };
      rec(0, 0, Rat(1));
      prim.add_term(f, acc);
    }
  return InfinitesimalCharacter(std::move(prim));
}

}  // namespace lbk
