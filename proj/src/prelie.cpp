#include "lbk/prelie.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <tuple>

#include "lbk/errors.hpp"

namespace lbk {

using NpMap = std::map<NpForestId, Rat>;

namespace {

void map_add(NpMap& acc, NpForestId f, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = acc.try_emplace(f, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) acc.erase(it);
  }
}

void map_add_scaled(NpMap& acc, const NpMap& src, const Rat& scale) {
  for (const auto& [f, c] : src) map_add(acc, f, c * scale);
}

NpForestId np_merge(Context& ctx, NpForestId a, NpForestId b) {
  std::vector<NpTreeId> w = ctx.np_forest_word(a);
  std::vector<NpTreeId> wb = ctx.np_forest_word(b);
  w.insert(w.end(), wb.begin(), wb.end());
  return ctx.np_forest(std::move(w));
}

NpTreeId rebuild_attached(Context& ctx, NpTreeId node, NpTreeId x, int target,
                          int& cursor) {
  int me = cursor++;
  std::vector<NpTreeId> kids = ctx.np_tree_children(node);
  if (me == target) {
    kids.push_back(x);
    return ctx.np_tree(ctx.np_tree_color(node), std::move(kids));
  }
  for (auto& k : kids) k = rebuild_attached(ctx, k, x, target, cursor);
  return ctx.np_tree(ctx.np_tree_color(node), std::move(kids));
}

void attach_everywhere(Context& ctx, NpTreeId x, NpTreeId t, NpMap& acc) {
  int vertices = ctx.np_tree_grade(t);
  for (int v = 0; v < vertices; ++v) {
    int cursor = 0;
    NpTreeId grafted = rebuild_attached(ctx, t, x, v, cursor);
    map_add(acc, ctx.np_forest({grafted}), 1);
  }
}

const NpMap& np_graft_impl(Context& ctx, NpForestId a, NpForestId b);

// x |> B for a single non-planar tree x.
NpMap np_graft_tree_forest(Context& ctx, NpTreeId x, NpForestId b) {
  NpMap out;
  std::vector<NpTreeId> word = ctx.np_forest_word(b);
  if (word.empty()) return out;
  if (word.size() == 1) {
    attach_everywhere(ctx, x, word[0], out);
    return out;
  }
  NpTreeId head = word[0];
  std::vector<NpTreeId> rest_word(word.begin() + 1, word.end());
  NpForestId rest = ctx.np_forest(rest_word);
  NpForestId head_f = ctx.np_forest({head});
  for (const auto& [f, c] : np_graft_impl(ctx, ctx.np_forest({x}), head_f))
    map_add(out, np_merge(ctx, f, rest), c);
  for (const auto& [f, c] : np_graft_impl(ctx, ctx.np_forest({x}), rest))
    map_add(out, np_merge(ctx, head_f, f), c);
  return out;
}

// NpMap and ForestMap share the underlying id type, so the PairMemo tables
// serve both sides.
const NpMap& np_graft_impl(Context& ctx, NpForestId a, NpForestId b) {
  if (const NpMap* hit = ctx.np_graft_memo().find(pair_key(a, b))) return *hit;

  NpMap out;
  if (a == ctx.np_empty_forest()) {
    out.emplace(b, Rat(1));
  } else if (b == ctx.np_empty_forest()) {
    // counit of a nonempty multiset
  } else {
    std::vector<NpTreeId> word = ctx.np_forest_word(a);
    if (word.size() == 1) {
      out = np_graft_tree_forest(ctx, word[0], b);
    } else {
      // (x . A') |> B = x |> (A' |> B) - (x |> A') |> B, canonical first tree.
      NpTreeId x = word[0];
      std::vector<NpTreeId> rest_word(word.begin() + 1, word.end());
      NpForestId rest = ctx.np_forest(rest_word);
      NpForestId xf = ctx.np_forest({x});
      for (const auto& [f, c] : np_graft_impl(ctx, rest, b))
        map_add_scaled(out, np_graft_impl(ctx, xf, f), c);
      for (const auto& [f, c] : np_graft_impl(ctx, xf, rest))
        for (const auto& [g, d] : np_graft_impl(ctx, f, b))
          map_add(out, g, -c * d);
    }
  }
  return ctx.np_graft_memo().store(pair_key(a, b), std::move(out));
}

// Sub-multiset pairs of a multiset with their binomial multiplicities.
template <class Fn>
void for_each_submultiset(Context& ctx, const std::vector<NpTreeId>& word,
                          Fn&& fn) {
  // group equal trees
  std::vector<std::pair<NpTreeId, int>> groups;
  for (NpTreeId t : word) {
    if (!groups.empty() && groups.back().first == t)
      ++groups.back().second;
    else
      groups.emplace_back(t, 1);
  }
  std::vector<int> take(groups.size(), 0);
  std::function<void(std::size_t, Rat)> rec = [&](std::size_t i, Rat mult) {
    if (i == groups.size()) {
      std::vector<NpTreeId> left, right;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        for (int k = 0; k < take[g]; ++k) left.push_back(groups[g].first);
        for (int k = take[g]; k < groups[g].second; ++k)
          right.push_back(groups[g].first);
      }
      fn(ctx.np_forest(std::move(left)), ctx.np_forest(std::move(right)), mult);
      return;
    }
    for (int k = 0; k <= groups[i].second; ++k) {
      take[i] = k;
      rec(i + 1, mult * binomial(groups[i].second, k));
    }
  };
  rec(0, Rat(1));
}

const NpMap& np_gl_impl(Context& ctx, NpForestId a, NpForestId b) {
  if (const NpMap* hit = ctx.np_gl_memo().find(pair_key(a, b))) return *hit;
  NpMap out;
  if (a == ctx.np_empty_forest()) {
    out.emplace(b, Rat(1));
  } else if (b == ctx.np_empty_forest()) {
    out.emplace(a, Rat(1));
  } else {
    std::vector<NpTreeId> word = ctx.np_forest_word(a);
    for_each_submultiset(ctx, word,
                         [&](NpForestId left, NpForestId right, const Rat& mult) {
                           for (const auto& [f, c] : np_graft_impl(ctx, right, b))
                             map_add(out, np_merge(ctx, left, f), mult * c);
                         });
  }
  return ctx.np_gl_memo().store(pair_key(a, b), std::move(out));
}

template <class BasisProduct>
PreLieSeries np_bilinear(const PreLieSeries& u, const PreLieSeries& v,
                         BasisProduct&& prod) {
  if (u.ctx() != v.ctx() || u.order() != v.order())
    throw ContractError("pre-Lie operands must share context and order");
  Context& ctx = *const_cast<Context*>(u.ctx());
  PreLieSeries out(u.ctx(), u.order());
  for (const auto& [a, ca] : u.terms()) {
    int ga = ctx.np_forest_grade(a);
    for (const auto& [b, cb] : v.terms()) {
      if (ga + ctx.np_forest_grade(b) > u.order()) continue;
      Rat scale = ca * cb;
      for (const auto& [f, c] : prod(ctx, a, b)) out.add_term(f, c * scale);
    }
  }
  return out;
}

}  // namespace

PreLieSeries::PreLieSeries(const Context* ctx, int order)
    : ctx_(ctx), order_(order) {
  if (order < 0) throw ContractError("truncation order must be nonnegative");
}

PreLieSeries PreLieSeries::unit(const Context* ctx, int order) {
  PreLieSeries s(ctx, order);
  s.add_term(ctx->np_empty_forest(), 1);
  return s;
}

PreLieSeries PreLieSeries::of_forest(const Context* ctx, int order,
                                     NpForestId f, Rat c) {
  PreLieSeries s(ctx, order);
  s.add_term(f, std::move(c));
  return s;
}

Rat PreLieSeries::coeff(NpForestId f) const {
  auto it = terms_.find(f);
  return it == terms_.end() ? Rat(0) : it->second;
}

void PreLieSeries::add_term(NpForestId f, const Rat& c) {
  if (c == 0) return;
  if (ctx_->np_forest_grade(f) > order_) return;
  auto [it, inserted] = terms_.try_emplace(f, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

PreLieSeries& PreLieSeries::operator+=(const PreLieSeries& rhs) {
  for (const auto& [f, c] : rhs.terms_) add_term(f, c);
  return *this;
}
PreLieSeries& PreLieSeries::operator-=(const PreLieSeries& rhs) {
  for (const auto& [f, c] : rhs.terms_) add_term(f, -c);
  return *this;
}
PreLieSeries& PreLieSeries::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [f, v] : terms_) v *= c;
  return *this;
}

std::string PreLieSeries::str() const {
  if (terms_.empty()) return "0";
  std::vector<std::tuple<int, std::string, const Rat*>> items;
  for (const auto& [f, c] : terms_)
    items.emplace_back(ctx_->np_forest_grade(f), ctx_->np_forest_string(f), &c);
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

PreLieSeries project_abelian(const Series& u) {
  Context& ctx = *const_cast<Context*>(u.ctx());
  PreLieSeries out(u.ctx(), u.order());
  for (const auto& [f, c] : u.terms())
    out.add_term(ctx.abelianize_forest(f), c);
  return out;
}

PreLieSeries np_mul(const PreLieSeries& u, const PreLieSeries& v) {
  return np_bilinear(u, v, [](Context& ctx, NpForestId a, NpForestId b) {
    return NpMap{{np_merge(ctx, a, b), Rat(1)}};
  });
}

PreLieSeries np_graft(const PreLieSeries& u, const PreLieSeries& v) {
  return np_bilinear(u, v,
                     [](Context& ctx, NpForestId a, NpForestId b) -> const NpMap& {
                       return np_graft_impl(ctx, a, b);
                     });
}

PreLieSeries np_gl_mul(const PreLieSeries& u, const PreLieSeries& v) {
  return np_bilinear(u, v,
                     [](Context& ctx, NpForestId a, NpForestId b) -> const NpMap& {
                       return np_gl_impl(ctx, a, b);
                     });
}

PreLieSeries np_exp_mul(const PreLieSeries& x) {
  if (x.coeff(x.ctx()->np_empty_forest()) != 0)
    throw ContractError("exp requires a series with no constant term");
  PreLieSeries out = PreLieSeries::unit(x.ctx(), x.order());
  PreLieSeries power = out;
  for (int n = 1; n <= x.order(); ++n) {
    power = np_mul(power, x);
    if (power.is_zero()) break;
    PreLieSeries term = power;
    term *= 1 / factorial(n);
    out += term;
  }
  return out;
}

bool np_is_primitive(const PreLieSeries& u) {
  const Context& ctx = *u.ctx();
  for (const auto& [f, c] : u.terms())
    if (ctx.np_forest_word(f).size() != 1) return false;
  return true;
}

PreLieSeries pre_lie_sharp(const PreLieSeries& x, const PreLieSeries& y) {
  if (!np_is_primitive(x) || !np_is_primitive(y))
    throw ContractError("pre_lie_sharp requires tree-supported arguments");
  return x + np_graft(np_exp_mul(x), y);
}

PreLieSeries np_apply_endomorphism(const std::vector<PreLieSeries>& images,
                                   const PreLieSeries& u) {
  Context& ctx = *const_cast<Context*>(u.ctx());
  if (static_cast<int>(images.size()) != ctx.num_colors())
    throw ContractError("one image per color required");
  int order = u.order();
  std::map<NpTreeId, PreLieSeries> cache;
  std::function<PreLieSeries(NpTreeId)> on_tree = [&](NpTreeId t) {
    auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    PreLieSeries arg = PreLieSeries::unit(u.ctx(), order);
    for (NpTreeId child : ctx.np_tree_children(t))
      arg = np_mul(arg, on_tree(child));
    PreLieSeries result = np_graft(arg, images[ctx.np_tree_color(t)]);
    cache.emplace(t, result);
    return result;
  };
  PreLieSeries out(u.ctx(), order);
  for (const auto& [f, c] : u.terms()) {
    PreLieSeries word = PreLieSeries::unit(u.ctx(), order);
    for (NpTreeId t : ctx.np_forest_word(f)) {
      word = np_mul(word, on_tree(t));
      if (word.is_zero()) break;
    }
    word *= c;
    out += word;
  }
  return out;
}

// ---- scalar polynomial ODE oracle ----------------------------------------------

YPoly YPoly::constant(Rat c) {
  YPoly p;
  if (c != 0) p.coeffs = {std::move(c)};
  return p;
}

YPoly YPoly::y() {
  YPoly p;
  p.coeffs = {Rat(0), Rat(1)};
  return p;
}

bool YPoly::is_zero() const { return coeffs.empty(); }

void YPoly::normalize() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

Rat YPoly::coeff(std::size_t k) const {
  return k < coeffs.size() ? coeffs[k] : Rat(0);
}

YPoly YPoly::derivative() const {
  YPoly out;
  if (coeffs.size() <= 1) return out;
  out.coeffs.resize(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k)
    out.coeffs[k - 1] = Rat(static_cast<long>(k)) * coeffs[k];
  out.normalize();
  return out;
}

YPoly YPoly::operator+(const YPoly& rhs) const {
  YPoly out;
  out.coeffs.resize(std::max(coeffs.size(), rhs.coeffs.size()), Rat(0));
  for (std::size_t k = 0; k < out.coeffs.size(); ++k)
    out.coeffs[k] = coeff(k) + rhs.coeff(k);
  out.normalize();
  return out;
}

YPoly YPoly::operator-(const YPoly& rhs) const {
  YPoly out;
  out.coeffs.resize(std::max(coeffs.size(), rhs.coeffs.size()), Rat(0));
  for (std::size_t k = 0; k < out.coeffs.size(); ++k)
    out.coeffs[k] = coeff(k) - rhs.coeff(k);
  out.normalize();
  return out;
}

YPoly YPoly::operator*(const YPoly& rhs) const {
  YPoly out;
  if (is_zero() || rhs.is_zero()) return out;
  out.coeffs.assign(coeffs.size() + rhs.coeffs.size() - 1, Rat(0));
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs.size(); ++j)
      out.coeffs[i + j] += coeffs[i] * rhs.coeffs[j];
  out.normalize();
  return out;
}

YPoly& YPoly::operator*=(const Rat& c) {
  if (c == 0) {
    coeffs.clear();
    return *this;
  }
  for (auto& v : coeffs) v *= c;
  return *this;
}

bool YPoly::operator==(const YPoly& rhs) const { return coeffs == rhs.coeffs; }

std::string YPoly::str() const {
  if (coeffs.empty()) return "0";
  std::string out;
  bool first = true;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    Rat c = coeffs[k];
    if (c == 0) continue;
    if (first) {
      if (c < 0) {
        out += '-';
        c = -c;
      }
    } else {
      out += c < 0 ? " - " : " + ";
      if (c < 0) c = -c;
    }
    first = false;
    if (k == 0) {
      out += rat_str(c);
    } else {
      if (c != 1) {
        out += rat_str(c);
        out += '*';
      }
      out += 'y';
      if (k > 1) {
        out += '^';
        out += std::to_string(k);
      }
    }
  }
  return out.empty() ? "0" : out;
}

YPoly parse_ypoly(std::string_view text) {
  YPoly out;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  auto fail = [&]() -> void {
    throw ParseError("invalid polynomial in y", 1, static_cast<int>(pos) + 1);
  };
  bool first = true;
  while (true) {
    skip();
    if (pos >= text.size()) {
      if (first) fail();
      break;
    }
    Rat sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      if (text[pos] == '-') sign = -1;
      ++pos;
      skip();
    } else if (!first) {
      fail();
    }
    Rat coeff = 1;
    bool have_coeff = false;
    if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::string num;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        num += text[pos++];
      std::string den = "1";
      skip();
      if (pos < text.size() && text[pos] == '/') {
        ++pos;
        skip();
        den.clear();
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
          den += text[pos++];
        if (den.empty()) fail();
      }
      coeff = Rat(mpz_class(num), mpz_class(den));
      coeff.canonicalize();
      have_coeff = true;
      skip();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip();
      }
    }
    std::size_t power = 0;
    if (pos < text.size() && text[pos] == 'y') {
      ++pos;
      power = 1;
      skip();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        skip();
        std::string e;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
          e += text[pos++];
        if (e.empty()) fail();
        power = std::stoul(e);
      }
    } else if (!have_coeff) {
      fail();
    }
    if (out.coeffs.size() <= power) out.coeffs.resize(power + 1, Rat(0));
    out.coeffs[power] += sign * coeff;
    first = false;
  }
  out.normalize();
  return out;
}

const YPoly& HSeries::at(std::size_t k) const {
  static const YPoly kZero{};
  return k < by_h.size() ? by_h[k] : kZero;
}

bool HSeries::operator==(const HSeries& rhs) const {
  std::size_t n = std::max(by_h.size(), rhs.by_h.size());
  for (std::size_t k = 0; k < n; ++k)
    if (!(at(k) == rhs.at(k))) return false;
  return true;
}

std::vector<YPoly> exact_flow_taylor(const YPoly& f, int order) {
  if (order < 1) throw ContractError("exact_flow_taylor needs order >= 1");
  std::vector<YPoly> out;
  YPoly d = YPoly::y();
  Rat fact = 1;
  for (int k = 0; k <= order; ++k) {
    YPoly c = d;
    c *= 1 / fact;
    out.push_back(std::move(c));
    d = d.derivative() * f;
    fact *= (k + 1);
  }
  return out;
}

namespace {

// Elementary differential of one non-planar tree, memoized per call chain.
YPoly elem_diff(Context& ctx, NpTreeId t, const YPoly& f,
                std::map<NpTreeId, YPoly>& cache) {
  auto it = cache.find(t);
  if (it != cache.end()) return it->second;
  std::vector<NpTreeId> kids = ctx.np_tree_children(t);
  YPoly val = f;
  for (std::size_t k = 0; k < kids.size(); ++k) val = val.derivative();
  for (NpTreeId c : kids) val = val * elem_diff(ctx, c, f, cache);
  cache.emplace(t, val);
  return val;
}

HSeries eval_np_terms(Context& ctx, const std::map<NpForestId, Rat>& terms,
                      int order, const YPoly& f, const YPoly& phi) {
  if (ctx.num_colors() != 1)
    throw ContractError(
        "elementary differentials need a single-color alphabet");
  HSeries out;
  out.by_h.resize(order + 1);
  std::map<NpTreeId, YPoly> cache;
  for (const auto& [fid, c] : terms) {
    int grade = ctx.np_forest_grade(fid);
    if (grade > order) continue;
    std::vector<NpTreeId> word = ctx.np_forest_word(fid);
    YPoly val = phi;
    for (std::size_t k = 0; k < word.size(); ++k) val = val.derivative();
    if (val.is_zero()) continue;
    for (NpTreeId t : word) val = val * elem_diff(ctx, t, f, cache);
    val *= c;
    out.by_h[grade] = out.by_h[grade] + val;
  }
  return out;
}

}  // namespace

HSeries elementary_differential_eval(const Series& u, const YPoly& f,
                                     const YPoly& phi) {
  return elementary_differential_eval(project_abelian(u), f, phi);
}

HSeries elementary_differential_eval(const PreLieSeries& u, const YPoly& f,
                                     const YPoly& phi) {
  Context& ctx = *const_cast<Context*>(u.ctx());
  return eval_np_terms(ctx, u.terms(), u.order(), f, phi);
}

}  // namespace lbk
