// Acceptance suite: one pass/fail line per criterion, exact equality
// throughout (every comparison is over the rationals, no tolerances). Exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "lbk/flows.hpp"
#include "lbk/free_algebra.hpp"
#include "lbk/hopf.hpp"
#include "lbk/kernels.hpp"
#include "lbk/linear_map.hpp"
#include "lbk/parser.hpp"
#include "lbk/prelie.hpp"
#include "lbk/subst.hpp"

using namespace lbk;

namespace {

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> run;
  double time_limit_s = 0;  // 0 = no limit
};

bool fail(std::string& msg, const std::string& detail) {
  msg = detail;
  return false;
}

// 1. Enumeration counts.
bool criterion_enumeration(std::string& msg) {
  Context ctx({"a"}, 8);
  const long forests[] = {1, 2, 5, 14, 42, 132, 429, 1430};
  const long abelian[] = {1, 1, 2, 4, 9, 20, 48, 115};
  long catalan[9];
  catalan[0] = 1;
  for (int n = 0; n < 8; ++n) {
    catalan[n + 1] = 0;
    for (int k = 0; k <= n; ++k) catalan[n + 1] += catalan[k] * catalan[n - k];
  }
  for (int n = 1; n <= 8; ++n) {
    if (static_cast<long>(ctx.forests_of_grade(n).size()) != forests[n - 1])
      return fail(msg, "forest count mismatch at grade " + std::to_string(n));
    if (static_cast<long>(ctx.trees_of_grade(n).size()) != catalan[n - 1])
      return fail(msg, "tree count mismatch at grade " + std::to_string(n));
    if (static_cast<long>(ctx.np_trees_of_grade(n).size()) != abelian[n - 1])
      return fail(msg,
                  "abelianized count mismatch at grade " + std::to_string(n));
  }
  return true;
}

// 2. Post-Lie axioms on all tree triples of total grade <= 5.
bool criterion_post_lie_axioms(std::string& msg) {
  Context ctx({"a"}, 5);
  std::vector<Series> trees;
  for (int g = 1; g <= 3; ++g)
    for (TreeId t : ctx.trees_of_grade(g))
      trees.push_back(Series::of_tree(&ctx, 5, t));
  struct Triple {
    int x, y, z;
  };
  std::vector<Triple> triples;
  for (int i = 0; i < static_cast<int>(trees.size()); ++i)
    for (int j = 0; j < static_cast<int>(trees.size()); ++j)
      for (int k = 0; k < static_cast<int>(trees.size()); ++k) {
        int total = trees[i].min_grade() + trees[j].min_grade() +
                    trees[k].min_grade();
        if (total <= 5) triples.push_back({i, j, k});
      }
  auto check = [&](int idx) {
    const Series& x = trees[triples[idx].x];
    const Series& y = trees[triples[idx].y];
    const Series& z = trees[triples[idx].z];
    Series lhs1 = graft(x, bracket_conc(y, z));
    Series rhs1 = bracket_conc(graft(x, y), z) + bracket_conc(y, graft(x, z));
    if (!(lhs1 == rhs1)) return false;
    auto assoc = [&](const Series& p, const Series& q, const Series& r) {
      return graft(p, graft(q, r)) - graft(graft(p, q), r);
    };
    Series lhs2 = graft(bracket_conc(x, y), z);
    Series rhs2 = assoc(x, y, z) - assoc(y, x, z);
    return lhs2 == rhs2;
  };
  auto bad = find_violation(static_cast<int>(triples.size()), Exec::parallel,
                            check);
  if (bad)
    return fail(msg, "axiom fails on triple (" + trees[triples[*bad].x].str() +
                         ", " + trees[triples[*bad].y].str() + ", " +
                         trees[triples[*bad].z].str() + ")");
  msg = std::to_string(triples.size()) + " triples";
  return true;
}

// 3. Euler idempotency, PBW dimension identity, psi ranks.
bool criterion_euler_pbw(std::string& msg) {
  Context ctx({"a"}, 6);
  for (int g = 1; g <= 5; ++g)
    for (ForestId f : ctx.forests_of_grade(g)) {
      Series e = euler_idempotent(Series::of_forest(&ctx, 6, f));
      if (!(euler_idempotent(e) == e))
        return fail(msg, "e . e != e on " + ctx.forest_string(f));
    }
  // generating-function identity through order 6 with d_k = euler rank
  std::vector<long> d(7, 0), t(7, 0);
  t[0] = 1;
  for (int g = 1; g <= 6; ++g) {
    t[g] = static_cast<long>(ctx.forests_of_grade(g).size());
    auto blk = linear_map_block(
        ctx, g, [&](ForestId f) { return euler_forest(ctx, f); },
        Exec::parallel);
    d[g] = rank(blk.matrix);
  }
  std::vector<long> series(7, 0);
  series[0] = 1;
  for (int k = 1; k <= 6; ++k)
    for (long copy = 0; copy < d[k]; ++copy)
      for (int n = k; n <= 6; ++n) series[n] += series[n - k];
  for (int n = 0; n <= 6; ++n)
    if (series[n] != t[n])
      return fail(msg,
                  "dimension identity fails at order " + std::to_string(n));
  for (int g = 1; g <= 5; ++g) {
    if (pbw_rank(ctx, g, Exec::parallel) !=
        static_cast<int>(ctx.forests_of_grade(g).size()))
      return fail(msg, "psi not full rank at grade " + std::to_string(g));
  }
  msg = "lie dims";
  for (int g = 1; g <= 6; ++g) msg += " " + std::to_string(d[g]);
  return true;
}

// 4. exp/log inverses for both products at order 6.
bool criterion_exp_log(std::string& msg) {
  Context ctx({"a"}, 6);
  std::mt19937_64 rng(1004);
  for (int trial = 0; trial < 50; ++trial) {
    Series x = random_primitive(ctx, 6, rng);
    if (!(log_conc(exp_conc(x)) == x))
      return fail(msg,
                  "log_conc . exp_conc != id, trial " + std::to_string(trial));
    if (!(log_gl(exp_gl(x)) == x))
      return fail(msg, "log_gl . exp_gl != id, trial " + std::to_string(trial));
  }
  return true;
}

// 5. Composition theorem: both sharp routes agree.
bool criterion_sharp_routes(std::string& msg) {
  Context ctx({"a"}, 5);
  std::vector<Series> lies;
  for (int g = 1; g <= 4; ++g)
    for (const LieElem& l : lie_basis(ctx, g))
      lies.push_back(lie_elem_series(ctx, l, 5));
  long pairs = 0;
  for (const Series& x : lies)
    for (const Series& y : lies) {
      if (x.min_grade() + y.min_grade() > 5) continue;
      ++pairs;
      if (!(sharp_definition(x, y) == sharp_grafting(x, y)))
        return fail(msg, "routes disagree on lie pair");
    }
  std::mt19937_64 rng(1005);
  for (int trial = 0; trial < 50; ++trial) {
    Series x = random_primitive(ctx, 5, rng);
    Series y = random_primitive(ctx, 5, rng);
    if (!(sharp_definition(x, y) == sharp_grafting(x, y)))
      return fail(msg,
                  "routes disagree, random trial " + std::to_string(trial));
  }
  msg = std::to_string(pairs) + " lie pairs + 50 random";
  return true;
}

// 6. Flow semantics against the scalar ODE oracle.
bool criterion_flow_semantics(std::string& msg) {
  Context ctx({"a"}, 6);
  Series flow = exp_gl(Series::of_tree(&ctx, 6, ctx.leaf(0)));
  YPoly phi = YPoly::y();
  {
    YPoly f = parse_ypoly("y^2");
    HSeries got = elementary_differential_eval(flow, f, phi);
    for (int n = 0; n <= 6; ++n) {
      YPoly expect;
      expect.coeffs.assign(n + 2, Rat(0));
      expect.coeffs[n + 1] = 1;
      if (!(got.at(n) == expect))
        return fail(msg, "y^2 flow wrong at h^" + std::to_string(n));
    }
  }
  for (const char* field : {"y", "1", "y^2+1"}) {
    YPoly f = parse_ypoly(field);
    HSeries got = elementary_differential_eval(flow, f, phi);
    auto oracle = exact_flow_taylor(f, 6);
    for (int n = 0; n <= 6; ++n)
      if (!(got.at(n) == oracle[n]))
        return fail(msg, std::string("flow of ") + field + " wrong at h^" +
                             std::to_string(n));
  }
  return true;
}

// 7. Backward error inverts the flow map at order 6.
bool criterion_backward_error(std::string& msg) {
  Context ctx({"a"}, 6);
  std::mt19937_64 rng(1007);
  for (int trial = 0; trial < 50; ++trial) {
    Series x = random_primitive(ctx, 6, rng);
    if (!(backward_error(field_to_flow(x)) == x))
      return fail(msg,
                  "backward o flow != id, trial " + std::to_string(trial));
    if (!(field_to_flow(backward_error(x)) == x))
      return fail(msg,
                  "flow o backward != id, trial " + std::to_string(trial));
  }
  return true;
}

// 8. Substitution coherence.
bool criterion_substitution(std::string& msg) {
  Context ctx({"a"}, 4);
  UniversalSubst sub(ctx, 4);
  std::mt19937_64 rng(1008);
  for (int trial = 0; trial < 20; ++trial) {
    Endomorphism a = random_endomorphism(ctx, 4, rng);
    Series u = random_primitive(ctx, 4, rng);
    Series v = random_primitive(ctx, 4, rng);
    if (!(a.apply(sharp(u, v)) == sharp(a.apply(u), a.apply(v))))
      return fail(msg,
                  "sharp morphism law fails, trial " + std::to_string(trial));
    if (!(a.apply(graft(u, v)) == graft(a.apply(u), a.apply(v))))
      return fail(msg,
                  "graft morphism law fails, trial " + std::to_string(trial));
    EndoCharacter alpha = EndoCharacter::from_endomorphism(a);
    for (int g = 0; g <= 4; ++g)
      for (ForestId omega : ctx.forests_of_grade(g)) {
        Series lhs = sub.evaluate(sub.forest_transform(omega), alpha, 4);
        Series rhs = substitution_transpose(a, omega, 4);
        if (!(lhs == rhs))
          return fail(msg, "universal recursion mismatch on " +
                               ctx.forest_string(omega));
      }
  }
  return true;
}

// 9. Duality wiring.
bool criterion_duality(std::string& msg) {
  Context ctx({"a"}, 4);
  for (int gw = 0; gw <= 4; ++gw)
    for (ForestId w : ctx.forests_of_grade(gw)) {
      Series sw = Series::of_forest(&ctx, 4, w);
      TensorSeries dgl = coproduct_gl(sw);
      TensorSeries dgr = coproduct_graft(sw);
      for (int gu = 0; gu <= gw; ++gu)
        for (ForestId u : ctx.forests_of_grade(gu))
          for (ForestId v : ctx.forests_of_grade(gw - gu)) {
            Series su = Series::of_forest(&ctx, 4, u);
            Series sv = Series::of_forest(&ctx, 4, v);
            if (dgl.coeff(u, v) != gl_mul(su, sv).coeff(w))
              return fail(msg, "gl pairing fails at " + ctx.forest_string(w));
            if (dgr.coeff(u, v) != graft(su, sv).coeff(w))
              return fail(msg,
                          "graft pairing fails at " + ctx.forest_string(w));
          }
    }
  std::mt19937_64 rng(1009);
  for (int trial = 0; trial < 10; ++trial) {
    Series x = random_primitive(ctx, 4, rng);
    Series y = random_primitive(ctx, 4, rng);
    Character cx = char_from_lie(x);
    Character cy = char_from_lie(y);
    if (!(convolve(cx, cy, CoproductKind::deconcat) ==
          char_from_lie(bch_conc(x, y))))
      return fail(msg, "deconcat convolution does not realize bch");
    if (!(convolve(cx, cy, CoproductKind::gl) ==
          char_from_lie(sharp(x, y, SharpMode::checked))))
      return fail(msg, "gl convolution does not realize sharp");
  }
  return true;
}

// 10. Euler equivariance under substitution.
bool criterion_equivariance(std::string& msg) {
  Context ctx({"a"}, 4);
  std::mt19937_64 rng(1010);
  for (int trial = 0; trial < 10; ++trial) {
    Endomorphism a = random_endomorphism(ctx, 4, rng);
    for (int g = 0; g <= 4; ++g)
      for (ForestId f : ctx.forests_of_grade(g)) {
        Series s = Series::of_forest(&ctx, 4, f);
        if (!(a.apply(euler_idempotent(s)) == euler_idempotent(a.apply(s))))
          return fail(msg, "equivariance fails on " + ctx.forest_string(f) +
                               ", trial " + std::to_string(trial));
      }
  }
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"1 enumeration counts (grades 1..8)", criterion_enumeration, 10.0},
      {"2 post-Lie axioms (tree triples, total grade <= 5)",
       criterion_post_lie_axioms, 60.0},
      {"3 euler idempotency, dimension identity, psi ranks",
       criterion_euler_pbw, 0},
      {"4 exp/log inverses, both products, order 6", criterion_exp_log, 0},
      {"5 sharp: definition route == grafting route", criterion_sharp_routes,
       0},
      {"6 flow semantics vs exact scalar ODE", criterion_flow_semantics, 10.0},
      {"7 backward error inverts the flow map", criterion_backward_error, 0},
      {"8 substitution coherence (morphisms + universal recursion)",
       criterion_substitution, 0},
      {"9 duality wiring (coproducts, character convolutions)",
       criterion_duality, 0},
      {"10 euler equivariance under substitution", criterion_equivariance, 0},
  };

  int failures = 0;
  for (auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string msg;
    bool ok = false;
    try {
      ok = c.run(msg);
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && c.time_limit_s > 0 && secs > c.time_limit_s) {
      ok = false;
      msg = "exceeded time limit of " + std::to_string(c.time_limit_s) + " s";
    }
    std::printf("[%s] criterion %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL",
                c.name.c_str(), secs, msg.empty() ? "" : " -- ", msg.c_str());
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
