#include <random>

#include "doctest.h"
#include "lbk/errors.hpp"
#include "lbk/flows.hpp"
#include "lbk/free_algebra.hpp"
#include "lbk/hopf.hpp"
#include "lbk/prelie.hpp"
#include "lbk/subst.hpp"
#include "test_util.hpp"

using namespace lbk;
using test::S;

TEST_CASE("multiset forest counts") {
  Context ctx({"a"}, 8);
  // Multisets of rooted trees of total grade n are rooted trees of grade n+1
  // with the root deleted, so the counts shift the rooted-tree sequence.
  auto r = test::rooted_trees(10);
  for (int n = 1; n <= 7; ++n)
    CHECK(static_cast<long>(ctx.np_forests_of_grade(n).size()) == r[n + 1]);
}

TEST_CASE("projection intertwines graft and gl, grade <= 4") {
  Context ctx({"a"}, 4);
  for (int ga = 1; ga + 1 <= 4; ++ga)
    for (int gb = 1; ga + gb <= 4; ++gb)
      for (ForestId a : ctx.forests_of_grade(ga))
        for (ForestId b : ctx.forests_of_grade(gb)) {
          Series sa = Series::of_forest(&ctx, 4, a);
          Series sb = Series::of_forest(&ctx, 4, b);
          CHECK(project_abelian(graft(sa, sb)) ==
                np_graft(project_abelian(sa), project_abelian(sb)));
          CHECK(project_abelian(gl_mul(sa, sb)) ==
                np_gl_mul(project_abelian(sa), project_abelian(sb)));
        }
}

TEST_CASE("projection sends the grade-4 planar pair to one tree") {
  Context ctx({"a"}, 4);
  Series two = S(ctx, 4, "a[a[] a[a[]]] + a[a[a[]] a[]]");
  PreLieSeries img = project_abelian(two);
  REQUIRE(img.terms().size() == 1);
  CHECK(img.terms().begin()->second == 2);
}

TEST_CASE("pre-Lie sharp: unit, projection square, associativity") {
  Context ctx({"a"}, 4);
  std::mt19937_64 rng(3);
  PreLieSeries zero(&ctx, 4);
  for (int trial = 0; trial < 6; ++trial) {
    Series x = random_primitive(ctx, 4, rng);
    Series y = random_primitive(ctx, 4, rng);
    // tree parts project to tree-supported pre-Lie elements
    PreLieSeries px = project_abelian(euler_idempotent(x));
    PreLieSeries py = project_abelian(euler_idempotent(y));
    if (!np_is_primitive(px) || !np_is_primitive(py)) continue;
    CHECK(pre_lie_sharp(zero, py) == py);
    CHECK(pre_lie_sharp(px, zero) == px);
    CHECK(pre_lie_sharp(pre_lie_sharp(px, py), px) ==
          pre_lie_sharp(px, pre_lie_sharp(py, px)));
  }
}

TEST_CASE("abelianized sharp equals pre-Lie sharp on tree-supported flows") {
  Context ctx({"a"}, 4);
  // tree-supported primitives: single trees with coefficients
  Series x = S(ctx, 4, "a[] + 1/2 * a[a[]]");
  Series y = S(ctx, 4, "a[a[]] + a[a[] a[]]");
  PreLieSeries lhs = project_abelian(sharp(x, y));
  PreLieSeries rhs = pre_lie_sharp(project_abelian(x), project_abelian(y));
  CHECK(lhs == rhs);
}

TEST_CASE("pre-Lie substitution commutes with projection, grade <= 4") {
  Context ctx({"a"}, 4);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    // images supported on trees abelianize to valid pre-Lie images
    Series img(&ctx, 4);
    for (int g = 1; g <= 3; ++g)
      for (TreeId t : ctx.trees_of_grade(g))
        if (rng() % 3 == 0)
          img += Series::of_tree(&ctx, 4, t, Rat(static_cast<long>(rng() % 3) - 1));
    if (img.graded_part(1).is_zero())
      img += Series::of_tree(&ctx, 4, ctx.leaf(0));
    Endomorphism a(&ctx, 4, {img});
    std::vector<PreLieSeries> np_images{project_abelian(img)};
    for (int n = 0; n <= 4; ++n)
      for (ForestId f : ctx.forests_of_grade(n)) {
        Series u = Series::of_forest(&ctx, 4, f);
        CHECK(project_abelian(a.apply(u)) ==
              np_apply_endomorphism(np_images, project_abelian(u)));
      }
  }
}

TEST_CASE("ypoly parsing and arithmetic") {
  YPoly f = parse_ypoly("y^2");
  CHECK(f.str() == "y^2");
  CHECK(parse_ypoly("y^2+1").str() == "y^2 + 1");
  CHECK(parse_ypoly("3/2*y - 1").str() == "3/2*y - 1");
  CHECK(parse_ypoly("1").derivative().is_zero());
  CHECK(parse_ypoly("y^3").derivative() == parse_ypoly("3*y^2"));
  CHECK_THROWS_AS(parse_ypoly("q"), ParseError);
}

TEST_CASE("exact flow taylor coefficients") {
  auto quad = exact_flow_taylor(parse_ypoly("y^2"), 4);
  // y/(1-hy): y, y^2, y^3, y^4, y^5
  for (int k = 0; k <= 4; ++k) {
    YPoly expect;
    expect.coeffs.assign(k + 2, Rat(0));
    expect.coeffs[k + 1] = 1;
    CHECK(quad[k] == expect);
  }

  auto drift = exact_flow_taylor(parse_ypoly("1"), 3);
  CHECK(drift[0] == parse_ypoly("y"));
  CHECK(drift[1] == parse_ypoly("1"));
  CHECK(drift[2].is_zero());
  CHECK(drift[3].is_zero());

  auto lin = exact_flow_taylor(parse_ypoly("y"), 3);
  CHECK(lin[0] == parse_ypoly("y"));
  CHECK(lin[1] == parse_ypoly("y"));
  CHECK(lin[2] == parse_ypoly("1/2*y"));
  CHECK(lin[3] == parse_ypoly("1/6*y"));
}

TEST_CASE("elementary differentials: first order and the exact flow") {
  Context ctx({"a"}, 6);
  YPoly f = parse_ypoly("y^2");
  YPoly phi = YPoly::y();

  HSeries first = elementary_differential_eval(S(ctx, 6, "a[]"), f, phi);
  CHECK(first.at(1) == f);

  Series flow = exp_gl(S(ctx, 6, "a[]"));
  HSeries lhs = elementary_differential_eval(flow, f, phi);
  auto oracle = exact_flow_taylor(f, 6);
  for (int n = 0; n <= 6; ++n) CHECK(lhs.at(n) == oracle[n]);
}

TEST_CASE("elementary differentials: general field at order 3") {
  Context ctx({"a"}, 3);
  YPoly phi = YPoly::y();
  for (const char* field : {"y^3 + 2*y + 1", "y^2 - y", "5*y^4"}) {
    YPoly f = parse_ypoly(field);
    Series flow = exp_gl(S(ctx, 3, "a[]"));
    HSeries got = elementary_differential_eval(flow, f, phi);
    // y + h f + h^2/2 f'f + h^3/6 (f'' f^2 + f'^2 f)
    YPoly d1 = f.derivative();
    YPoly d2 = d1.derivative();
    CHECK(got.at(0) == phi);
    CHECK(got.at(1) == f);
    YPoly h2 = d1 * f;
    h2 *= Rat(1, 2);
    CHECK(got.at(2) == h2);
    YPoly h3 = d2 * f * f + d1 * d1 * f;
    h3 *= Rat(1, 6);
    CHECK(got.at(3) == h3);
  }
}

TEST_CASE("abelianized flow map: spot coefficients") {
  Context ctx({"a"}, 3);
  Series phi = field_to_flow(S(ctx, 3, "a[]"));
  CHECK(phi.coeff(ctx.forest_of_tree(parse_tree(&ctx, "a[a[]]"))) == Rat(1, 2));
  CHECK(phi.coeff(ctx.forest_of_tree(parse_tree(&ctx, "a[a[a[]]]"))) ==
        Rat(1, 6));
  CHECK(phi.coeff(ctx.forest_of_tree(parse_tree(&ctx, "a[a[] a[]]"))) ==
        Rat(1, 6));
  PreLieSeries ab = project_abelian(phi);
  NpTreeId chain3 = ctx.abelianize(parse_tree(&ctx, "a[a[a[]]]"));
  CHECK(ab.coeff(ctx.np_forest({chain3})) == Rat(1, 6));
}
