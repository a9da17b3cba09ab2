#include <random>

#include "doctest.h"
#include "lbk/errors.hpp"
#include "lbk/free_algebra.hpp"
#include "lbk/hopf.hpp"
#include "lbk/subst.hpp"
#include "test_util.hpp"

using namespace lbk;
using test::S;

namespace {

// Lie dimensions from the forest counts via the cyclotomic identity
// prod_k (1 - x^k)^{-d_k} = sum_n t_n x^n, solved grade by grade. This is the
// independent oracle for the ranks below.
std::vector<long> lie_dims_from_counts(const std::vector<long>& t, int up_to) {
  std::vector<long> d(up_to + 1, 0);
  // series[n] = coefficient of x^n of the product over k <= current
  std::vector<long> series(up_to + 1, 0);
  series[0] = 1;
  for (int k = 1; k <= up_to; ++k) {
    // choose d_k so that the coefficient of x^k matches t_k
    d[k] = t[k] - series[k];
    // multiply series by (1 - x^k)^{-d_k}: repeated geometric factors
    for (long copy = 0; copy < d[k]; ++copy)
      for (int n = k; n <= up_to; ++n) series[n] += series[n - k];
  }
  return d;
}

}  // namespace

TEST_CASE("euler idempotent: fixed points and frozen values") {
  Context ctx({"a"}, 4);
  for (int g = 1; g <= 3; ++g)
    for (TreeId t : ctx.trees_of_grade(g)) {
      Series s = Series::of_tree(&ctx, 4, t);
      CHECK(euler_idempotent(s) == s);
    }
  CHECK(euler_idempotent(S(ctx, 4, "a[] a[]")).is_zero());
  CHECK(euler_idempotent(S(ctx, 4, "a[] a[a[]]")) ==
        S(ctx, 4, "1/2 * a[] a[a[]] - 1/2 * a[a[]] a[]"));
}

TEST_CASE("euler is idempotent and lands in primitives, grade <= 5") {
  Context ctx({"a"}, 5);
  for (int g = 1; g <= 5; ++g)
    for (ForestId f : ctx.forests_of_grade(g)) {
      Series e = euler_idempotent(Series::of_forest(&ctx, 5, f));
      CHECK(euler_idempotent(e) == e);
      CHECK(is_primitive(e));
    }
}

TEST_CASE("eulerian components project and sum to the identity") {
  Context ctx({"a"}, 5);
  Series t = S(ctx, 5, "a[a[]]");
  CHECK(eulerian_component(t, 1) == t);
  Series sq = S(ctx, 5, "a[] a[]");
  CHECK(eulerian_component(sq, 2) == sq);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    Series w(&ctx, 5);
    for (int n = 0; n <= 5; ++n)
      for (ForestId f : ctx.forests_of_grade(n))
        if (rng() % 4 == 0) w.add_term(f, Rat(static_cast<long>(rng() % 7) - 3));
    Series sum(&ctx, 5);
    for (int p = 0; p <= 5; ++p) sum += eulerian_component(w, p);
    CHECK(sum == w);
  }
}

TEST_CASE("exp/log for both products") {
  Context ctx({"a"}, 6);
  Series zero(&ctx, 6);
  CHECK(exp_conc(zero) == Series::unit(&ctx, 6));
  CHECK(log_conc(Series::unit(&ctx, 6)).is_zero());
  CHECK(exp_gl(zero) == Series::unit(&ctx, 6));

  Series x = S(ctx, 6, "a[] + a[a[]]");
  CHECK(log_conc(exp_conc(x)) == x);
  CHECK(log_gl(exp_gl(x)) == x);
  CHECK(log_gl(exp_gl(S(ctx, 6, "a[]"))) == S(ctx, 6, "a[]"));

  CHECK(exp_gl(S(ctx, 2, "a[]")) ==
        S(ctx, 2, "1 + a[] + 1/2 * a[] a[] + 1/2 * a[a[]]"));

  CHECK_THROWS_AS(exp_conc(Series::unit(&ctx, 6)), ContractError);
  CHECK_THROWS_AS(log_conc(zero), ContractError);
}

TEST_CASE("exp of a primitive is grouplike for unshuffle") {
  Context ctx({"a"}, 4);
  Series g = exp_conc(S(ctx, 4, "a[]"));
  TensorSeries lhs = unshuffle(g);
  TensorSeries rhs(&ctx, 4);
  for (const auto& [f1, c1] : g.terms())
    for (const auto& [f2, c2] : g.terms()) rhs.add_term(f1, f2, c1 * c2);
  CHECK(lhs == rhs);
}

TEST_CASE("lie basis: low grades, dimensions against the counting oracle") {
  Context ctx({"a"}, 6);
  const auto& l1 = lie_basis(ctx, 1);
  REQUIRE(l1.size() == 1);
  CHECK(lie_elem_series(ctx, l1[0], 6) == S(ctx, 6, "a[]"));

  const auto& l2 = lie_basis(ctx, 2);
  REQUIRE(l2.size() == 1);
  CHECK(lie_elem_series(ctx, l2[0], 6) == S(ctx, 6, "a[a[]]"));

  const auto& l3 = lie_basis(ctx, 3);
  REQUIRE(l3.size() == 3);

  std::vector<long> t{1};
  for (int n = 1; n <= 6; ++n)
    t.push_back(static_cast<long>(ctx.forests_of_grade(n).size()));
  auto d = lie_dims_from_counts(t, 6);
  for (int n = 1; n <= 6; ++n)
    CHECK(static_cast<long>(lie_basis(ctx, n).size()) == d[n]);

  // every element is primitive and homogeneous
  for (int n = 1; n <= 4; ++n)
    for (const LieElem& l : lie_basis(ctx, n)) {
      Series s = lie_elem_series(ctx, l, 6);
      CHECK(is_primitive(s));
      CHECK(s.graded_part(n) == s);
    }
}

TEST_CASE("lie basis spans the euler image: ranks match") {
  Context ctx({"a"}, 5);
  for (int n = 1; n <= 5; ++n) {
    const auto& basis = ctx.forests_of_grade(n);
    SparseMatrix euler_m(static_cast<int>(basis.size()),
                         static_cast<int>(basis.size()));
    for (int c = 0; c < static_cast<int>(basis.size()); ++c)
      for (const auto& [f, v] : euler_forest(ctx, basis[c]))
        euler_m.add(ctx.forest_position(f), c, v);
    CHECK(rank(euler_m) == static_cast<int>(lie_basis(ctx, n).size()));
  }
}

TEST_CASE("pbw: singleton embedding pairs as the dual basis") {
  Context ctx({"a"}, 4);
  for (int n = 1; n <= 4; ++n) {
    const auto& level = lie_basis(ctx, n);
    for (int i = 0; i < static_cast<int>(level.size()); ++i) {
      std::vector<int> single{level[i].flat_index};
      Series psi = pbw_iso(ctx, single, 4);
      // the embedded functional takes value delta_ij on the lie basis
      for (int j = 0; j < static_cast<int>(level.size()); ++j) {
        Rat v = pair(psi, lie_elem_series(ctx, level[j], 4));
        CHECK(v == (i == j ? 1 : 0));
      }
      // and is fixed by the transposed euler map
      Series fixed(&ctx, 4);
      for (ForestId f : ctx.forests_of_grade(n)) {
        Rat acc = 0;
        for (const auto& [g, c] : euler_forest(ctx, f)) acc += psi.coeff(g) * c;
        fixed.add_term(f, acc);
      }
      CHECK(fixed == psi);
    }
  }
}

TEST_CASE("pbw is a morphism for shuffle on random multisets") {
  Context ctx({"a"}, 5);
  std::mt19937_64 rng(23);
  int flats = ctx.lie_flat_count(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> m1, m2;
    int total = 0;
    while (true) {
      int f = 1 + static_cast<int>(rng() % flats);
      int g = ctx.lie_elem_by_flat(f).grade;
      if (total + g > 2 + static_cast<int>(rng() % 2)) break;
      m1.push_back(f);
      total += g;
    }
    total = 0;
    while (true) {
      int f = 1 + static_cast<int>(rng() % flats);
      int g = ctx.lie_elem_by_flat(f).grade;
      if (total + g > 2) break;
      m2.push_back(f);
      total += g;
    }
    std::vector<int> both = m1;
    both.insert(both.end(), m2.begin(), m2.end());
    CHECK(shuffle_mul(pbw_iso(ctx, m1, 5), pbw_iso(ctx, m2, 5)) ==
          pbw_iso(ctx, both, 5));
  }
}

TEST_CASE("pbw matrix has full rank per grade <= 4") {
  Context ctx({"a"}, 4);
  for (int n = 1; n <= 4; ++n) {
    auto multisets = lie_multisets_of_grade(ctx, n);
    CHECK(multisets.size() == ctx.forests_of_grade(n).size());
    CHECK(pbw_rank(ctx, n) == static_cast<int>(multisets.size()));
  }
}

TEST_CASE("dual coproducts: lowest grades") {
  Context ctx({"a"}, 4);
  ForestId unit = ctx.empty_forest();
  ForestId fa = ctx.forest_of_tree(ctx.leaf(0));
  ForestId fc2 = ctx.forest_of_tree(parse_tree(&ctx, "a[a[]]"));

  TensorSeries d = coproduct_gl(Series::of_forest(&ctx, 4, fa));
  CHECK(d.coeff(fa, unit) == 1);
  CHECK(d.coeff(unit, fa) == 1);
  CHECK(d.terms().size() == 2);

  TensorSeries dc2 = coproduct_gl(Series::of_forest(&ctx, 4, fc2));
  CHECK(dc2.coeff(fa, fa) == 1);  // gl(a,a) contains the 2-chain

  TensorSeries g = coproduct_graft(Series::of_forest(&ctx, 4, fa));
  CHECK(g.coeff(unit, fa) == 1);
  CHECK(g.terms().size() == 1);

  TensorSeries gc2 = coproduct_graft(Series::of_forest(&ctx, 4, fc2));
  CHECK(gc2.coeff(fa, fa) == 1);  // graft(a,a) is the 2-chain
}

TEST_CASE("dual coproducts pair against the products, grade <= 4") {
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
            CHECK(dgl.coeff(u, v) == gl_mul(su, sv).coeff(w));
            CHECK(dgr.coeff(u, v) == graft(su, sv).coeff(w));
          }
    }
}

TEST_CASE("coproduct_gl is coassociative up to grade 3") {
  Context ctx({"a"}, 3);
  for (int g = 0; g <= 3; ++g)
    for (ForestId w : ctx.forests_of_grade(g)) {
      // expand both ways into three legs
      std::map<std::tuple<ForestId, ForestId, ForestId>, Rat> left, right;
      TensorSeries first = coproduct_gl(Series::of_forest(&ctx, 3, w));
      for (const auto& [k, c] : first.terms()) {
        TensorSeries dl = coproduct_gl(Series::of_forest(&ctx, 3, k.first));
        for (const auto& [k2, c2] : dl.terms()) {
          auto key = std::make_tuple(k2.first, k2.second, k.second);
          left[key] += c * c2;
          if (left[key] == 0) left.erase(key);
        }
        TensorSeries dr = coproduct_gl(Series::of_forest(&ctx, 3, k.second));
        for (const auto& [k2, c2] : dr.terms()) {
          auto key = std::make_tuple(k.first, k2.first, k2.second);
          right[key] += c * c2;
          if (right[key] == 0) right.erase(key);
        }
      }
      CHECK(left == right);
    }
}

TEST_CASE("characters from lie elements") {
  Context ctx({"a"}, 4);
  Series lie = S(ctx, 4, "a[]");
  Character chi = char_from_lie(lie);
  // chi(a^k) = 1/k!, zero on anything containing a non-leaf tree
  ForestId fa = ctx.forest_of_tree(ctx.leaf(0));
  std::vector<TreeId> word;
  for (int k = 0; k <= 4; ++k) {
    CHECK(chi(ctx.forest(word)) == 1 / factorial(k));
    word.push_back(ctx.leaf(0));
  }
  CHECK(chi(ctx.forest_of_tree(parse_tree(&ctx, "a[a[]]"))) == 0);
  CHECK(is_multiplicative(chi));
  CHECK(lie_from_char(chi) == lie);
  (void)fa;

  Character eps = char_from_lie(Series(&ctx, 4));
  CHECK(eps == Character::counit(&ctx, 4));
}

TEST_CASE("character round trip on random primitives") {
  Context ctx({"a"}, 5);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    Series lie = random_primitive(ctx, 5, rng);
    CHECK(lie_from_char(char_from_lie(lie)) == lie);
  }
}

TEST_CASE("convolution exp/log realize the character bijection") {
  Context ctx({"a"}, 4);
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 5; ++trial) {
    Series lie = random_primitive(ctx, 4, rng);
    InfinitesimalCharacter alpha(lie);
    Character chi = conv_exp(alpha);
    CHECK(chi == char_from_lie(lie));  // both equal pairing against exp_conc
    InfinitesimalCharacter back = conv_log(chi);
    CHECK(back.primitive() == lie);
  }
}

TEST_CASE("infinitesimal characters satisfy the derivation law") {
  Context ctx({"a"}, 4);
  std::mt19937_64 rng(41);
  Series lie = random_primitive(ctx, 4, rng);
  InfinitesimalCharacter alpha(lie);
  // alpha(u shuffle v) = eps(u) alpha(v) + alpha(u) eps(v)
  for (int gu = 0; gu <= 2; ++gu)
    for (ForestId u : ctx.forests_of_grade(gu))
      for (int gv = 0; gv + gu <= 4; ++gv)
        for (ForestId v : ctx.forests_of_grade(gv)) {
          Series su = Series::of_forest(&ctx, 4, u);
          Series sv = Series::of_forest(&ctx, 4, v);
          Rat lhs = 0;
          Series sh = shuffle_mul(su, sv);
          for (const auto& [f, c] : sh.terms()) lhs += c * alpha(f);
          Rat rhs = counit(su) * alpha(v) + alpha(u) * counit(sv);
          CHECK(lhs == rhs);
        }
  CHECK_THROWS_AS(InfinitesimalCharacter(S(ctx, 4, "a[] a[]")), ContractError);
}
