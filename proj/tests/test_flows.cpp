#include <random>

#include "doctest.h"
#include "lbk/errors.hpp"
#include "lbk/flows.hpp"
#include "lbk/free_algebra.hpp"
#include "lbk/hopf.hpp"
#include "lbk/subst.hpp"
#include "test_util.hpp"

using namespace lbk;
using test::S;

TEST_CASE("field_to_flow: zero, leaf, primitivity") {
  Context ctx({"a"}, 5);
  CHECK(field_to_flow(Series(&ctx, 5)).is_zero());
  CHECK(field_to_flow(S(ctx, 2, "a[]")) == S(ctx, 2, "a[] + 1/2 * a[a[]]"));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    Series x = random_primitive(ctx, 5, rng);
    Series flow = field_to_flow(x);
    CHECK(is_primitive(flow));
    // Phi(x) = x modulo grade >= 2
    CHECK(flow.graded_part(1) == x.graded_part(1));
  }
  CHECK_THROWS_AS(field_to_flow(S(ctx, 5, "a[] a[]")), ContractError);
}

TEST_CASE("field_to_flow at order 3: frozen expansion") {
  Context ctx({"a"}, 3);
  Series phi = field_to_flow(S(ctx, 3, "a[]"));
  CHECK(phi == S(ctx, 3,
                 "a[] + 1/2 * a[a[]] + 1/12 * a[] a[a[]] - 1/12 * a[a[]] a[] "
                 "+ 1/6 * a[a[] a[]] + 1/6 * a[a[a[]]]"));
}

TEST_CASE("bch_conc: unit, antipode, order-2 and order-3 coefficients") {
  Context ctx2({"a", "b"}, 3);
  Series a = S(ctx2, 3, "a[]");
  Series b = S(ctx2, 3, "b[]");
  CHECK(bch_conc(a, Series(&ctx2, 3)) == a);
  CHECK(bch_conc(a, -a).is_zero());

  // classical BCH: x + y + [x,y]/2 + [x,[x,y]]/12 + [y,[y,x]]/12 + ...
  Series expected = a + b;
  Series half = bracket_conc(a, b);
  half *= Rat(1, 2);
  expected += half;
  Series t1 = bracket_conc(a, bracket_conc(a, b));
  t1 *= Rat(1, 12);
  Series t2 = bracket_conc(b, bracket_conc(b, a));
  t2 *= Rat(1, 12);
  expected += t1;
  expected += t2;
  CHECK(bch_conc(a, b) == expected);
}

TEST_CASE("sharp: units and the order-3 frozen value") {
  Context ctx({"a"}, 3);
  Series a = S(ctx, 3, "a[]");
  Series zero(&ctx, 3);
  CHECK(sharp(zero, a, SharpMode::checked) == a);
  CHECK(sharp(a, zero, SharpMode::checked) == a);
  // 2a + C2 + (1/2)[a, C2] + (1/2)V; the bracket is the order-3 BCH term of
  // a +. (exp(a) |> a), and vanishes only after abelianization.
  CHECK(sharp(a, a, SharpMode::checked) ==
        S(ctx, 3,
          "2 * a[] + a[a[]] + 1/2 * a[] a[a[]] - 1/2 * a[a[]] a[] "
          "+ 1/2 * a[a[] a[]]"));
}

TEST_CASE("sharp: both routes agree on random primitives at order 5") {
  Context ctx({"a"}, 5);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Series x = random_primitive(ctx, 5, rng);
    Series y = random_primitive(ctx, 5, rng);
    CHECK(sharp_definition(x, y) == sharp_grafting(x, y));
  }
}

TEST_CASE("sharp: flow semigroup through Phi") {
  Context ctx({"a"}, 5);
  Series x = S(ctx, 5, "a[]");
  Series two_x = x + x;
  CHECK(sharp(field_to_flow(x), field_to_flow(x), SharpMode::checked) ==
        field_to_flow(two_x));
}

TEST_CASE("sharp is a group law: associativity, unit, inverses") {
  Context ctx({"a"}, 4);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    Series x = random_primitive(ctx, 4, rng);
    Series y = random_primitive(ctx, 4, rng);
    Series z = random_primitive(ctx, 4, rng);
    CHECK(sharp(sharp(x, y), z) == sharp(x, sharp(y, z)));
    CHECK(sharp(x, sharp_inverse(x)).is_zero());
    CHECK(sharp(sharp_inverse(x), x).is_zero());
  }
}

TEST_CASE("backward error inverts field_to_flow") {
  Context ctx({"a"}, 6);
  CHECK(backward_error(S(ctx, 2, "a[]")) == S(ctx, 2, "a[] - 1/2 * a[a[]]"));
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    Series x = random_primitive(ctx, 6, rng);
    CHECK(backward_error(field_to_flow(x)) == x);
    CHECK(field_to_flow(backward_error(x)) == x);
  }
}

TEST_CASE("character convolution realizes bch and sharp") {
  Context ctx({"a"}, 4);
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    Series x = random_primitive(ctx, 4, rng);
    Series y = random_primitive(ctx, 4, rng);
    Character cx = char_from_lie(x);
    Character cy = char_from_lie(y);
    CHECK(convolve(cx, cy, CoproductKind::deconcat) ==
          char_from_lie(bch_conc(x, y)));
    CHECK(convolve(cx, cy, CoproductKind::gl) == char_from_lie(sharp(x, y)));
  }
}

TEST_CASE("deconcat convolution matches the product of grouplikes") {
  Context ctx({"a"}, 5);
  std::mt19937_64 rng(23);
  Series x = random_primitive(ctx, 5, rng);
  Series y = random_primitive(ctx, 5, rng);
  Character conv = convolve(char_from_lie(x), char_from_lie(y),
                            CoproductKind::deconcat);
  Series prod = conc_mul(exp_conc(x), exp_conc(y));
  for (int g = 0; g <= 5; ++g)
    for (ForestId f : ctx.forests_of_grade(g)) CHECK(conv(f) == prod.coeff(f));
}
