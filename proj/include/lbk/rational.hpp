#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace lbk {

// All coefficient arithmetic in the engine is exact. Rat is GMP's canonical
// arbitrary-precision rational; results of gmpxx arithmetic are already in
// lowest terms.
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// "p" or "p/q", lowest terms, q > 0.
inline std::string rat_str(const Rat& q) { return q.get_str(); }

Rat parse_rat(std::string_view text);

inline Rat factorial(int n) {
  Rat r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Rat binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Rat r = 1;
  for (int i = 0; i < k; ++i) r *= Rat(n - i, i + 1);
  r.canonicalize();
  return r;
}

}  // namespace lbk
