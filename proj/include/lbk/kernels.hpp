#pragma once

#include <functional>
#include <optional>

#include "lbk/context.hpp"
#include "lbk/linear_map.hpp"
#include "lbk/series.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lbk {

// Every kernel below has a serial reference path and an OpenMP path that must
// produce identical results; tests compare them and tools/bench times them.
enum class Exec { serial, parallel };

template <class Fn>
void for_each_index(int n, Exec exec, Fn&& fn) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
#else
  (void)exec;
#endif
  for (int i = 0; i < n; ++i) fn(i);
}

enum class Product { conc, shuffle, gl, graft };

// Applies the basis-level product to one pair of basis forests.
ForestMap product_forests(Context& ctx, Product p, ForestId a, ForestId b);

// Matrix block of a bilinear product on the bigrade (m, n): columns indexed
// by pairs (row-major over forests_of_grade(m) x forests_of_grade(n)), rows
// by forests_of_grade(m + n). Column labels are "u (x) v".
GradedLinearMap::Block product_block(Context& ctx, Product p, int m, int n,
                                     Exec exec);

// All bigrade blocks with m + n == total (m, n >= 0).
GradedLinearMap product_map(Context& ctx, Product p, int total, Exec exec);

// Matrix of a grade-preserving linear map on the forest basis at one grade.
// fn(column basis forest) must return the image as a coefficient map.
GradedLinearMap::Block linear_map_block(
    Context& ctx, int grade, const std::function<ForestMap(ForestId)>& fn,
    Exec exec);

// Smallest index in [0, n) where check fails, or nullopt. The parallel path
// reduces per-thread minima so the reported counterexample is deterministic.
std::optional<int> find_violation(int n, Exec exec,
                                  const std::function<bool(int)>& check);

}  // namespace lbk
