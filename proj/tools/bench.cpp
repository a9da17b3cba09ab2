// Times the OpenMP kernels against their serial reference paths on a fresh
// context each run: product table assembly, Euler idempotent columns, PBW
// ranks, and the post-Lie axiom sweep. Results must be identical; only the
// wall time differs.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "lbk/free_algebra.hpp"
#include "lbk/hopf.hpp"
#include "lbk/kernels.hpp"
#include "lbk/series.hpp"

using namespace lbk;

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <class Fn>
double timed(Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return seconds(t0);
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-34s %10.3fs %10.3fs %9.2fx\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0);
}

void bench_product_tables(int order) {
  // Fresh contexts so each path pays for its own memoization.
  double ts = timed([&] {
    Context ctx({"a"}, order);
    for (int m = 0; m <= order; ++m)
      for (int n = 0; m + n <= order; ++n)
        product_block(ctx, Product::gl, m, n, Exec::serial);
  });
  double tp = timed([&] {
    Context ctx({"a"}, order);
    for (int m = 0; m <= order; ++m)
      for (int n = 0; m + n <= order; ++n)
        product_block(ctx, Product::gl, m, n, Exec::parallel);
  });
  report("gl product tables", ts, tp);

  ts = timed([&] {
    Context ctx({"a"}, order);
    for (int m = 0; m <= order; ++m)
      for (int n = 0; m + n <= order; ++n)
        product_block(ctx, Product::graft, m, n, Exec::serial);
  });
  tp = timed([&] {
    Context ctx({"a"}, order);
    for (int m = 0; m <= order; ++m)
      for (int n = 0; m + n <= order; ++n)
        product_block(ctx, Product::graft, m, n, Exec::parallel);
  });
  report("graft product tables", ts, tp);
}

void bench_euler(int order) {
  double ts = timed([&] {
    Context ctx({"a"}, order);
    for (int g = 1; g <= order; ++g)
      linear_map_block(
          ctx, g, [&](ForestId f) { return euler_forest(ctx, f); },
          Exec::serial);
  });
  double tp = timed([&] {
    Context ctx({"a"}, order);
    for (int g = 1; g <= order; ++g)
      linear_map_block(
          ctx, g, [&](ForestId f) { return euler_forest(ctx, f); },
          Exec::parallel);
  });
  report("euler idempotent columns", ts, tp);
}

void bench_pbw(int order) {
  double ts = timed([&] {
    Context ctx({"a"}, order);
    for (int g = 1; g <= order; ++g) pbw_rank(ctx, g, Exec::serial);
  });
  double tp = timed([&] {
    Context ctx({"a"}, order);
    for (int g = 1; g <= order; ++g) pbw_rank(ctx, g, Exec::parallel);
  });
  report("pbw ranks", ts, tp);
}

void bench_axioms(int order) {
  auto sweep = [order](Exec exec) {
    Context ctx({"a"}, order);
    std::vector<Series> trees;
    for (int g = 1; g + 2 <= order; ++g)
      for (TreeId t : ctx.trees_of_grade(g))
        trees.push_back(Series::of_tree(&ctx, order, t));
    std::vector<std::array<int, 3>> triples;
    for (int i = 0; i < static_cast<int>(trees.size()); ++i)
      for (int j = 0; j < static_cast<int>(trees.size()); ++j)
        for (int k = 0; k < static_cast<int>(trees.size()); ++k)
          if (trees[i].min_grade() + trees[j].min_grade() +
                  trees[k].min_grade() <=
              order)
            triples.push_back({i, j, k});
    auto check = [&](int idx) {
      const Series& x = trees[triples[idx][0]];
      const Series& y = trees[triples[idx][1]];
      const Series& z = trees[triples[idx][2]];
      Series lhs = graft(x, bracket_conc(y, z));
      Series rhs = bracket_conc(graft(x, y), z) + bracket_conc(y, graft(x, z));
      return lhs == rhs;
    };
    if (find_violation(static_cast<int>(triples.size()), exec, check))
      std::abort();
  };
  double ts = timed([&] { sweep(Exec::serial); });
  double tp = timed([&] { sweep(Exec::parallel); });
  report("post-Lie axiom sweep", ts, tp);
}

}  // namespace

int main(int argc, char** argv) {
  int order = argc > 1 ? std::atoi(argv[1]) : 6;
  if (order < 2 || order > 8) {
    std::fprintf(stderr, "usage: lbk_bench [order in 2..8]\n");
    return 2;
  }
  std::printf("order %d, %d OpenMP thread(s)\n", order,
#ifdef _OPENMP
              omp_get_max_threads()
#else
              1
#endif
  );
  std::printf("%-34s %11s %11s %10s\n", "kernel", "serial", "parallel",
              "speedup");
  bench_product_tables(order);
  bench_euler(order);
  bench_pbw(order);
  bench_axioms(order);
  return 0;
}
