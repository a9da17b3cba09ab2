#include "lbk/kernels.hpp"

#include <atomic>

#include "lbk/free_algebra.hpp"

namespace lbk {

ForestMap product_forests(Context& ctx, Product p, ForestId a, ForestId b) {
  switch (p) {
    case Product::conc:
      return ForestMap{{ctx.concat(a, b), Rat(1)}};
    case Product::shuffle:
      return shuffle_forests(ctx, a, b);
    case Product::gl:
      return gl_forests(ctx, a, b);
    case Product::graft:
      return graft_forests(ctx, a, b);
  }
  return {};
}

GradedLinearMap::Block product_block(Context& ctx, Product p, int m, int n,
                                     Exec exec) {
  const auto& left = ctx.forests_of_grade(m);
  const auto& right = ctx.forests_of_grade(n);
  const auto& target = ctx.forests_of_grade(m + n);

  GradedLinearMap::Block blk;
  int cols = static_cast<int>(left.size() * right.size());
  blk.matrix = SparseMatrix(static_cast<int>(target.size()), cols);
  blk.col_labels.resize(cols);
  blk.row_labels.reserve(target.size());
  for (ForestId f : target) blk.row_labels.push_back(ctx.forest_string(f));

  std::vector<std::map<int, Rat>> cols_data(cols);
  for_each_index(cols, exec, [&](int col) {
    int i = col / static_cast<int>(right.size());
    int j = col % static_cast<int>(right.size());
    blk.col_labels[col] =
        ctx.forest_string(left[i]) + " (x) " + ctx.forest_string(right[j]);
    for (const auto& [f, c] : product_forests(ctx, p, left[i], right[j]))
      cols_data[col].emplace(ctx.forest_position(f), c);
  });
  blk.matrix.columns = std::move(cols_data);
  return blk;
}

GradedLinearMap product_map(Context& ctx, Product p, int total, Exec exec) {
  // One block for the whole grade-`total` piece of the tensor square: the
  // domain basis concatenates the bigrade pieces (m, total-m) for m = 0..total,
  // pairs row-major within each bigrade. Column labels identify the split.
  GradedLinearMap out;
  GradedLinearMap::Block merged;
  const auto& target = ctx.forests_of_grade(total);
  merged.row_labels.reserve(target.size());
  for (ForestId f : target) merged.row_labels.push_back(ctx.forest_string(f));
  std::vector<std::map<int, Rat>> cols_data;
  for (int m = 0; m <= total; ++m) {
    GradedLinearMap::Block piece = product_block(ctx, p, m, total - m, exec);
    for (auto& col : piece.matrix.columns) cols_data.push_back(std::move(col));
    for (auto& lbl : piece.col_labels) merged.col_labels.push_back(std::move(lbl));
  }
  merged.matrix = SparseMatrix(static_cast<int>(target.size()),
                               static_cast<int>(cols_data.size()));
  merged.matrix.columns = std::move(cols_data);
  out.set_block(total, total, std::move(merged));
  return out;
}

GradedLinearMap::Block linear_map_block(
    Context& ctx, int grade, const std::function<ForestMap(ForestId)>& fn,
    Exec exec) {
  const auto& basis = ctx.forests_of_grade(grade);
  int n = static_cast<int>(basis.size());
  GradedLinearMap::Block blk;
  blk.matrix = SparseMatrix(n, n);
  blk.row_labels.reserve(n);
  for (ForestId f : basis) blk.row_labels.push_back(ctx.forest_string(f));
  blk.col_labels = blk.row_labels;

  std::vector<std::map<int, Rat>> cols_data(n);
  for_each_index(n, exec, [&](int col) {
    for (const auto& [f, c] : fn(basis[col]))
      cols_data[col].emplace(ctx.forest_position(f), c);
  });
  blk.matrix.columns = std::move(cols_data);
  return blk;
}

std::optional<int> find_violation(int n, Exec exec,
                                  const std::function<bool(int)>& check) {
  std::atomic<int> best{n};
  for_each_index(n, exec, [&](int i) {
    if (i >= best.load(std::memory_order_relaxed)) return;
    if (!check(i)) {
      int cur = best.load(std::memory_order_relaxed);
      while (i < cur &&
             !best.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
      }
    }
  });
  int found = best.load();
  if (found == n) return std::nullopt;
  return found;
}

}  // namespace lbk
