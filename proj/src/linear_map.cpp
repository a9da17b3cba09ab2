#include "lbk/linear_map.hpp"

#include <algorithm>
#include <tuple>

#include "lbk/errors.hpp"
#include "json.hpp"

namespace lbk {

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix out(cols, rows);
  for (int c = 0; c < cols; ++c)
    for (const auto& [r, v] : columns[c]) out.add(c, r, v);
  return out;
}

namespace {

std::vector<std::vector<Rat>> dense(const SparseMatrix& m) {
  std::vector<std::vector<Rat>> a(m.rows, std::vector<Rat>(m.cols, Rat(0)));
  for (int c = 0; c < m.cols; ++c)
    for (const auto& [r, v] : m.columns[c]) a[r][c] = v;
  return a;
}

}  // namespace

int rank(const SparseMatrix& m) {
  auto a = dense(m);
  int rows = m.rows, cols = m.cols;
  int rk = 0;
  for (int col = 0; col < cols && rk < rows; ++col) {
    int pivot = -1;
    for (int r = rk; r < rows; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[rk]);
    Rat inv = 1 / a[rk][col];
    for (int r = rk + 1; r < rows; ++r) {
      if (a[r][col] == 0) continue;
      Rat factor = a[r][col] * inv;
      for (int c2 = col; c2 < cols; ++c2) a[r][c2] -= factor * a[rk][c2];
    }
    ++rk;
  }
  return rk;
}

std::vector<Rat> solve(const SparseMatrix& m, const std::vector<Rat>& rhs) {
  if (static_cast<int>(rhs.size()) != m.rows)
    throw ContractError("solve: rhs dimension mismatch");
  auto a = dense(m);
  std::vector<Rat> b = rhs;
  int rows = m.rows, cols = m.cols;
  std::vector<int> pivot_col;
  int rk = 0;
  for (int col = 0; col < cols && rk < rows; ++col) {
    int pivot = -1;
    for (int r = rk; r < rows; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[pivot], a[rk]);
    std::swap(b[pivot], b[rk]);
    Rat inv = 1 / a[rk][col];
    for (int c2 = col; c2 < cols; ++c2) a[rk][c2] *= inv;
    b[rk] *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rk || a[r][col] == 0) continue;
      Rat factor = a[r][col];
      for (int c2 = col; c2 < cols; ++c2) a[r][c2] -= factor * a[rk][c2];
      b[r] -= factor * b[rk];
    }
    pivot_col.push_back(col);
    ++rk;
  }
  for (int r = rk; r < rows; ++r)
    if (b[r] != 0) throw ContractError("solve: inconsistent system");
  std::vector<Rat> x(cols, Rat(0));
  for (int r = 0; r < rk; ++r) x[pivot_col[r]] = b[r];
  return x;
}

void GradedLinearMap::set_block(int domain_grade, int codomain_grade, Block block) {
  blocks_[{domain_grade, codomain_grade}] = std::move(block);
}

const GradedLinearMap::Block* GradedLinearMap::block(int domain_grade,
                                                     int codomain_grade) const {
  auto it = blocks_.find({domain_grade, codomain_grade});
  return it == blocks_.end() ? nullptr : &it->second;
}

GradedLinearMap GradedLinearMap::transposed() const {
  GradedLinearMap out;
  for (const auto& [key, blk] : blocks_) {
    Block t;
    t.matrix = blk.matrix.transposed();
    t.row_labels = blk.col_labels;
    t.col_labels = blk.row_labels;
    out.set_block(key.second, key.first, std::move(t));
  }
  return out;
}

std::string GradedLinearMap::to_json() const {
  nlohmann::json all = nlohmann::json::array();
  for (const auto& [key, blk] : blocks_) {
    nlohmann::json j;
    j["domain_grade"] = key.first;
    j["codomain_grade"] = key.second;
    std::vector<std::tuple<std::string, std::string, std::string>> entries;
    for (int c = 0; c < blk.matrix.cols; ++c)
      for (const auto& [r, v] : blk.matrix.columns[c])
        entries.emplace_back(blk.row_labels[r], blk.col_labels[c], rat_str(v));
    std::sort(entries.begin(), entries.end());
    nlohmann::json je = nlohmann::json::array();
    for (const auto& [r, c, v] : entries) je.push_back({r, c, v});
    j["entries"] = std::move(je);
    all.push_back(std::move(j));
  }
  if (all.size() == 1) return all[0].dump(2);
  return all.dump(2);
}

}  // namespace lbk
