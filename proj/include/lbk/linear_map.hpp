#pragma once

#include <map>
#include <string>
#include <vector>

#include "lbk/context.hpp"
#include "lbk/rational.hpp"

namespace lbk {

// Sparse rational matrix, column-major. Rows/columns index basis elements of
// graded pieces; what they index is decided by the owner.
struct SparseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::map<int, Rat>> columns;

  explicit SparseMatrix(int r = 0, int c = 0) : rows(r), cols(c), columns(c) {}
  void add(int r, int c, const Rat& v) {
    if (v == 0) return;
    auto [it, inserted] = columns[c].try_emplace(r, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) columns[c].erase(it);
    }
  }
  Rat at(int r, int c) const {
    auto it = columns[c].find(r);
    return it == columns[c].end() ? Rat(0) : it->second;
  }
  SparseMatrix transposed() const;
  bool operator==(const SparseMatrix&) const = default;
};

// Exact rank by fraction-free Gaussian elimination.
int rank(const SparseMatrix& m);

// Solve M x = rhs exactly; returns any particular solution (free variables 0).
// Throws ContractError if the system is inconsistent.
std::vector<Rat> solve(const SparseMatrix& m, const std::vector<Rat>& rhs);

// A linear map between graded spaces whose graded pieces carry canonical
// forest bases, stored as one sparse block per (domain grade, codomain
// grade). Dual coproducts are transposes of product blocks; transpose is an
// involution per block.
class GradedLinearMap {
 public:
  using BlockKey = std::pair<int, int>;  // (domain grade, codomain grade)

  struct Block {
    SparseMatrix matrix;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    bool operator==(const Block&) const = default;
  };

  void set_block(int domain_grade, int codomain_grade, Block block);
  const Block* block(int domain_grade, int codomain_grade) const;
  const std::map<BlockKey, Block>& blocks() const { return blocks_; }

  GradedLinearMap transposed() const;

  // One JSON object per block:
  //   {"domain_grade": n, "codomain_grade": m,
  //    "entries": [[row_forest, col_forest, "p/q"], ...]}
  // entries sorted by (row label, col label). Several blocks => JSON array.
  std::string to_json() const;

  bool operator==(const GradedLinearMap&) const = default;

 private:
  std::map<BlockKey, Block> blocks_;
};

}  // namespace lbk
