#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lbk/rational.hpp"

namespace lbk {

// Interned handles. Ids are only meaningful relative to one Context; equality
// of ids is structural equality of the underlying immutable values.
using TreeId = std::int32_t;
using ForestId = std::int32_t;
using NpTreeId = std::int32_t;
using NpForestId = std::int32_t;

// Homogeneous linear combination of forests, used for memoized basis products
// and cached basis elements. Plain map so layers below Series can share it.
using ForestMap = std::map<ForestId, Rat>;

// Concurrency-safe memo table. Values are pure functions of their key, so
// duplicate computation is harmless and inserts are idempotent; references to
// stored values stay valid under concurrent insertion.
template <class Key, class Value, class Hash = std::hash<Key>>
class Memo {
 public:
  const Value* find(const Key& k) const {
    std::shared_lock lock(mutex_);
    auto it = map_.find(k);
    return it == map_.end() ? nullptr : &it->second;
  }
  const Value& store(const Key& k, Value v) {
    std::unique_lock lock(mutex_);
    return map_.try_emplace(k, std::move(v)).first->second;
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<Key, Value, Hash> map_;
};

struct PairKeyHash {
  std::size_t operator()(std::uint64_t k) const noexcept {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

inline std::uint64_t pair_key(std::int32_t a, std::int32_t b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

using PairMemo = Memo<std::uint64_t, ForestMap, PairKeyHash>;

// A Lie algebra basis element at one grade: a Lyndon word over the tree
// alphabet together with the expansion of its standard bracketing.
struct LieElem {
  std::vector<TreeId> word;
  ForestMap expansion;
  int grade = 0;
  int flat_index = 0;  // 1-based across grades, grade-major
};

// One shared context per computation: the color alphabet, the truncation
// capacity, interning arenas for planar/non-planar trees and forests, the
// per-grade bases in canonical order, and memo tables for the products.
// All interned values are immutable; the arenas and memos are guarded so the
// context can be shared across threads.
class Context {
 public:
  Context(std::vector<std::string> colors, int max_order);

  int max_order() const { return max_order_; }
  int num_colors() const { return static_cast<int>(colors_.size()); }
  const std::string& color_name(int c) const { return colors_[c]; }
  int color_index(std::string_view name) const;  // -1 if unknown

  // ---- planar trees and forests -------------------------------------------
  TreeId tree(int color, std::span<const TreeId> children);
  TreeId leaf(int color) { return tree(color, {}); }
  ForestId forest(std::span<const TreeId> word);
  ForestId forest_of_tree(TreeId t) { return forest({&t, 1}); }
  ForestId empty_forest() const { return 0; }

  int tree_color(TreeId t) const;
  int tree_grade(TreeId t) const;
  std::vector<TreeId> tree_children(TreeId t) const;
  const std::string& tree_string(TreeId t) const;

  int forest_grade(ForestId f) const;
  std::vector<TreeId> forest_word(ForestId f) const;
  std::size_t forest_length(ForestId f) const;
  const std::string& forest_string(ForestId f) const;  // "1" for the unit

  ForestId concat(ForestId a, ForestId b);

  // Canonical order: trees by canonical string; forests by (grade of first
  // tree, canonical string). Throws CapacityError above max_order().
  const std::vector<TreeId>& trees_of_grade(int n) const;
  const std::vector<ForestId>& forests_of_grade(int n) const;
  // Position of f within forests_of_grade(grade(f)).
  int forest_position(ForestId f) const;

  // ---- non-planar (abelianized) side --------------------------------------
  NpTreeId np_tree(int color, std::vector<NpTreeId> children);  // sorts children
  NpForestId np_forest(std::vector<NpTreeId> multiset);         // sorts word

  int np_tree_color(NpTreeId t) const;
  int np_tree_grade(NpTreeId t) const;
  std::vector<NpTreeId> np_tree_children(NpTreeId t) const;
  int np_forest_grade(NpForestId f) const;
  std::vector<NpTreeId> np_forest_word(NpForestId f) const;
  const std::string& np_tree_string(NpTreeId t) const;
  const std::string& np_forest_string(NpForestId f) const;
  NpForestId np_empty_forest() const { return 0; }

  NpTreeId abelianize(TreeId t);
  NpForestId abelianize_forest(ForestId f);  // word -> multiset

  const std::vector<NpTreeId>& np_trees_of_grade(int n) const;
  const std::vector<NpForestId>& np_forests_of_grade(int n) const;

  // ---- memo tables ----------------------------------------------------------
  PairMemo& graft_memo() const { return graft_memo_; }
  PairMemo& gl_memo() const { return gl_memo_; }
  PairMemo& np_graft_memo() const { return np_graft_memo_; }
  PairMemo& np_gl_memo() const { return np_gl_memo_; }
  Memo<ForestId, ForestMap>& euler_memo() const { return euler_memo_; }

  // Lie basis cache, filled lazily by hopf.cpp; grade-major flat indexing.
  const std::vector<LieElem>& lie_level(int grade) const;
  int lie_dim(int grade) const { return static_cast<int>(lie_level(grade).size()); }
  int lie_flat_count(int up_to_grade) const;
  const LieElem& lie_elem_by_flat(int flat_index) const;  // 1-based

 private:
  struct TreeNode {
    std::int32_t color;
    std::int32_t grade;
    std::vector<TreeId> children;
    std::string str;
  };
  struct ForestNode {
    std::int32_t grade;
    std::vector<TreeId> word;
    std::string str;
  };
  struct NpTreeNode {
    std::int32_t color;
    std::int32_t grade;
    std::vector<NpTreeId> children;  // canonically sorted
    std::string str;
  };
  struct NpForestNode {
    std::int32_t grade;
    std::vector<NpTreeId> word;  // canonically sorted multiset
    std::string str;
  };

  void check_capacity(int n) const;
  void build_lie_levels(int up_to) const;

  std::vector<std::string> colors_;
  int max_order_;

  mutable std::shared_mutex tree_mx_;
  std::deque<TreeNode> trees_;
  std::map<std::pair<std::int32_t, std::vector<TreeId>>, TreeId> tree_index_;

  mutable std::shared_mutex forest_mx_;
  std::deque<ForestNode> forests_;
  std::map<std::vector<TreeId>, ForestId> forest_index_;

  mutable std::shared_mutex np_tree_mx_;
  std::deque<NpTreeNode> np_trees_;
  std::map<std::pair<std::int32_t, std::vector<NpTreeId>>, NpTreeId> np_tree_index_;

  mutable std::shared_mutex np_forest_mx_;
  std::deque<NpForestNode> np_forests_;
  std::map<std::vector<NpTreeId>, NpForestId> np_forest_index_;

  mutable std::mutex basis_mx_;
  mutable std::vector<std::vector<TreeId>> tree_basis_;      // [grade]
  mutable std::vector<std::vector<ForestId>> forest_basis_;  // [grade]
  mutable std::unordered_map<ForestId, int> forest_pos_;
  mutable std::vector<std::vector<NpTreeId>> np_tree_basis_;
  mutable std::vector<std::vector<NpForestId>> np_forest_basis_;

  mutable PairMemo graft_memo_;
  mutable PairMemo gl_memo_;
  mutable PairMemo np_graft_memo_;
  mutable PairMemo np_gl_memo_;
  mutable Memo<ForestId, ForestMap> euler_memo_;

  mutable std::mutex lie_mx_;
  mutable std::vector<std::vector<LieElem>> lie_levels_;  // [grade], [0] unused
};

}  // namespace lbk
