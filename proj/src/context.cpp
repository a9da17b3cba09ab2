#include "lbk/context.hpp"

#include <algorithm>
#include <functional>

#include "lbk/errors.hpp"

namespace lbk {

Context::Context(std::vector<std::string> colors, int max_order)
    : colors_(std::move(colors)), max_order_(max_order) {
  if (colors_.empty()) throw ContractError("alphabet must be nonempty");
  if (max_order_ < 0) throw ContractError("max order must be nonnegative");
  // Id 0 is the empty forest / empty multiset on both sides.
  forests_.push_back(ForestNode{0, {}, "1"});
  forest_index_.emplace(std::vector<TreeId>{}, 0);
  np_forests_.push_back(NpForestNode{0, {}, "1"});
  np_forest_index_.emplace(std::vector<NpTreeId>{}, 0);
  // Fixed sizes so references to per-grade bases stay valid across lazy
  // builds of other grades.
  tree_basis_.resize(max_order_ + 1);
  forest_basis_.resize(max_order_ + 1);
  np_tree_basis_.resize(max_order_ + 1);
  np_forest_basis_.resize(max_order_ + 1);
  lie_levels_.resize(max_order_ + 1);
}

int Context::color_index(std::string_view name) const {
  for (int i = 0; i < num_colors(); ++i)
    if (colors_[i] == name) return i;
  return -1;
}

void Context::check_capacity(int n) const {
  if (n > max_order_)
    throw CapacityError("grade " + std::to_string(n) +
                        " exceeds the configured maximum order " +
                        std::to_string(max_order_));
  if (n < 0) throw ContractError("negative grade");
}

// ---- planar interning -------------------------------------------------------

TreeId Context::tree(int color, std::span<const TreeId> children) {
  std::vector<TreeId> kids(children.begin(), children.end());
  auto key = std::make_pair(static_cast<std::int32_t>(color), kids);
  {
    std::shared_lock lock(tree_mx_);
    auto it = tree_index_.find(key);
    if (it != tree_index_.end()) return it->second;
  }
  // Build node data outside the exclusive section.
  int grade = 1;
  std::string str;
  {
    std::shared_lock lock(tree_mx_);
    str = colors_[color];
    str += '[';
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const TreeNode& c = trees_[kids[i]];
      grade += c.grade;
      if (i) str += ' ';
      str += c.str;
    }
    str += ']';
  }
  std::unique_lock lock(tree_mx_);
  auto [it, inserted] = tree_index_.try_emplace(key, static_cast<TreeId>(trees_.size()));
  if (inserted)
    trees_.push_back(TreeNode{static_cast<std::int32_t>(color),
                              static_cast<std::int32_t>(grade), std::move(kids),
                              std::move(str)});
  return it->second;
}

ForestId Context::forest(std::span<const TreeId> word) {
  std::vector<TreeId> w(word.begin(), word.end());
  {
    std::shared_lock lock(forest_mx_);
    auto it = forest_index_.find(w);
    if (it != forest_index_.end()) return it->second;
  }
  int grade = 0;
  std::string str;
  {
    std::shared_lock lock(tree_mx_);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const TreeNode& t = trees_[w[i]];
      grade += t.grade;
      if (i) str += ' ';
      str += t.str;
    }
  }
  if (w.empty()) str = "1";
  std::unique_lock lock(forest_mx_);
  auto [it, inserted] =
      forest_index_.try_emplace(std::move(w), static_cast<ForestId>(forests_.size()));
  if (inserted)
    forests_.push_back(ForestNode{static_cast<std::int32_t>(grade), it->first,
                                  std::move(str)});
  return it->second;
}

int Context::tree_color(TreeId t) const {
  std::shared_lock lock(tree_mx_);
  return trees_[t].color;
}
int Context::tree_grade(TreeId t) const {
  std::shared_lock lock(tree_mx_);
  return trees_[t].grade;
}
std::vector<TreeId> Context::tree_children(TreeId t) const {
  std::shared_lock lock(tree_mx_);
  return trees_[t].children;
}
const std::string& Context::tree_string(TreeId t) const {
  std::shared_lock lock(tree_mx_);
  return trees_[t].str;
}
int Context::forest_grade(ForestId f) const {
  std::shared_lock lock(forest_mx_);
  return forests_[f].grade;
}
std::vector<TreeId> Context::forest_word(ForestId f) const {
  std::shared_lock lock(forest_mx_);
  return forests_[f].word;
}
std::size_t Context::forest_length(ForestId f) const {
  std::shared_lock lock(forest_mx_);
  return forests_[f].word.size();
}
const std::string& Context::forest_string(ForestId f) const {
  std::shared_lock lock(forest_mx_);
  return forests_[f].str;
}

ForestId Context::concat(ForestId a, ForestId b) {
  std::vector<TreeId> w = forest_word(a);
  std::vector<TreeId> wb = forest_word(b);
  w.insert(w.end(), wb.begin(), wb.end());
  return forest(w);
}

// ---- graded bases -----------------------------------------------------------

const std::vector<TreeId>& Context::trees_of_grade(int n) const {
  check_capacity(n);
  std::lock_guard lock(basis_mx_);
  auto* self = const_cast<Context*>(this);
  // Trees of grade n are roots over forests of grade n-1; forests of grade n
  // are a leading tree of grade k followed by a forest of grade n-k. Build
  // both levels bottom-up so the mutual recursion stays iterative.
  for (int g = 0; g <= n; ++g) {
    if (g == 0) {
      if (forest_basis_[0].empty()) forest_basis_[0] = {self->empty_forest()};
      continue;
    }
    if (!tree_basis_[g].empty()) continue;
    std::vector<TreeId> trees;
    for (int c = 0; c < num_colors(); ++c)
      for (ForestId w : forest_basis_[g - 1]) {
        std::vector<TreeId> kids = forest_word(w);
        trees.push_back(self->tree(c, kids));
      }
    std::sort(trees.begin(), trees.end(), [&](TreeId a, TreeId b) {
      return tree_string(a) < tree_string(b);
    });
    tree_basis_[g] = std::move(trees);

    std::vector<ForestId> fs;
    for (int k = 1; k <= g; ++k)
      for (TreeId t : tree_basis_[k])
        for (ForestId rest : forest_basis_[g - k]) {
          std::vector<TreeId> w = forest_word(rest);
          w.insert(w.begin(), t);
          fs.push_back(self->forest(w));
        }
    std::sort(fs.begin(), fs.end(), [&](ForestId a, ForestId b) {
      int ga = tree_grade(forest_word(a)[0]);
      int gb = tree_grade(forest_word(b)[0]);
      if (ga != gb) return ga < gb;
      return forest_string(a) < forest_string(b);
    });
    forest_basis_[g] = std::move(fs);
    for (int i = 0; i < static_cast<int>(forest_basis_[g].size()); ++i)
      forest_pos_[forest_basis_[g][i]] = i;
  }
  return tree_basis_[n];
}

const std::vector<ForestId>& Context::forests_of_grade(int n) const {
  check_capacity(n);
  if (n > 0) trees_of_grade(n);
  std::lock_guard lock(basis_mx_);
  if (n == 0 && forest_basis_[0].empty()) forest_basis_[0] = {empty_forest()};
  if (n == 0) forest_pos_[empty_forest()] = 0;
  return forest_basis_[n];
}

int Context::forest_position(ForestId f) const {
  forests_of_grade(forest_grade(f));
  std::lock_guard lock(basis_mx_);
  auto it = forest_pos_.find(f);
  if (it == forest_pos_.end()) throw ContractError("forest not in basis");
  return it->second;
}

// ---- non-planar side ----------------------------------------------------------

NpTreeId Context::np_tree(int color, std::vector<NpTreeId> children) {
  {
    std::shared_lock lock(np_tree_mx_);
    std::sort(children.begin(), children.end(), [&](NpTreeId a, NpTreeId b) {
      const NpTreeNode& na = np_trees_[a];
      const NpTreeNode& nb = np_trees_[b];
      if (na.grade != nb.grade) return na.grade < nb.grade;
      return na.str < nb.str;
    });
  }
  auto key = std::make_pair(static_cast<std::int32_t>(color), children);
  {
    std::shared_lock lock(np_tree_mx_);
    auto it = np_tree_index_.find(key);
    if (it != np_tree_index_.end()) return it->second;
  }
  int grade = 1;
  std::string str;
  {
    std::shared_lock lock(np_tree_mx_);
    str = colors_[color];
    str += '[';
    for (std::size_t i = 0; i < children.size(); ++i) {
      const NpTreeNode& c = np_trees_[children[i]];
      grade += c.grade;
      if (i) str += ' ';
      str += c.str;
    }
    str += ']';
  }
  std::unique_lock lock(np_tree_mx_);
  auto [it, inserted] =
      np_tree_index_.try_emplace(key, static_cast<NpTreeId>(np_trees_.size()));
  if (inserted)
    np_trees_.push_back(NpTreeNode{static_cast<std::int32_t>(color),
                                   static_cast<std::int32_t>(grade),
                                   std::move(children), std::move(str)});
  return it->second;
}

NpForestId Context::np_forest(std::vector<NpTreeId> multiset) {
  {
    std::shared_lock lock(np_tree_mx_);
    std::sort(multiset.begin(), multiset.end(), [&](NpTreeId a, NpTreeId b) {
      const NpTreeNode& na = np_trees_[a];
      const NpTreeNode& nb = np_trees_[b];
      if (na.grade != nb.grade) return na.grade < nb.grade;
      return na.str < nb.str;
    });
  }
  {
    std::shared_lock lock(np_forest_mx_);
    auto it = np_forest_index_.find(multiset);
    if (it != np_forest_index_.end()) return it->second;
  }
  int grade = 0;
  std::string str;
  {
    std::shared_lock lock(np_tree_mx_);
    for (std::size_t i = 0; i < multiset.size(); ++i) {
      const NpTreeNode& t = np_trees_[multiset[i]];
      grade += t.grade;
      if (i) str += ' ';
      str += t.str;
    }
  }
  if (multiset.empty()) str = "1";
  std::unique_lock lock(np_forest_mx_);
  auto [it, inserted] = np_forest_index_.try_emplace(
      std::move(multiset), static_cast<NpForestId>(np_forests_.size()));
  if (inserted)
    np_forests_.push_back(NpForestNode{static_cast<std::int32_t>(grade),
                                       it->first, std::move(str)});
  return it->second;
}

int Context::np_tree_color(NpTreeId t) const {
  std::shared_lock lock(np_tree_mx_);
  return np_trees_[t].color;
}
int Context::np_tree_grade(NpTreeId t) const {
  std::shared_lock lock(np_tree_mx_);
  return np_trees_[t].grade;
}
std::vector<NpTreeId> Context::np_tree_children(NpTreeId t) const {
  std::shared_lock lock(np_tree_mx_);
  return np_trees_[t].children;
}
int Context::np_forest_grade(NpForestId f) const {
  std::shared_lock lock(np_forest_mx_);
  return np_forests_[f].grade;
}
std::vector<NpTreeId> Context::np_forest_word(NpForestId f) const {
  std::shared_lock lock(np_forest_mx_);
  return np_forests_[f].word;
}
const std::string& Context::np_tree_string(NpTreeId t) const {
  std::shared_lock lock(np_tree_mx_);
  return np_trees_[t].str;
}
const std::string& Context::np_forest_string(NpForestId f) const {
  std::shared_lock lock(np_forest_mx_);
  return np_forests_[f].str;
}

NpTreeId Context::abelianize(TreeId t) {
  std::vector<NpTreeId> kids;
  for (TreeId c : tree_children(t)) kids.push_back(abelianize(c));
  return np_tree(tree_color(t), std::move(kids));
}

NpForestId Context::abelianize_forest(ForestId f) {
  std::vector<NpTreeId> word;
  for (TreeId t : forest_word(f)) word.push_back(abelianize(t));
  return np_forest(std::move(word));
}

const std::vector<NpTreeId>& Context::np_trees_of_grade(int n) const {
  check_capacity(n);
  {
    std::lock_guard lock(basis_mx_);
    if (n == 0 || !np_tree_basis_[n].empty()) return np_tree_basis_[n];
  }
  // Abelianize the planar enumeration outside the basis lock.
  std::vector<TreeId> planar = trees_of_grade(n);
  auto* self = const_cast<Context*>(this);
  std::vector<NpTreeId> imgs;
  for (TreeId t : planar) imgs.push_back(self->abelianize(t));
  std::sort(imgs.begin(), imgs.end(), [&](NpTreeId a, NpTreeId b) {
    return np_tree_string(a) < np_tree_string(b);
  });
  imgs.erase(std::unique(imgs.begin(), imgs.end()), imgs.end());
  std::lock_guard lock(basis_mx_);
  if (np_tree_basis_[n].empty()) np_tree_basis_[n] = std::move(imgs);
  return np_tree_basis_[n];
}

const std::vector<NpForestId>& Context::np_forests_of_grade(int n) const {
  check_capacity(n);
  for (int g = 1; g <= n; ++g) np_trees_of_grade(g);
  std::lock_guard lock(basis_mx_);
  for (int g = 0; g <= n; ++g) {
    if (!np_forest_basis_[g].empty()) continue;
    auto* self = const_cast<Context*>(this);
    std::vector<NpForestId> fs;
    if (g == 0) {
      fs = {np_empty_forest()};
    } else {
      // Multisets: leading tree is the canonically smallest, so recurse on
      // (smallest tree grade/index, remainder with no smaller tree).
      std::vector<std::pair<int, NpTreeId>> letters;  // (basis rank, tree)
      int rank = 0;
      for (int k = 1; k <= g; ++k)
        for (NpTreeId t : np_tree_basis_[k]) letters.emplace_back(rank++, t);
      std::vector<NpTreeId> cur;
      std::function<void(int, int)> rec = [&](int min_rank, int remaining) {
        if (remaining == 0) {
          fs.push_back(self->np_forest(cur));
          return;
        }
        for (int i = min_rank; i < static_cast<int>(letters.size()); ++i) {
          int tg = np_tree_grade(letters[i].second);
          if (tg > remaining) continue;
          cur.push_back(letters[i].second);
          rec(i, remaining - tg);
          cur.pop_back();
        }
      };
      rec(0, g);
      std::sort(fs.begin(), fs.end(), [&](NpForestId a, NpForestId b) {
        return np_forest_string(a) < np_forest_string(b);
      });
      fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    }
    np_forest_basis_[g] = std::move(fs);
  }
  return np_forest_basis_[n];
}

// ---- lie cache accessors (levels built in hopf.cpp) ---------------------------

int Context::lie_flat_count(int up_to_grade) const {
  int n = 0;
  for (int g = 1; g <= up_to_grade; ++g) n += lie_dim(g);
  return n;
}

const LieElem& Context::lie_elem_by_flat(int flat_index) const {
  int remaining = flat_index;
  for (int g = 1; g <= max_order_; ++g) {
    const auto& level = lie_level(g);
    if (remaining <= static_cast<int>(level.size())) return level[remaining - 1];
    remaining -= static_cast<int>(level.size());
  }
  throw ContractError("lie basis index out of range");
}

}  // namespace lbk
