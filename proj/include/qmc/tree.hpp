#ifndef QMC_TREE_HPP
#define QMC_TREE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qmc {

/// Largest number of vertices a single level or volume may materialize.
inline constexpr std::size_t kDefaultVertexCap = std::size_t{1} << 22;

/// A vertex of the semi-infinite order-k tree, addressed by its branch path.
/// The empty path is the root.
struct TreeCoord {
  std::vector<int> path;

  int level() const { return static_cast<int>(path.size()); }
  bool is_root() const { return path.empty(); }

  auto operator<=>(const TreeCoord&) const = default;
};

inline TreeCoord root() { return {}; }

/// Checks every branch index is in 1..k.
bool is_valid(const TreeCoord& x, int k);

/// Direct successors (x,1),...,(x,k) in forward order.
std::vector<TreeCoord> successors(const TreeCoord& x, int k);

/// Left translation g o x (path concatenation).
TreeCoord translate(const TreeCoord& g, const TreeCoord& x);

std::size_t level_size(int n, int k);
/// |Lambda_n| = 1 + k + ... + k^n.
std::size_t volume_size(int n, int k);
/// Dense index of the first vertex of level n.
std::size_t level_offset(int n, int k);

/// Dense per-volume index: root is 0, then level by level in forward order.
std::size_t dense_index(const TreeCoord& x, int k);
TreeCoord coord_of(std::size_t index, int k);

struct LevelSet {
  int n = 0;
  int k = 2;
  std::vector<TreeCoord> vertices;
};

/// Level W_n in lexicographic (forward) order: (1,..,1) first, (k,..,k) last.
LevelSet level_set(int n, int k, std::size_t cap = kDefaultVertexCap);

/// Ball Lambda_n = W_0 u ... u W_n; positions coincide with dense indices.
struct Volume {
  int n = 0;
  int k = 2;
  std::vector<TreeCoord> vertices;

  std::size_t size() const { return vertices.size(); }
};

Volume volume(int n, int k, std::size_t cap = kDefaultVertexCap);

/// Dense indices of W_n, in forward order.
std::vector<int> level_indices(int n, int k);
/// Dense indices of Lambda_{[lo,hi]}.
std::vector<int> range_indices(int lo, int hi, int k);

/// Dense index of the i-th child (1-based) of the vertex with dense index v.
std::size_t child_index(std::size_t v, int i, int k);

}  // namespace qmc

#endif  // QMC_TREE_HPP
