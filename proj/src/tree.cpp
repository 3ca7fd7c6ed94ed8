#include "qmc/tree.hpp"

#include <string>

#include "qmc/errors.hpp"

namespace qmc {

namespace {

void require_order(int k) {
  if (k < 2) throw InvalidArgument("tree order k must be >= 2, got " + std::to_string(k));
}

std::size_t checked_pow(int k, int n) {
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > (std::size_t{1} << 62) / static_cast<std::size_t>(k))
      throw VolumeCapExceeded("k^n overflows size_t");
    r *= static_cast<std::size_t>(k);
  }
  return r;
}

}  // namespace

bool is_valid(const TreeCoord& x, int k) {
  for (int i : x.path)
    if (i < 1 || i > k) return false;
  return true;
}

std::vector<TreeCoord> successors(const TreeCoord& x, int k) {
  require_order(k);
  std::vector<TreeCoord> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) {
    TreeCoord y = x;
    y.path.push_back(i);
    out.push_back(std::move(y));
  }
  return out;
}

TreeCoord translate(const TreeCoord& g, const TreeCoord& x) {
  TreeCoord out = g;
  out.path.insert(out.path.end(), x.path.begin(), x.path.end());
  return out;
}

std::size_t level_size(int n, int k) {
  require_order(k);
  if (n < 0) throw InvalidArgument("level must be >= 0");
  return checked_pow(k, n);
}

std::size_t level_offset(int n, int k) {
  // (k^n - 1) / (k - 1)
  return (level_size(n, k) - 1) / static_cast<std::size_t>(k - 1);
}

std::size_t volume_size(int n, int k) { return level_offset(n + 1, k); }

std::size_t dense_index(const TreeCoord& x, int k) {
  if (!is_valid(x, k)) throw InvalidArgument("coordinate has a branch index outside 1..k");
  std::size_t rank = 0;
  for (int i : x.path) rank = rank * static_cast<std::size_t>(k) + static_cast<std::size_t>(i - 1);
  return level_offset(x.level(), k) + rank;
}

TreeCoord coord_of(std::size_t index, int k) {
  require_order(k);
  int n = 0;
  while (level_offset(n + 1, k) <= index) ++n;
  std::size_t rank = index - level_offset(n, k);
  TreeCoord x;
  x.path.assign(static_cast<std::size_t>(n), 1);
  for (int pos = n - 1; pos >= 0; --pos) {
    x.path[static_cast<std::size_t>(pos)] = static_cast<int>(rank % static_cast<std::size_t>(k)) + 1;
    rank /= static_cast<std::size_t>(k);
  }
  return x;
}

LevelSet level_set(int n, int k, std::size_t cap) {
  const std::size_t count = level_size(n, k);
  if (count > cap)
    throw VolumeCapExceeded("level " + std::to_string(n) + " has " + std::to_string(count) +
                            " vertices, cap is " + std::to_string(cap));
  LevelSet w{n, k, {}};
  w.vertices.reserve(count);
  std::vector<int> digits(static_cast<std::size_t>(n), 1);
  for (std::size_t r = 0; r < count; ++r) {
    w.vertices.push_back(TreeCoord{digits});
    // odometer increment, last position fastest
    for (int pos = n - 1; pos >= 0; --pos) {
      auto& d = digits[static_cast<std::size_t>(pos)];
      if (d < k) {
        ++d;
        break;
      }
      d = 1;
    }
  }
  return w;
}

Volume volume(int n, int k, std::size_t cap) {
  const std::size_t count = volume_size(n, k);
  if (count > cap)
    throw VolumeCapExceeded("volume " + std::to_string(n) + " has " + std::to_string(count) +
                            " vertices, cap is " + std::to_string(cap));
  Volume v{n, k, {}};
  v.vertices.reserve(count);
  for (int m = 0; m <= n; ++m) {
    auto w = level_set(m, k, cap);
    for (auto& x : w.vertices) v.vertices.push_back(std::move(x));
  }
  return v;
}

std::vector<int> level_indices(int n, int k) {
  const std::size_t off = level_offset(n, k);
  const std::size_t cnt = level_size(n, k);
  std::vector<int> out(cnt);
  for (std::size_t i = 0; i < cnt; ++i) out[i] = static_cast<int>(off + i);
  return out;
}

std::vector<int> range_indices(int lo, int hi, int k) {
  std::vector<int> out;
  for (int m = lo; m <= hi; ++m) {
    auto w = level_indices(m, k);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

std::size_t child_index(std::size_t v, int i, int k) {
  // children of v occupy k*v + 1 .. k*v + k in the dense layout
  return static_cast<std::size_t>(k) * v + static_cast<std::size_t>(i);
}

}  // namespace qmc
