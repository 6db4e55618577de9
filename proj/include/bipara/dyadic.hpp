#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>

#include "bipara/error.hpp"

namespace bipara {

/// Upper bound on the number of dyadic generations per axis.
inline constexpr int kMaxResolution = 16;

/// [k 2^-j, (k+1) 2^-j) inside [0,1).
struct DyadicInterval {
  int level = 0;
  std::int64_t index = 0;

  DyadicInterval() = default;
  DyadicInterval(int level_, std::int64_t index_) : level(level_), index(index_) {
    if (level < 0 || level > 62 || index < 0 || index >= (std::int64_t{1} << level)) {
      throw Error("dyadic interval out of range", "index");
    }
  }

  double measure() const { return std::ldexp(1.0, -level); }
  double left_endpoint() const { return std::ldexp(static_cast<double>(index), -level); }

  DyadicInterval parent() const { return {level - 1, index >> 1}; }
  DyadicInterval left_child() const { return {level + 1, 2 * index}; }
  DyadicInterval right_child() const { return {level + 1, 2 * index + 1}; }

  /// True when `other` is a subset of this interval.
  bool contains(const DyadicInterval& other) const {
    return other.level >= level && (other.index >> (other.level - level)) == index;
  }

  /// Finest cells [first, last) covered at resolution `n`; requires level <= n.
  std::int64_t first_cell(int n) const { return index << (n - level); }
  std::int64_t last_cell(int n) const { return (index + 1) << (n - level); }

  auto operator<=>(const DyadicInterval&) const = default;
};

/// Position of (level, index) in level-major storage: 2^level - 1 + index.
inline std::size_t node_index(int level, std::int64_t index) {
  return static_cast<std::size_t>((std::int64_t{1} << level) - 1 + index);
}
inline std::size_t node_index(const DyadicInterval& i) { return node_index(i.level, i.index); }

inline DyadicInterval node_at(std::size_t node) {
  int level = 0;
  while ((std::size_t{2} << level) - 1 <= node) ++level;
  return {level, static_cast<std::int64_t>(node - ((std::size_t{1} << level) - 1))};
}

/// Number of intervals with level < n.
inline std::size_t node_count(int n) { return (std::size_t{1} << n) - 1; }

struct DyadicRectangle {
  DyadicInterval ix;
  DyadicInterval iy;

  double measure() const { return std::ldexp(1.0, -(ix.level + iy.level)); }
  bool contains(const DyadicRectangle& other) const {
    return ix.contains(other.ix) && iy.contains(other.iy);
  }

  auto operator<=>(const DyadicRectangle&) const = default;
};

struct Grid1D {
  int n = 1;

  Grid1D() = default;
  explicit Grid1D(int n_) : n(n_) {
    if (n < 1 || n > kMaxResolution) throw Error("resolution must lie in [1, 16]", "resolution");
  }

  std::size_t cells() const { return std::size_t{1} << n; }
  double cell_measure() const { return std::ldexp(1.0, -n); }

  bool operator==(const Grid1D&) const = default;
};

struct Grid2D {
  int n1 = 1;
  int n2 = 1;

  Grid2D() = default;
  Grid2D(int n1_, int n2_) : n1(n1_), n2(n2_) {
    if (n1 < 1 || n1 > kMaxResolution || n2 < 1 || n2 > kMaxResolution) {
      throw Error("resolution must lie in [1, 16] per axis", "resolution");
    }
  }

  std::size_t cells_x() const { return std::size_t{1} << n1; }
  std::size_t cells_y() const { return std::size_t{1} << n2; }
  std::size_t cells() const { return cells_x() * cells_y(); }
  double cell_measure() const { return std::ldexp(1.0, -(n1 + n2)); }
  Grid1D x_axis() const { return Grid1D(n1); }
  Grid1D y_axis() const { return Grid1D(n2); }

  bool contains(const DyadicRectangle& r) const { return r.ix.level <= n1 && r.iy.level <= n2; }

  bool operator==(const Grid2D&) const = default;
};

}  // namespace bipara
