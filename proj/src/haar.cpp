#include "bipara/haar.hpp"

#include <cmath>

namespace bipara {

namespace kernel {

std::vector<double> pyramid_averages(std::span<const double> cells, int n) {
  const std::size_t total = (std::size_t{2} << n) - 1;
  std::vector<double> avg(total);
  const std::size_t finest = node_index(n, 0);
  std::copy(cells.begin(), cells.end(), avg.begin() + static_cast<std::ptrdiff_t>(finest));
  for (int level = n - 1; level >= 0; --level) {
    const std::size_t base = node_index(level, 0);
    const std::size_t child = node_index(level + 1, 0);
    for (std::size_t k = 0; k < (std::size_t{1} << level); ++k) {
      avg[base + k] = 0.5 * (avg[child + 2 * k] + avg[child + 2 * k + 1]);
    }
  }
  return avg;
}

std::vector<double> node_averages(std::span<const double> cells, int n) {
  std::vector<double> avg = pyramid_averages(cells, n);
  avg.resize(node_count(n));
  return avg;
}

std::vector<double> node_details(std::span<const double> cells, int n) {
  const std::vector<double> avg = pyramid_averages(cells, n);
  std::vector<double> det(node_count(n));
  for (int level = 0; level < n; ++level) {
    const std::size_t base = node_index(level, 0);
    const std::size_t child = node_index(level + 1, 0);
    // <f, h_I> = |I|^{1/2} (<f>_left - <f>_right) / 2
    const double scale = 0.5 * std::sqrt(std::ldexp(1.0, -level));
    for (std::size_t k = 0; k < (std::size_t{1} << level); ++k) {
      det[base + k] = scale * (avg[child + 2 * k] - avg[child + 2 * k + 1]);
    }
  }
  return det;
}

std::vector<double> synthesize_details(std::span<const double> coeffs, int n) {
  std::vector<double> cur{0.0};
  for (int level = 0; level < n; ++level) {
    const std::size_t base = node_index(level, 0);
    const double amp = 1.0 / std::sqrt(std::ldexp(1.0, -level));
    std::vector<double> next(cur.size() * 2);
    for (std::size_t k = 0; k < cur.size(); ++k) {
      const double d = coeffs[base + k] * amp;
      next[2 * k] = cur[k] + d;
      next[2 * k + 1] = cur[k] - d;
    }
    cur.swap(next);
  }
  return cur;
}

std::vector<double> synthesize_averages(std::span<const double> coeffs, int n) {
  std::vector<double> cur{0.0};
  for (int level = 0; level < n; ++level) {
    const std::size_t base = node_index(level, 0);
    const double inv_measure = std::ldexp(1.0, level);
    std::vector<double> next(cur.size() * 2);
    for (std::size_t k = 0; k < cur.size(); ++k) {
      const double v = cur[k] + coeffs[base + k] * inv_measure;
      next[2 * k] = v;
      next[2 * k + 1] = v;
    }
    cur.swap(next);
  }
  return cur;
}

std::vector<double> haar_analyze(std::span<const double> cells, int n) {
  std::vector<double> packed(std::size_t{1} << n);
  const std::vector<double> avg = pyramid_averages(cells, n);
  packed[0] = avg[0];
  for (int level = 0; level < n; ++level) {
    const std::size_t base = node_index(level, 0);
    const std::size_t child = node_index(level + 1, 0);
    const double scale = 0.5 * std::sqrt(std::ldexp(1.0, -level));
    for (std::size_t k = 0; k < (std::size_t{1} << level); ++k) {
      packed[1 + base + k] = scale * (avg[child + 2 * k] - avg[child + 2 * k + 1]);
    }
  }
  return packed;
}

std::vector<double> haar_synthesize(std::span<const double> packed, int n) {
  std::vector<double> cells = synthesize_details(packed.subspan(1), n);
  for (double& v : cells) v += packed[0];
  return cells;
}

std::vector<double> ancestor_sums(std::span<const double> coeffs, int n) {
  std::vector<double> cur{0.0};
  for (int level = 0; level < n; ++level) {
    const std::size_t base = node_index(level, 0);
    std::vector<double> next(cur.size() * 2);
    for (std::size_t k = 0; k < cur.size(); ++k) {
      const double v = cur[k] + coeffs[base + k];
      next[2 * k] = v;
      next[2 * k + 1] = v;
    }
    cur.swap(next);
  }
  return cur;
}

std::vector<double> ancestor_max(std::span<const double> pyramid, int n) {
  std::vector<double> cur{std::abs(pyramid[0])};
  for (int level = 1; level <= n; ++level) {
    const std::size_t base = node_index(level, 0);
    std::vector<double> next(cur.size() * 2);
    for (std::size_t k = 0; k < next.size(); ++k) next[k] = std::max(cur[k / 2], std::abs(pyramid[base + k]));
    cur.swap(next);
  }
  return cur;
}

std::vector<double> subtree_sums(std::span<const double> coeffs, int n) {
  std::vector<double> out(coeffs.begin(), coeffs.end());
  for (int level = n - 2; level >= 0; --level) {
    const std::size_t base = node_index(level, 0);
    const std::size_t child = node_index(level + 1, 0);
    for (std::size_t k = 0; k < (std::size_t{1} << level); ++k) {
      out[base + k] += out[child + 2 * k] + out[child + 2 * k + 1];
    }
  }
  return out;
}

std::vector<double> pyramid_min(std::span<const double> cells, int n) {
  std::vector<double> out((std::size_t{2} << n) - 1);
  std::copy(cells.begin(), cells.end(), out.begin() + static_cast<std::ptrdiff_t>(node_index(n, 0)));
  for (int level = n - 1; level >= 0; --level) {
    const std::size_t base = node_index(level, 0);
    const std::size_t child = node_index(level + 1, 0);
    for (std::size_t k = 0; k < (std::size_t{1} << level); ++k) {
      out[base + k] = std::min(out[child + 2 * k], out[child + 2 * k + 1]);
    }
  }
  return out;
}

}  // namespace kernel

HaarCoeffs1D::HaarCoeffs1D(Grid1D grid_, double mean_, std::vector<double> detail_)
    : grid(grid_), mean(mean_), detail(std::move(detail_)) {
  if (detail.size() != node_count(grid.n)) throw Error("detail block must have 2^N - 1 entries", "entries");
}

HaarCoeffs1D::HaarCoeffs1D(Grid1D grid_) : grid(grid_), detail(node_count(grid_.n), 0.0) {}

HaarCoeffs2D::HaarCoeffs2D(Grid2D grid_)
    : grid(grid_),
      cc(node_count(grid_.n1) * node_count(grid_.n2), 0.0),
      cm(node_count(grid_.n1), 0.0),
      mc(node_count(grid_.n2), 0.0) {}

HaarCoeffs2D::HaarCoeffs2D(Grid2D grid_, std::vector<double> cc_, std::vector<double> cm_,
                           std::vector<double> mc_, double mm_)
    : grid(grid_), cc(std::move(cc_)), cm(std::move(cm_)), mc(std::move(mc_)), mm(mm_) {
  if (cc.size() != node_count(grid.n1) * node_count(grid.n2) || cm.size() != node_count(grid.n1) ||
      mc.size() != node_count(grid.n2)) {
    throw Error("coefficient block sizes do not match the grid", "entries");
  }
}

HaarCoeffs2D HaarCoeffs2D::cancellative_part() const {
  HaarCoeffs2D out(grid);
  out.cc = cc;
  return out;
}

HaarCoeffs1D haar_forward_1d(const Signal1D& f) {
  std::vector<double> packed = kernel::haar_analyze(f.values(), f.grid().n);
  const double mean = packed[0];
  packed.erase(packed.begin());
  return HaarCoeffs1D(f.grid(), mean, std::move(packed));
}

Signal1D haar_inverse_1d(const HaarCoeffs1D& c) {
  std::vector<double> packed(c.grid.cells());
  packed[0] = c.mean;
  std::copy(c.detail.begin(), c.detail.end(), packed.begin() + 1);
  return Signal1D(c.grid, kernel::haar_synthesize(packed, c.grid.n));
}

HaarCoeffs2D haar_forward_2d(const Signal2D& f) {
  const Grid2D& g = f.grid();
  const std::size_t nx = g.cells_x(), ny = g.cells_y();
  // y first (rows are fixed x), then x.
  auto by_y = kernel::map_rows(f.values(), nx, ny,
                               [&](std::span<const double> r) { return kernel::haar_analyze(r, g.n2); });
  auto packed = kernel::map_columns(by_y, nx, ny,
                                    [&](std::span<const double> c) { return kernel::haar_analyze(c, g.n1); });
  HaarCoeffs2D out(g);
  out.mm = packed[0];
  const std::size_t m2 = node_count(g.n2);
  for (std::size_t a = 1; a < nx; ++a) {
    out.cm[a - 1] = packed[a * ny];
    for (std::size_t b = 1; b < ny; ++b) out.cc[(a - 1) * m2 + (b - 1)] = packed[a * ny + b];
  }
  for (std::size_t b = 1; b < ny; ++b) out.mc[b - 1] = packed[b];
  return out;
}

Signal2D haar_inverse_2d(const HaarCoeffs2D& c) {
  const Grid2D& g = c.grid;
  const std::size_t nx = g.cells_x(), ny = g.cells_y();
  const std::size_t m2 = node_count(g.n2);
  std::vector<double> packed(nx * ny);
  packed[0] = c.mm;
  for (std::size_t a = 1; a < nx; ++a) {
    packed[a * ny] = c.cm[a - 1];
    for (std::size_t b = 1; b < ny; ++b) packed[a * ny + b] = c.cc[(a - 1) * m2 + (b - 1)];
  }
  for (std::size_t b = 1; b < ny; ++b) packed[b] = c.mc[b - 1];
  auto by_x = kernel::map_columns(packed, nx, ny,
                                  [&](std::span<const double> col) { return kernel::haar_synthesize(col, g.n1); });
  auto cells = kernel::map_rows(by_x, nx, ny,
                                [&](std::span<const double> r) { return kernel::haar_synthesize(r, g.n2); });
  return Signal2D(g, std::move(cells));
}

SliceCoeffs slice_transform(const Signal2D& f, Axis axis) {
  const Grid2D& g = f.grid();
  const std::size_t nx = g.cells_x(), ny = g.cells_y();
  SliceCoeffs out;
  out.axis = axis;
  out.grid = g;
  if (axis == Axis::Y) {
    auto by_y = kernel::map_rows(f.values(), nx, ny,
                                 [&](std::span<const double> r) { return kernel::haar_analyze(r, g.n2); });
    auto column = [&](std::size_t b) {
      std::vector<double> v(nx);
      for (std::size_t x = 0; x < nx; ++x) v[x] = by_y[x * ny + b];
      return Signal1D(g.x_axis(), std::move(v));
    };
    out.mean_slice = column(0);
    out.slices.reserve(ny - 1);
    for (std::size_t b = 1; b < ny; ++b) out.slices.push_back(column(b));
  } else {
    auto by_x = kernel::map_columns(f.values(), nx, ny,
                                    [&](std::span<const double> c) { return kernel::haar_analyze(c, g.n1); });
    auto row = [&](std::size_t a) {
      auto r = std::span<const double>(by_x).subspan(a * ny, ny);
      return Signal1D(g.y_axis(), std::vector<double>(r.begin(), r.end()));
    };
    out.mean_slice = row(0);
    out.slices.reserve(nx - 1);
    for (std::size_t a = 1; a < nx; ++a) out.slices.push_back(row(a));
  }
  return out;
}

Signal2D reassemble(const SliceCoeffs& s) {
  const Grid2D& g = s.grid;
  const std::size_t nx = g.cells_x(), ny = g.cells_y();
  std::vector<double> packed(nx * ny);
  if (s.axis == Axis::Y) {
    for (std::size_t x = 0; x < nx; ++x) {
      packed[x * ny] = s.mean_slice[x];
      for (std::size_t b = 1; b < ny; ++b) packed[x * ny + b] = s.slices[b - 1][x];
    }
    auto cells = kernel::map_rows(packed, nx, ny,
                                  [&](std::span<const double> r) { return kernel::haar_synthesize(r, g.n2); });
    return Signal2D(g, std::move(cells));
  }
  for (std::size_t y = 0; y < ny; ++y) {
    packed[y] = s.mean_slice[y];
    for (std::size_t a = 1; a < nx; ++a) packed[a * ny + y] = s.slices[a - 1][y];
  }
  auto cells = kernel::map_columns(packed, nx, ny,
                                   [&](std::span<const double> c) { return kernel::haar_synthesize(c, g.n1); });
  return Signal2D(g, std::move(cells));
}

Signal1D haar_function(Grid1D grid, const DyadicInterval& i) {
  if (i.level >= grid.n) throw Error("subgrid region", "region");
  std::vector<double> v(grid.cells(), 0.0);
  const double amp = 1.0 / std::sqrt(i.measure());
  const auto first = i.first_cell(grid.n), last = i.last_cell(grid.n);
  const auto mid = (first + last) / 2;
  for (auto c = first; c < last; ++c) v[c] = c < mid ? amp : -amp;
  return Signal1D(grid, std::move(v));
}

Signal2D haar_function(Grid2D grid, const DyadicRectangle& r) {
  const Signal1D hx = haar_function(grid.x_axis(), r.ix);
  const Signal1D hy = haar_function(grid.y_axis(), r.iy);
  std::vector<double> v(grid.cells());
  for (std::size_t x = 0; x < grid.cells_x(); ++x) {
    for (std::size_t y = 0; y < grid.cells_y(); ++y) v[x * grid.cells_y() + y] = hx[x] * hy[y];
  }
  return Signal2D(grid, std::move(v));
}

Signal1D indicator(Grid1D grid, const DyadicInterval& i) {
  if (i.level > grid.n) throw Error("subgrid region", "region");
  std::vector<double> v(grid.cells(), 0.0);
  for (auto c = i.first_cell(grid.n); c < i.last_cell(grid.n); ++c) v[c] = 1.0;
  return Signal1D(grid, std::move(v));
}

Signal2D indicator(Grid2D grid, const DyadicRectangle& r) {
  if (!grid.contains(r)) throw Error("subgrid region", "region");
  std::vector<double> v(grid.cells(), 0.0);
  for (auto x = r.ix.first_cell(grid.n1); x < r.ix.last_cell(grid.n1); ++x) {
    for (auto y = r.iy.first_cell(grid.n2); y < r.iy.last_cell(grid.n2); ++y) v[x * grid.cells_y() + y] = 1.0;
  }
  return Signal2D(grid, std::move(v));
}

}  // namespace bipara
