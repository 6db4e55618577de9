#include "bipara/sparse.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "bipara/functionals.hpp"
#include "bipara/haar.hpp"

namespace bipara {

namespace {

constexpr std::size_t kSubfamilyCap = 16;

/// Fixed-width bit set over grid cells.
struct Bits {
  std::vector<std::uint64_t> w;

  explicit Bits(std::size_t n = 0) : w((n + 63) / 64, 0) {}
  static Bits of(const CellMask& m) {
    Bits b(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i]) b.w[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    return b;
  }
  void unite(const Bits& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
  }
  bool within(const Bits& o) const {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] & ~o.w[i]) return false;
    }
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto x : w) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }
  CellMask mask(std::size_t n) const {
    CellMask m(n);
    for (std::size_t i = 0; i < n; ++i) m[i] = (w[i / 64] >> (i % 64)) & 1U;
    return m;
  }
};

bool rect_less(const DyadicRectangle& a, const DyadicRectangle& b) {
  if (a.measure() != b.measure()) return a.measure() > b.measure();
  return std::tie(a.ix.level, a.ix.index, a.iy.level, a.iy.index) <
         std::tie(b.ix.level, b.ix.index, b.iy.level, b.iy.index);
}

/// Sum of |R| over family members inside `omega`, divided by |omega|.
double carleson_ratio(const RectFamily& fam, const CellMask& omega) {
  const std::size_t cells = cell_count(omega);
  if (cells == 0) return 0.0;
  const CellCounter counter(fam.grid, omega);
  double packed = 0.0;
  for (const auto& r : fam.rects) {
    if (counter.covers(r)) packed += r.measure();
  }
  return packed / (static_cast<double>(cells) * fam.grid.cell_measure());
}

CarlesonEstimate enumerate_subfamilies(const RectFamily& fam) {
  const std::size_t m = fam.size();
  const std::size_t cells = fam.grid.cells();
  std::vector<Bits> masks;
  masks.reserve(m);
  for (const auto& r : fam.rects) masks.push_back(Bits::of(rect_mask(fam.grid, r)));

  CarlesonEstimate best;
  best.exhaustive = true;
  std::size_t best_set = 0;
  for (std::size_t s = 1; s < (std::size_t{1} << m); ++s) {
    Bits u(cells);
    for (std::size_t i = 0; i < m; ++i) {
      if ((s >> i) & 1U) u.unite(masks[i]);
    }
    double packed = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (masks[i].within(u)) packed += fam.rects[i].measure();
    }
    const double ratio = packed / (static_cast<double>(u.count()) * fam.grid.cell_measure());
    if (ratio > best.value) {
      best.value = ratio;
      best_set = s;
    }
  }
  Bits u(cells);
  for (std::size_t i = 0; i < m; ++i) {
    if ((best_set >> i) & 1U) u.unite(masks[i]);
  }
  best.omega = u.mask(cells);
  return best;
}

CarlesonEstimate enumerate_cell_sets(const RectFamily& fam) {
  const std::size_t cells = fam.grid.cells();
  std::vector<double> contained(std::size_t{1} << cells, 0.0);
  for (const auto& r : fam.rects) {
    const CellMask m = rect_mask(fam.grid, r);
    std::size_t bits = 0;
    for (std::size_t i = 0; i < cells; ++i) bits |= std::size_t{m[i]} << i;
    contained[bits] += r.measure();
  }
  for (std::size_t bit = 0; bit < cells; ++bit) {
    for (std::size_t s = 0; s < contained.size(); ++s) {
      if (s & (std::size_t{1} << bit)) contained[s] += contained[s ^ (std::size_t{1} << bit)];
    }
  }
  CarlesonEstimate best;
  best.exhaustive = true;
  std::size_t best_set = 0;
  for (std::size_t s = 1; s < contained.size(); ++s) {
    const double ratio = contained[s] / (static_cast<double>(std::popcount(s)) * fam.grid.cell_measure());
    if (ratio > best.value) {
      best.value = ratio;
      best_set = s;
    }
  }
  best.omega.assign(cells, 0);
  for (std::size_t i = 0; i < cells; ++i) best.omega[i] = (best_set >> i) & 1U;
  return best;
}

CarlesonEstimate greedy_ascent(const RectFamily& fam) {
  CarlesonEstimate best;
  // From each single member, keep adding whichever member raises the ratio
  // most until nothing helps.
  for (const auto& start : fam.rects) {
    CellMask omega = rect_mask(fam.grid, start);
    double ratio = carleson_ratio(fam, omega);
    for (;;) {
      double step_best = ratio;
      std::size_t pick = fam.size();
      const CellCounter inside(fam.grid, omega);
      for (std::size_t i = 0; i < fam.size(); ++i) {
        if (inside.covers(fam.rects[i])) continue;
        CellMask trial = omega;
        add_rect(fam.grid, trial, fam.rects[i]);
        const double r = carleson_ratio(fam, trial);
        if (r > step_best) {
          step_best = r;
          pick = i;
        }
      }
      if (pick == fam.size()) break;
      add_rect(fam.grid, omega, fam.rects[pick]);
      ratio = step_best;
    }
    if (ratio > best.value) {
      best.value = ratio;
      best.omega = omega;
    }
  }
  return best;
}

}  // namespace

RectFamily::RectFamily(Grid2D grid_, std::vector<DyadicRectangle> rects_, std::optional<std::vector<int>> labels_)
    : grid(grid_), rects(std::move(rects_)), labels(std::move(labels_)) {
  std::set<DyadicRectangle> seen;
  for (const auto& r : rects) {
    if (!grid.contains(r)) throw Error("rectangle finer than the grid", "rects");
    if (!seen.insert(r).second) throw Error("duplicate rectangle in family", "rects");
  }
  if (labels && labels->size() != rects.size()) throw Error("labels must cover every rectangle", "labels");
}

CellMask RectFamily::union_mask() const {
  CellMask m = empty_mask(grid);
  for (const auto& r : rects) add_rect(grid, m, r);
  return m;
}

bool SparseFamily::verify() const {
  const Grid2D& g = base.grid;
  if (witness.size() != base.size()) return false;
  std::vector<std::uint8_t> used(g.cells(), 0);
  for (std::size_t i = 0; i < base.size(); ++i) {
    const CellMask r = rect_mask(g, base.rects[i]);
    for (std::size_t c : witness[i]) {
      if (c >= g.cells() || !r[c] || used[c]) return false;
      used[c] = 1;
    }
    const double density = static_cast<double>(witness[i].size()) / static_cast<double>(cell_count(r));
    if (density < eta) return false;
  }
  return true;
}

CarlesonEstimate carleson_constant(const RectFamily& fam, CarlesonMode mode) {
  if (fam.empty()) return {0.0, empty_mask(fam.grid), true};
  if (fam.size() <= kSubfamilyCap) return enumerate_subfamilies(fam);
  if (mode == CarlesonMode::Exact) {
    if (fam.grid.n1 + fam.grid.n2 > kProductBmoExactCap) {
      throw Error("exact Carleson constant needs at most 16 rectangles or N1 + N2 <= 4", "rects");
    }
    return enumerate_cell_sets(fam);
  }
  return greedy_ascent(fam);
}

SparseFamily sparse_extract(const RectFamily& fam) {
  const Grid2D& g = fam.grid;
  std::vector<std::size_t> order(fam.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rect_less(fam.rects[a], fam.rects[b]); });

  CellMask covered = empty_mask(g);
  SparseFamily out;
  out.base.grid = g;
  std::vector<int> labels;
  const std::size_t ny = g.cells_y();
  for (std::size_t i : order) {
    const DyadicRectangle& r = fam.rects[i];
    std::vector<std::size_t> fresh;
    for (auto x = r.ix.first_cell(g.n1); x < r.ix.last_cell(g.n1); ++x) {
      for (auto y = r.iy.first_cell(g.n2); y < r.iy.last_cell(g.n2); ++y) {
        const auto c = static_cast<std::size_t>(x) * ny + static_cast<std::size_t>(y);
        if (!covered[c]) fresh.push_back(c);
      }
    }
    const auto total = static_cast<std::size_t>((r.ix.last_cell(g.n1) - r.ix.first_cell(g.n1)) *
                                                (r.iy.last_cell(g.n2) - r.iy.first_cell(g.n2)));
    if (2 * fresh.size() < total) continue;
    for (std::size_t c : fresh) covered[c] = 1;
    out.base.rects.push_back(r);
    if (fam.labels) labels.push_back((*fam.labels)[i]);
    out.witness.push_back(std::move(fresh));
  }
  if (fam.labels) out.base.labels = std::move(labels);
  const std::size_t all = cell_count(fam.union_mask());
  out.union_ratio = all == 0 ? 1.0 : static_cast<double>(cell_count(covered)) / static_cast<double>(all);
  return out;
}

double jn_profile(const SparseFamily& sf, double p) {
  if (!(p > 0.0)) throw Error("exponent must be positive", "p");
  const Grid2D& g = sf.base.grid;
  std::vector<double> overlap(g.cells(), 0.0);
  const std::size_t ny = g.cells_y();
  for (const auto& r : sf.base.rects) {
    for (auto x = r.ix.first_cell(g.n1); x < r.ix.last_cell(g.n1); ++x) {
      for (auto y = r.iy.first_cell(g.n2); y < r.iy.last_cell(g.n2); ++y) {
        overlap[static_cast<std::size_t>(x) * ny + static_cast<std::size_t>(y)] += 1.0;
      }
    }
  }
  const double u = mask_measure(g, sf.base.union_mask());
  if (u == 0.0) return 0.0;
  return lp_norm(overlap, g.cell_measure(), p) / std::pow(u, 1.0 / p);
}

RectFamily level_set_rectangles(const Signal2D& g, double lambda) {
  if (!(lambda > 0.0)) throw Error("threshold must be positive", "lambda");
  const Grid2D& grid = g.grid();
  const std::size_t p2 = (std::size_t{2} << grid.n2) - 1;
  auto by_y = kernel::map_rows(g.values(), grid.cells_x(), grid.cells_y(),
                               [&](std::span<const double> r) { return kernel::pyramid_averages(r, grid.n2); });
  const std::vector<double> avg = kernel::map_columns(
      by_y, grid.cells_x(), p2, [&](std::span<const double> c) { return kernel::pyramid_averages(c, grid.n1); });

  // up[R] = R or some strict ancestor rectangle qualifies.
  std::vector<std::uint8_t> up(avg.size(), 0);
  std::vector<DyadicRectangle> out;
  for (int lx = 0; lx <= grid.n1; ++lx) {
    for (std::int64_t kx = 0; kx < (std::int64_t{1} << lx); ++kx) {
      const std::size_t a = node_index(lx, kx);
      for (int ly = 0; ly <= grid.n2; ++ly) {
        for (std::int64_t ky = 0; ky < (std::int64_t{1} << ly); ++ky) {
          const std::size_t b = node_index(ly, ky);
          const bool dominated = (lx > 0 && up[node_index(lx - 1, kx >> 1) * p2 + b]) ||
                                 (ly > 0 && up[a * p2 + node_index(ly - 1, ky >> 1)]);
          const bool qualifies = std::abs(avg[a * p2 + b]) > lambda;
          up[a * p2 + b] = (dominated || qualifies) ? 1 : 0;
          if (qualifies && !dominated) out.push_back({{lx, kx}, {ly, ky}});
        }
      }
    }
  }
  return RectFamily(grid, std::move(out));
}

void validate_contracting(const Grid2D& grid, const std::vector<CellMask>& omegas) {
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    if (omegas[i].size() != grid.cells()) throw Error("open set does not match the grid", "omegas");
    if (cell_count(omegas[i]) == 0) throw Error("non-contracting family: empty open set", "omegas");
    if (i == 0) continue;
    if (!is_subset(omegas[i], omegas[i - 1]) || 2 * cell_count(omegas[i]) > cell_count(omegas[i - 1])) {
      throw Error("non-contracting family", "omegas");
    }
  }
}

Signal2D contracting_family_maximal(const Signal2D& g, const std::vector<CellMask>& omegas) {
  const Grid2D& grid = g.grid();
  validate_contracting(grid, omegas);
  std::vector<double> out(grid.cells(), 0.0);
  auto v = g.values();
  for (const auto& omega : omegas) {
    double sum = 0.0;
    for (std::size_t c = 0; c < omega.size(); ++c) {
      if (omega[c]) sum += std::abs(v[c]);
    }
    const double avg = sum / static_cast<double>(cell_count(omega));
    for (std::size_t c = 0; c < omega.size(); ++c) {
      if (omega[c]) out[c] = std::max(out[c], avg);
    }
  }
  return Signal2D(grid, std::move(out));
}

}  // namespace bipara
