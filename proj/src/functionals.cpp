#include "bipara/functionals.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "bipara/sparse.hpp"

namespace bipara {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sqrt_all(std::vector<double> v, double smoothing = 0.0) {
  for (double& x : v) x = std::sqrt(std::max(x, 0.0) + smoothing);
  return v;
}

/// Averages over every dyadic rectangle (levels 0..n per axis), stored
/// as a (2^{n1+1}-1) x (2^{n2+1}-1) array indexed by node_index.
std::vector<double> rectangle_averages(const Signal2D& f) {
  const Grid2D& g = f.grid();
  auto by_y = kernel::map_rows(f.values(), g.cells_x(), g.cells_y(),
                               [&](std::span<const double> r) { return kernel::pyramid_averages(r, g.n2); });
  const std::size_t p2 = (std::size_t{2} << g.n2) - 1;
  return kernel::map_columns(by_y, g.cells_x(), p2,
                             [&](std::span<const double> c) { return kernel::pyramid_averages(c, g.n1); });
}

std::vector<double> cc_energy(const HaarCoeffs2D& c) {
  std::vector<double> w(c.cc.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = c.cc[i] * c.cc[i];
  return w;
}

/// For each cc rectangle, the min over its cells of `cell_values`.
std::vector<double> rectangle_minima(const Grid2D& g, std::span<const double> cell_values) {
  auto by_y = kernel::map_rows(cell_values, g.cells_x(), g.cells_y(),
                               [&](std::span<const double> r) { return kernel::pyramid_min(r, g.n2); });
  const std::size_t p2 = (std::size_t{2} << g.n2) - 1;
  auto full = kernel::map_columns(by_y, g.cells_x(), p2,
                                  [&](std::span<const double> c) { return kernel::pyramid_min(c, g.n1); });
  const std::size_t m1 = node_count(g.n1), m2 = node_count(g.n2);
  std::vector<double> out(m1 * m2);
  for (std::size_t a = 0; a < m1; ++a) {
    for (std::size_t b = 0; b < m2; ++b) out[a * m2 + b] = full[a * p2 + b];
  }
  return out;
}

void consider(ProductBmoEstimate& best, double value, const std::string& candidate, auto&& make_mask) {
  if (value > best.value || best.omega.empty()) {
    best.value = value;
    best.omega = make_mask();
    best.candidate = candidate;
  }
}

/// Scans the superlevel sets {cell_values >= v} (v over distinct values),
/// using per-rectangle minima to decide containment.
void scan_superlevel_sets(const Signal2D& f, std::span<const double> cell_values, std::span<const double> energy,
                          const std::string& label, ProductBmoEstimate& best, double strict_floor = -kInf) {
  const Grid2D& g = f.grid();
  const std::vector<double> mins = rectangle_minima(g, cell_values);
  std::vector<std::size_t> rect_order(mins.size());
  std::iota(rect_order.begin(), rect_order.end(), 0);
  std::sort(rect_order.begin(), rect_order.end(), [&](auto a, auto b) { return mins[a] > mins[b]; });
  std::vector<double> sorted(cell_values.begin(), cell_values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  std::size_t next_rect = 0;
  std::size_t cells = 0;
  double acc = 0.0;
  while (cells < sorted.size()) {
    const double v = sorted[cells];
    if (v <= strict_floor) break;
    while (cells < sorted.size() && sorted[cells] == v) ++cells;
    while (next_rect < rect_order.size() && mins[rect_order[next_rect]] >= v) acc += energy[rect_order[next_rect++]];
    const double value = std::sqrt(acc / (static_cast<double>(cells) * g.cell_measure()));
    consider(best, value, label, [&] {
      CellMask m(cell_values.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = cell_values[i] >= v ? 1 : 0;
      return m;
    });
  }
}

}  // namespace

bool NormKind::has_exponent() const {
  switch (tag) {
    case Tag::Lp:
    case Tag::HpSquare:
    case Tag::HpMaximal:
    case Tag::SliceHrLr:
      return true;
    default:
      return false;
  }
}

std::string NormKind::name() const {
  switch (tag) {
    case Tag::Lp: return "lp";
    case Tag::HpSquare: return "hp-square";
    case Tag::HpMaximal: return "hp-maximal";
    case Tag::BmoLine: return "bmo";
    case Tag::ProductBmoExact: return "product-bmo-exact";
    case Tag::ProductBmoHeuristic: return "product-bmo-heuristic";
    case Tag::SliceBmoSup: return "slice-bmo-sup";
    case Tag::SliceHrLr: return "slice-hr-lr";
  }
  return "?";
}

NormKind NormKind::parse(std::string_view name, double exponent) {
  static const std::pair<std::string_view, Tag> table[] = {
      {"lp", Tag::Lp},
      {"hp-square", Tag::HpSquare},
      {"hp-maximal", Tag::HpMaximal},
      {"bmo", Tag::BmoLine},
      {"product-bmo-exact", Tag::ProductBmoExact},
      {"product-bmo-heuristic", Tag::ProductBmoHeuristic},
      {"slice-bmo-sup", Tag::SliceBmoSup},
      {"slice-hr-lr", Tag::SliceHrLr},
  };
  for (const auto& [key, tag] : table) {
    if (key == name) {
      NormKind k{tag, exponent};
      if (!k.has_exponent()) k.p = 0.0;
      k.validate();
      return k;
    }
  }
  throw Error("unknown norm kind '" + std::string(name) + "'", "kind");
}

void NormKind::validate() const {
  if (!has_exponent()) return;
  if (!(p > 0.0)) throw Error("exponent must be positive", "p");
  if (tag != Tag::Lp && std::isinf(p)) throw Error("p = infinity is only supported for Lp", "p");
}

double lp_norm(std::span<const double> values, double cell_measure, double p) {
  if (!(p > 0.0)) throw Error("exponent must be positive", "p");
  if (std::isinf(p)) return max_abs(values);
  double s = 0.0;
  if (p == 2.0) {
    for (double v : values) s += v * v;
    return std::sqrt(s * cell_measure);
  }
  for (double v : values) s += std::pow(std::abs(v), p);
  return std::pow(s * cell_measure, 1.0 / p);
}

double lp_norm(const Signal1D& f, double p) { return lp_norm(f.values(), f.grid().cell_measure(), p); }
double lp_norm(const Signal2D& f, double p) { return lp_norm(f.values(), f.grid().cell_measure(), p); }

Signal1D maximal_1d(const Signal1D& f) {
  const int n = f.grid().n;
  return Signal1D(f.grid(), kernel::ancestor_max(kernel::pyramid_averages(f.values(), n), n));
}

Signal2D strong_maximal_2d(const Signal2D& f) {
  const Grid2D& g = f.grid();
  const std::size_t p1 = (std::size_t{2} << g.n1) - 1, p2 = (std::size_t{2} << g.n2) - 1;
  const std::vector<double> avg = rectangle_averages(f);
  // max over J containing y, then over I containing x
  auto over_y = kernel::map_rows(avg, p1, p2, [&](std::span<const double> r) { return kernel::ancestor_max(r, g.n2); });
  auto cells = kernel::map_columns(over_y, p1, g.cells_y(),
                                   [&](std::span<const double> c) { return kernel::ancestor_max(c, g.n1); });
  return Signal2D(g, std::move(cells));
}

namespace detail {

std::vector<double> square_sq_1d(const Signal1D& f) {
  const int n = f.grid().n;
  std::vector<double> w = kernel::node_details(f.values(), n);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = w[i] * w[i] / node_at(i).measure();
  return kernel::ancestor_sums(w, n);
}

std::vector<double> square_sq_2d(const Signal2D& f) {
  const Grid2D& g = f.grid();
  const HaarCoeffs2D c = haar_forward_2d(f);
  const std::size_t m1 = node_count(g.n1), m2 = node_count(g.n2);
  std::vector<double> w = cc_energy(c);
  for (std::size_t a = 0; a < m1; ++a) {
    const double mx = node_at(a).measure();
    for (std::size_t b = 0; b < m2; ++b) w[a * m2 + b] /= mx * node_at(b).measure();
  }
  auto over_x = kernel::map_columns(w, m1, m2, [&](std::span<const double> col) { return kernel::ancestor_sums(col, g.n1); });
  return kernel::map_rows(over_x, g.cells_x(), m2, [&](std::span<const double> r) { return kernel::ancestor_sums(r, g.n2); });
}

}  // namespace detail

Signal1D square_1d(const Signal1D& f) { return Signal1D(f.grid(), sqrt_all(detail::square_sq_1d(f))); }
Signal2D square_2d(const Signal2D& f) { return Signal2D(f.grid(), sqrt_all(detail::square_sq_2d(f))); }

double bmo_line(const Signal1D& f) {
  const int n = f.grid().n;
  std::vector<double> e = kernel::node_details(f.values(), n);
  for (double& v : e) v *= v;
  e = kernel::subtree_sums(e, n);
  double best = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) best = std::max(best, e[i] / node_at(i).measure());
  return std::sqrt(best);
}

double product_bmo_on(const Signal2D& f, const CellMask& omega) {
  const Grid2D& g = f.grid();
  if (omega.size() != g.cells()) throw Error("cell set does not match the grid", "omega");
  const std::size_t cells = cell_count(omega);
  if (cells == 0) throw Error("open set must be nonempty", "omega");
  const HaarCoeffs2D c = haar_forward_2d(f);
  const CellCounter counter(g, omega);
  const std::size_t m1 = node_count(g.n1), m2 = node_count(g.n2);
  double acc = 0.0;
  for (std::size_t a = 0; a < m1; ++a) {
    const DyadicInterval i = node_at(a);
    for (std::size_t b = 0; b < m2; ++b) {
      const double v = c.cc[a * m2 + b];
      if (v != 0.0 && counter.covers({i, node_at(b)})) acc += v * v;
    }
  }
  return std::sqrt(acc / (static_cast<double>(cells) * g.cell_measure()));
}

ProductBmoEstimate product_bmo_exact(const Signal2D& f) {
  const Grid2D& g = f.grid();
  if (g.n1 + g.n2 > kProductBmoExactCap) throw Error("grid too large for exact product BMO", "resolution");
  const std::size_t cells = g.cells();
  const std::size_t subsets = std::size_t{1} << cells;
  const HaarCoeffs2D c = haar_forward_2d(f);
  const std::size_t m1 = node_count(g.n1), m2 = node_count(g.n2);
  // a[mask] = energy of rectangles whose cell set is exactly `mask`; the
  // subset-sum transform turns it into the energy contained in each union.
  std::vector<double> contained(subsets, 0.0);
  for (std::size_t a = 0; a < m1; ++a) {
    for (std::size_t b = 0; b < m2; ++b) {
      const CellMask m = rect_mask(g, {node_at(a), node_at(b)});
      std::size_t bits = 0;
      for (std::size_t i = 0; i < cells; ++i) bits |= std::size_t{m[i]} << i;
      contained[bits] += c.cc[a * m2 + b] * c.cc[a * m2 + b];
    }
  }
  for (std::size_t bit = 0; bit < cells; ++bit) {
    for (std::size_t s = 0; s < subsets; ++s) {
      if (s & (std::size_t{1} << bit)) contained[s] += contained[s ^ (std::size_t{1} << bit)];
    }
  }
  ProductBmoEstimate best;
  std::size_t best_set = subsets - 1;
  for (std::size_t s = 1; s < subsets; ++s) {
    const double v = contained[s] / (static_cast<double>(std::popcount(s)) * g.cell_measure());
    if (v > best.value) {
      best.value = v;
      best_set = s;
    }
  }
  best.value = std::sqrt(best.value);
  best.omega.assign(cells, 0);
  for (std::size_t i = 0; i < cells; ++i) best.omega[i] = (best_set >> i) & 1U;
  best.candidate = "exhaustive";
  return best;
}

ProductBmoEstimate product_bmo_heuristic(const Signal2D& f) {
  const Grid2D& g = f.grid();
  const HaarCoeffs2D c = haar_forward_2d(f);
  const std::size_t m1 = node_count(g.n1), m2 = node_count(g.n2);
  const std::vector<double> energy = cc_energy(c);
  ProductBmoEstimate best;
  best.omega = full_mask(g);
  best.candidate = "single-rectangle";

  // Single rectangles: energy of all cc rectangles inside R, over |R|.
  auto sub_y = kernel::map_rows(energy, m1, m2, [&](std::span<const double> r) { return kernel::subtree_sums(r, g.n2); });
  auto sub = kernel::map_columns(sub_y, m1, m2, [&](std::span<const double> col) { return kernel::subtree_sums(col, g.n1); });
  for (std::size_t a = 0; a < m1; ++a) {
    for (std::size_t b = 0; b < m2; ++b) {
      const DyadicRectangle r{node_at(a), node_at(b)};
      consider(best, std::sqrt(sub[a * m2 + b] / r.measure()), "single-rectangle", [&] { return rect_mask(g, r); });
    }
  }

  const std::vector<double> s = sqrt_all(detail::square_sq_2d(f));
  scan_superlevel_sets(f, s, energy, "square-superlevel", best);

  const Signal2D mf = strong_maximal_2d(f);
  const double m_max = max_abs(mf.values());
  if (m_max > 0.0) {
    double m_min = kInf;
    for (double v : mf.values()) {
      if (v > 0.0) m_min = std::min(m_min, v);
    }
    const CellMask none = empty_mask(g);
    for (int k = static_cast<int>(std::ceil(std::log2(m_min))) - 1; std::ldexp(1.0, k) < m_max; ++k) {
      const double lambda = std::ldexp(1.0, k);
      CellMask level(g.cells());
      for (std::size_t i = 0; i < level.size(); ++i) level[i] = mf.values()[i] > lambda ? 1 : 0;
      if (cell_count(level) > 0) {
        consider(best, product_bmo_on(f, level), "maximal-superlevel", [&] { return level; });
      }
      const RectFamily family = level_set_rectangles(f, lambda);
      if (family.empty()) continue;
      const CellMask sparse_union = sparse_extract(family).base.union_mask();
      if (cell_count(sparse_union) > 0) {
        consider(best, product_bmo_on(f, sparse_union), "sparse-union", [&] { return sparse_union; });
      }
    }
  }
  return best;
}

double norm(const Signal1D& f, NormKind kind, double smoothing) {
  kind.validate();
  switch (kind.tag) {
    case NormKind::Tag::Lp:
      return lp_norm(f, kind.p);
    case NormKind::Tag::HpSquare:
      return lp_norm(sqrt_all(detail::square_sq_1d(f), smoothing), f.grid().cell_measure(), kind.p);
    case NormKind::Tag::HpMaximal:
      return lp_norm(maximal_1d(f), kind.p);
    case NormKind::Tag::BmoLine:
      return bmo_line(f);
    default:
      throw Error("norm kind '" + kind.name() + "' requires a 2D signal", "kind");
  }
}

double norm(const Signal2D& f, NormKind kind, double smoothing) {
  kind.validate();
  const Grid2D& g = f.grid();
  switch (kind.tag) {
    case NormKind::Tag::Lp:
      return lp_norm(f, kind.p);
    case NormKind::Tag::HpSquare:
      return lp_norm(sqrt_all(detail::square_sq_2d(f), smoothing), g.cell_measure(), kind.p);
    case NormKind::Tag::HpMaximal:
      return lp_norm(strong_maximal_2d(f), kind.p);
    case NormKind::Tag::ProductBmoExact:
      return product_bmo_exact(f).value;
    case NormKind::Tag::ProductBmoHeuristic:
      return product_bmo_heuristic(f).value;
    case NormKind::Tag::SliceBmoSup: {
      double best = 0.0;
      for (std::size_t y = 0; y < g.cells_y(); ++y) best = std::max(best, bmo_line(f.row(y)));
      return best;
    }
    case NormKind::Tag::SliceHrLr: {
      double acc = 0.0;
      for (std::size_t y = 0; y < g.cells_y(); ++y) {
        const Signal1D row = f.row(y);
        const double v = lp_norm(sqrt_all(detail::square_sq_1d(row), smoothing), row.grid().cell_measure(), kind.p);
        acc += std::pow(v, kind.p);
      }
      return std::pow(acc * g.y_axis().cell_measure(), 1.0 / kind.p);
    }
    case NormKind::Tag::BmoLine:
      break;
  }
  throw Error("norm kind 'bmo' requires a 1D signal", "kind");
}

double norm(const AnySignal& f, NormKind kind, double smoothing) {
  return std::visit([&](const auto& s) { return norm(s, kind, smoothing); }, f);
}

std::string_view mixed_kind_name(MixedKind kind) {
  switch (kind) {
    case MixedKind::S2M1: return "S2M1";
    case MixedKind::M1S2: return "M1S2";
    case MixedKind::S1M2: return "S1M2";
    case MixedKind::M2S1: return "M2S1";
  }
  return "?";
}

namespace {

// S2M1(f)(x,y)^2 = sum_{J containing y} M(f_J)(x)^2 / |J|
Signal2D square_of_maximal_slices(const Signal2D& f) {
  const Grid2D& g = f.grid();
  const SliceCoeffs slices = slice_transform(f, Axis::Y);
  const std::size_t nx = g.cells_x(), m2 = node_count(g.n2);
  std::vector<double> w(nx * m2);
  for (std::size_t b = 0; b < m2; ++b) {
    const Signal1D mj = maximal_1d(slices.slices[b]);
    const double inv = 1.0 / node_at(b).measure();
    for (std::size_t x = 0; x < nx; ++x) w[x * m2 + b] = mj[x] * mj[x] * inv;
  }
  auto cells = kernel::map_rows(w, nx, m2, [&](std::span<const double> r) { return kernel::ancestor_sums(r, g.n2); });
  return Signal2D(g, sqrt_all(std::move(cells)));
}

// M1S2(f)(x,y)^2 = max_{I containing x} sum_{J containing y} <f_J>_I^2 / |J|
Signal2D maximal_of_square_slices(const Signal2D& f) {
  const Grid2D& g = f.grid();
  const SliceCoeffs slices = slice_transform(f, Axis::Y);
  const std::size_t p1 = (std::size_t{2} << g.n1) - 1, m2 = node_count(g.n2);
  std::vector<double> w(p1 * m2);
  for (std::size_t b = 0; b < m2; ++b) {
    const std::vector<double> avg = kernel::pyramid_averages(slices.slices[b].values(), g.n1);
    const double inv = 1.0 / node_at(b).measure();
    for (std::size_t a = 0; a < p1; ++a) w[a * m2 + b] = avg[a] * avg[a] * inv;
  }
  auto per_y = kernel::map_rows(w, p1, m2, [&](std::span<const double> r) { return kernel::ancestor_sums(r, g.n2); });
  auto cells = kernel::map_columns(per_y, p1, g.cells_y(),
                                   [&](std::span<const double> c) { return kernel::ancestor_max(c, g.n1); });
  return Signal2D(g, sqrt_all(std::move(cells)));
}

}  // namespace

Signal2D mixed_operator(const Signal2D& f, MixedKind kind) {
  switch (kind) {
    case MixedKind::S2M1: return square_of_maximal_slices(f);
    case MixedKind::M1S2: return maximal_of_square_slices(f);
    // x and y roles swapped
    case MixedKind::S1M2: return square_of_maximal_slices(f.transposed()).transposed();
    case MixedKind::M2S1: return maximal_of_square_slices(f.transposed()).transposed();
  }
  throw Error("unknown mixed operator kind", "kind");
}

}  // namespace bipara
