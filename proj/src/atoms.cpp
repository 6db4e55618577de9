#include "bipara/atoms.hpp"

#include <algorithm>
#include <cmath>

#include "bipara/functionals.hpp"
#include "bipara/sparse.hpp"

namespace bipara {

namespace {

constexpr double kSupportTolerance = 1e-12;

CellMask superlevel(std::span<const double> values, double threshold) {
  CellMask m(values.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = values[i] > threshold ? 1 : 0;
  return m;
}

}  // namespace

bool Atom::valid(double slack) const {
  const Grid2D& g = coeffs.grid;
  if (support.size() != g.cells()) return false;
  if (std::any_of(coeffs.cm.begin(), coeffs.cm.end(), [](double v) { return v != 0.0; }) ||
      std::any_of(coeffs.mc.begin(), coeffs.mc.end(), [](double v) { return v != 0.0; }) || coeffs.mm != 0.0) {
    return false;
  }
  const CellCounter inside(g, support);
  const std::size_t m2 = node_count(g.n2);
  for (std::size_t i = 0; i < coeffs.cc.size(); ++i) {
    if (coeffs.cc[i] != 0.0 && !inside.covers({node_at(i / m2), node_at(i % m2)})) return false;
  }
  const double bound = std::pow(mask_measure(g, support), 1.0 / s);
  return lp_norm(signal(), s) <= bound * (1.0 + slack);
}

Signal2D AtomicDecomposition::reconstruct() const {
  Signal2D out(grid);
  for (std::size_t i = 0; i < atoms.size(); ++i) out = out + scalars[i] * atoms[i].signal();
  return out;
}

double AtomicDecomposition::quasi_norm_sum() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) acc += std::pow(scalars[i], p) * mask_measure(grid, omegas[i]);
  return std::pow(acc, 1.0 / p);
}

AtomicDecomposition atomic_decompose(const Signal2D& f, double p, double s) {
  if (!(p > 0.0)) throw Error("exponent must be positive", "p");
  if (!(s > std::max(1.0, p)) || std::isinf(s)) throw Error("atom exponent s must exceed max(1, p)", "s");
  const Grid2D& g = f.grid();
  AtomicDecomposition out;
  out.grid = g;
  out.p = p;
  out.s = s;

  const HaarCoeffs2D c = haar_forward_2d(f);
  const Signal2D sq = square_2d(f);
  double s_min = std::numeric_limits<double>::infinity(), s_max = 0.0;
  for (double v : sq.values()) {
    if (v > 0.0) s_min = std::min(s_min, v);
    s_max = std::max(s_max, v);
  }
  if (s_max == 0.0) return out;

  // Nested candidates {S > 2^k}; keep one only when it at most halves the last kept set.
  std::vector<CellMask> kept;
  for (int k = static_cast<int>(std::ceil(std::log2(s_min))) - 1; std::ldexp(1.0, k) < s_max; ++k) {
    CellMask cand = superlevel(sq.values(), std::ldexp(1.0, k));
    const std::size_t n = cell_count(cand);
    if (n == 0) break;
    if (kept.empty() || 2 * n <= cell_count(kept.back())) kept.push_back(std::move(cand));
  }

  std::vector<CellCounter> counters;
  counters.reserve(kept.size());
  for (const auto& m : kept) counters.emplace_back(g, m);
  std::vector<HaarCoeffs2D> shells(kept.size(), HaarCoeffs2D(g));
  const std::size_t m2 = node_count(g.n2);
  for (std::size_t i = 0; i < c.cc.size(); ++i) {
    if (c.cc[i] == 0.0) continue;
    const DyadicRectangle r{node_at(i / m2), node_at(i % m2)};
    std::size_t shell = 0;
    while (shell + 1 < kept.size() && counters[shell + 1].covers(r)) ++shell;
    shells[shell].cc[i] = c.cc[i];
  }

  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (std::all_of(shells[i].cc.begin(), shells[i].cc.end(), [](double v) { return v == 0.0; })) continue;
    const double a = lp_norm(haar_inverse_2d(shells[i]), s) / std::pow(mask_measure(g, kept[i]), 1.0 / s);
    for (double& v : shells[i].cc) v /= a;
    out.omegas.push_back(kept[i]);
    out.scalars.push_back(a);
    out.atoms.push_back({kept[i], std::move(shells[i]), s});
  }
  return out;
}

LocalImageReport local_image_check(const NamedOperator& op, const Atom& atom, double q) {
  if (op.tag() != OperatorTag::Pi3 && op.tag() != OperatorTag::Pi4) {
    throw Error("local image check applies to pi3 and pi4 only", "op");
  }
  if (!(q > 1.0 && q < atom.s)) throw Error("q must lie in (1, s)", "q");
  LocalImageReport rep;
  rep.image = op.apply(atom.signal());
  const auto v = rep.image.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!atom.support[i]) rep.outside_max = std::max(rep.outside_max, std::abs(v[i]));
  }
  rep.support_contained = rep.outside_max <= kSupportTolerance * std::max(1.0, max_abs(v));
  const double measure = mask_measure(atom.coeffs.grid, atom.support);
  rep.ratio = measure > 0.0 ? lp_norm(rep.image, q) / std::pow(measure, 1.0 / q) : 0.0;
  return rep;
}

}  // namespace bipara
