#include <cmath>
#include <random>
#include <set>

#include "bipara/cells.hpp"
#include "bipara/error.hpp"
#include "bipara/functionals.hpp"
#include "bipara/sparse.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bipara;
using doctest::Approx;

namespace {

const DyadicRectangle kRoot{{0, 0}, {0, 0}};
const DyadicRectangle kLeftHalf{{1, 0}, {0, 0}};

RectFamily generations(int n) {
  std::vector<DyadicRectangle> rects;
  for (int lx = 0; lx < n; ++lx) {
    for (int ly = 0; ly < n; ++ly) {
      for (std::int64_t kx = 0; kx < (1 << lx); ++kx) {
        for (std::int64_t ky = 0; ky < (1 << ly); ++ky) rects.push_back({{lx, kx}, {ly, ky}});
      }
    }
  }
  return RectFamily(Grid2D(n, n), rects);
}

}  // namespace

TEST_CASE("Carleson constants of small families") {
  const Grid2D g(2, 2);
  for (auto mode : {CarlesonMode::Exact, CarlesonMode::Restricted}) {
    CHECK(carleson_constant(RectFamily(g, {kRoot}), mode).value == Approx(1.0));
    CHECK(carleson_constant(RectFamily(g, {kRoot, kLeftHalf}), mode).value == Approx(1.5));
  }
  CHECK(carleson_constant(generations(1), CarlesonMode::Exact).value == Approx(1.0));
  CHECK(carleson_constant(generations(2), CarlesonMode::Exact).value == Approx(4.0));
}

TEST_CASE("families reject duplicates and subgrid rectangles") {
  CHECK_THROWS_AS(RectFamily(Grid2D(1, 1), {kRoot, kRoot}), Error);
  CHECK_THROWS_AS(RectFamily(Grid2D(1, 1), {{{2, 0}, {0, 0}}}), Error);
}

TEST_CASE("greedy extraction on nested and disjoint pairs") {
  const Grid2D g(2, 2);
  const auto nested = sparse_extract(RectFamily(g, {kLeftHalf, kRoot}));
  REQUIRE(nested.base.size() == 1);
  CHECK(nested.base.rects[0] == kRoot);
  CHECK(nested.union_ratio == Approx(1.0));
  CHECK(nested.verify());

  const DyadicRectangle right{{1, 1}, {0, 0}};
  const auto disjoint = sparse_extract(RectFamily(g, {kLeftHalf, right}));
  CHECK(disjoint.base.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(disjoint.witness[i].size() == 8);
  CHECK(disjoint.verify());
  CHECK(jn_profile(disjoint, 1.0) == Approx(1.0));
}

TEST_CASE("random families extract to verified half-sparse families") {
  const Grid2D g(5, 5);
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    std::set<DyadicRectangle> picked;
    while (picked.size() < 50) {
      const int lx = static_cast<int>(rng() % 6);
      const int ly = static_cast<int>(rng() % 6);
      picked.insert({{lx, static_cast<std::int64_t>(rng() % (1u << lx))}, {ly, static_cast<std::int64_t>(rng() % (1u << ly))}});
    }
    const auto sf = sparse_extract(RectFamily(g, {picked.begin(), picked.end()}));
    CHECK(sf.verify());
    CHECK(sf.union_ratio > 0.0);
    CHECK(sf.union_ratio <= 1.0);
    for (double p : {0.5, 1.0, 2.0}) CHECK(jn_profile(sf, p) >= 1.0 - 1e-12);
  }
}

TEST_CASE("a tampered witness fails verification") {
  auto sf = sparse_extract(RectFamily(Grid2D(2, 2), {kRoot}));
  REQUIRE(sf.verify());
  sf.witness[0].resize(7);
  CHECK_FALSE(sf.verify());
}

TEST_CASE("John-Nirenberg profile of a single rectangle") {
  const auto sf = sparse_extract(RectFamily(Grid2D(3, 3), {DyadicRectangle{{1, 1}, {2, 0}}}));
  for (double p : {0.5, 1.0, 3.0}) CHECK(jn_profile(sf, p) == Approx(1.0));
  CHECK_THROWS_AS((void)jn_profile(sf, 0.0), Error);
}

TEST_CASE("level sets of constants") {
  const Grid2D g(2, 3);
  const Signal2D c(g, std::vector<double>(g.cells(), -2.0));
  const auto below = level_set_rectangles(c, 1.5);
  REQUIRE(below.size() == 1);
  CHECK(below.rects[0] == kRoot);
  CHECK(level_set_rectangles(c, 2.0).empty());
  CHECK_THROWS_AS(level_set_rectangles(c, 0.0), Error);
}

TEST_CASE("level-set union equals the maximal superlevel set") {
  const Grid2D g(4, 4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = oracle::random_signal(g, seed);
    const auto m = strong_maximal_2d(f);
    for (double lambda : {0.1, 0.5, 1.0}) {
      const auto fam = level_set_rectangles(f, lambda);
      const auto mask = fam.union_mask();
      for (std::size_t c = 0; c < g.cells(); ++c) CHECK((mask[c] != 0) == (m.values()[c] > lambda));
      for (const auto& a : fam.rects) {
        for (const auto& b : fam.rects) {
          if (!(a == b)) CHECK_FALSE(a.contains(b));
        }
      }
    }
  }
}

TEST_CASE("contracting-family maximal function") {
  const Grid2D g(2, 2);
  const auto f = oracle::random_signal(g, 3);
  double mean_abs = 0.0;
  for (double v : f.values()) mean_abs += std::abs(v) / static_cast<double>(g.cells());
  const auto m = contracting_family_maximal(f, {full_mask(g)});
  for (double v : m.values()) CHECK(v == Approx(mean_abs));

  const auto half = rect_mask(g, kLeftHalf);
  const auto ones = contracting_family_maximal(Signal2D(g, std::vector<double>(g.cells(), 1.0)), {half});
  for (std::size_t c = 0; c < g.cells(); ++c) CHECK(ones.values()[c] == (half[c] ? 1.0 : 0.0));

  const auto quarter = rect_mask(g, {{1, 0}, {1, 0}});
  const auto two = contracting_family_maximal(f, {full_mask(g), quarter});
  for (std::size_t c = 0; c < g.cells(); ++c) {
    double q = 0.0;
    for (std::size_t d = 0; d < g.cells(); ++d) q += quarter[d] ? std::abs(f.values()[d]) / 4.0 : 0.0;
    CHECK(two.values()[c] == Approx(quarter[c] ? std::max(mean_abs, q) : mean_abs));
  }

  CHECK_THROWS_AS(contracting_family_maximal(f, {half, full_mask(g)}), Error);
  const auto other = rect_mask(g, {{1, 1}, {1, 0}});
  CHECK_THROWS_AS(contracting_family_maximal(f, {half, other, quarter}), Error);
}

TEST_CASE("cell counter agrees with direct counts") {
  const Grid2D g(3, 2);
  CellMask mask = empty_mask(g);
  add_rect(g, mask, {{1, 0}, {1, 1}});
  add_rect(g, mask, {{3, 7}, {2, 0}});
  const CellCounter counter(g, mask);
  CHECK(counter.count(kRoot) == cell_count(mask));
  CHECK(counter.covers({{1, 0}, {1, 1}}));
  CHECK_FALSE(counter.covers({{1, 0}, {0, 0}}));
  CHECK(mask_measure(g, mask) == Approx(0.25 + 1.0 / 32.0));
}
