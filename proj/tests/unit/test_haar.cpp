#include <cmath>

#include "bipara/error.hpp"
#include "bipara/haar.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bipara;
using doctest::Approx;

TEST_CASE("two-cell transform splits mean and detail") {
  const Grid1D g(1);
  auto c = haar_forward_1d(Signal1D(g, {1.0, 1.0}));
  CHECK(c.mean == Approx(1.0));
  CHECK(c.detail[0] == Approx(0.0));

  c = haar_forward_1d(Signal1D(g, {1.0, 0.0}));
  CHECK(c.mean == Approx(0.5));
  CHECK(c.detail[0] == Approx(0.5));
}

TEST_CASE("inverse of a unit detail is the root Haar function") {
  const auto f = haar_inverse_1d(HaarCoeffs1D(Grid1D(1), 0.0, {1.0}));
  CHECK(f[0] == Approx(1.0));
  CHECK(f[1] == Approx(-1.0));
}

TEST_CASE("a tensor Haar function has exactly one cc coefficient") {
  const Grid2D g(3, 2);
  const DyadicRectangle r{{1, 1}, {0, 0}};
  const auto c = haar_forward_2d(haar_function(g, r));
  for (std::size_t i = 0; i < c.cc.size(); ++i) {
    CHECK(c.cc[i] == Approx(i == c.cc_index(r.ix, r.iy) ? 1.0 : 0.0));
  }
  CHECK(max_abs(c.cm) < 1e-14);
  CHECK(max_abs(c.mc) < 1e-14);
  CHECK(std::abs(c.mm) < 1e-14);
}

TEST_CASE("the constant one has only the root mean") {
  const Grid2D g(2, 3);
  const auto c = haar_forward_2d(Signal2D(g, std::vector<double>(g.cells(), 1.0)));
  CHECK(c.mm == Approx(1.0));
  CHECK(max_abs(c.cc) < 1e-14);
  CHECK(max_abs(c.cm) < 1e-14);
  CHECK(max_abs(c.mc) < 1e-14);
}

TEST_CASE("coefficients agree with direct pairings") {
  const Grid2D g(3, 2);
  const auto f = oracle::random_signal(g, 11);
  const auto c = haar_forward_2d(f);
  for (const auto& i : oracle::intervals(g.n1 - 1)) {
    for (const auto& j : oracle::intervals(g.n2 - 1)) {
      const DyadicRectangle r{{i.level, i.index}, {j.level, j.index}};
      CHECK(c.at(r) == Approx(oracle::pair_2d(f, 1, i, 1, j)).epsilon(1e-12));
    }
    CHECK(c.cm[node_index(i.level, i.index)] == Approx(oracle::pair_2d(f, 1, i, 0, {0, 0})).epsilon(1e-12));
  }
  CHECK(c.mm == Approx(oracle::pair_2d(f, 0, {0, 0}, 0, {0, 0})));
}

TEST_CASE("forward and inverse transforms round-trip") {
  for (int n = 1; n <= 10; ++n) {
    const auto f = oracle::random_signal(Grid1D(n), 100 + n);
    const auto back = haar_inverse_1d(haar_forward_1d(f));
    CHECK(max_abs_difference(f.values(), back.values()) < 1e-12);
  }
  for (int n1 = 1; n1 <= 5; ++n1) {
    for (int n2 = 1; n1 + n2 <= 10; ++n2) {
      const auto f = oracle::random_signal(Grid2D(n1, n2), 10 * n1 + n2);
      const auto back = haar_inverse_2d(haar_forward_2d(f));
      CHECK(max_abs_difference(f.values(), back.values()) < 1e-12);
    }
  }
}

TEST_CASE("the transform is linear") {
  const Grid2D g(3, 3);
  const auto a = oracle::random_signal(g, 1);
  const auto b = oracle::random_signal(g, 2);
  const auto lhs = haar_forward_2d(2.5 * a + b);
  const auto ca = haar_forward_2d(a);
  const auto cb = haar_forward_2d(b);
  for (std::size_t i = 0; i < lhs.cc.size(); ++i) CHECK(lhs.cc[i] == Approx(2.5 * ca.cc[i] + cb.cc[i]));
  CHECK(lhs.mm == Approx(2.5 * ca.mm + cb.mm));
}

TEST_CASE("slices carry the one-variable coefficients") {
  const Grid2D g(2, 3);
  const auto f = oracle::random_signal(g, 5);
  const auto s = slice_transform(f, Axis::Y);
  REQUIRE(s.slices.size() == node_count(g.n2));
  for (const auto& j : oracle::intervals(g.n2 - 1)) {
    const auto expect = oracle::slice_y(f, j);
    CHECK(max_abs_difference(s.at({j.level, j.index}).values(), expect.values()) < 1e-13);
  }
  CHECK(max_abs_difference(reassemble(s).values(), f.values()) < 1e-13);
  CHECK(max_abs_difference(reassemble(slice_transform(f, Axis::X)).values(), f.values()) < 1e-13);
}

TEST_CASE("slices of a tensor Haar function") {
  const Grid2D g(2, 2);
  const DyadicRectangle r{{0, 0}, {1, 1}};
  const auto s = slice_transform(haar_function(g, r), Axis::Y);
  const auto hi = haar_function(Grid1D(2), r.ix);
  for (std::size_t node = 0; node < s.slices.size(); ++node) {
    const double scale = node == node_index(r.iy) ? 1.0 : 0.0;
    CHECK(max_abs_difference(s.slices[node].values(), (scale * hi).values()) < 1e-14);
  }
}

TEST_CASE("averages over regions finer than the grid are rejected") {
  const Signal1D f(Grid1D(2));
  CHECK(average_over(f, DyadicInterval(2, 3)) == 0.0);
  try {
    (void)average_over(f, DyadicInterval(3, 0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "subgrid region");
  }
  CHECK_THROWS_AS((void)average_over(Signal2D(Grid2D(1, 1)), DyadicRectangle{{0, 0}, {2, 1}}), Error);
}

TEST_CASE("level-major node indexing") {
  CHECK(node_index(0, 0) == 0);
  CHECK(node_index(2, 3) == 6);
  for (std::size_t k = 0; k < 63; ++k) CHECK(node_index(node_at(k)) == k);
  CHECK_THROWS_AS(DyadicInterval(2, 4), Error);
  CHECK_THROWS_AS(Grid1D(0), Error);
  CHECK_THROWS_AS(Grid2D(1, 17), Error);
}
