#include <cmath>

#include "bipara/atoms.hpp"
#include "bipara/cells.hpp"
#include "bipara/error.hpp"
#include "bipara/functionals.hpp"
#include "bipara/haar.hpp"
#include "bipara/sparse.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bipara;
using doctest::Approx;

TEST_CASE("a single Haar function is one atom") {
  const Grid2D g(3, 3);
  const DyadicRectangle r{{1, 1}, {2, 1}};
  const auto f = haar_function(g, r);
  const auto d = atomic_decompose(f, 1.0, 2.0);
  REQUIRE(d.atoms.size() == 1);
  CHECK(d.atoms[0].valid());
  CHECK(is_subset(rect_mask(g, r), d.omegas[0]));
  CHECK(max_abs_difference(d.reconstruct().values(), f.values()) < 1e-12);
}

TEST_CASE("zero has the empty decomposition") {
  const auto d = atomic_decompose(Signal2D(Grid2D(2, 2)), 1.0, 2.0);
  CHECK(d.empty());
  CHECK(d.quasi_norm_sum() == 0.0);
}

TEST_CASE("random decompositions reconstruct the cc part and contract") {
  const Grid2D g(4, 4);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto f = oracle::random_signal(g, seed);
    const auto cc = haar_inverse_2d(haar_forward_2d(f).cancellative_part());
    for (auto [p, s] : {std::pair{1.0, 2.0}, {0.5, 2.0}, {2.0, 3.0}}) {
      const auto d = atomic_decompose(f, p, s);
      CHECK(max_abs_difference(d.reconstruct().values(), cc.values()) < 1e-10);
      CHECK_NOTHROW(validate_contracting(g, d.omegas));
      for (const auto& a : d.atoms) CHECK(a.valid());
      const double ratio = d.quasi_norm_sum() / norm(f, NormKind::hp_square(p));
      CHECK(ratio > 1e-2);
      CHECK(ratio < 1e2);
    }
  }
}

TEST_CASE("exponents are validated") {
  const auto f = oracle::random_signal(Grid2D(2, 2), 1);
  CHECK_THROWS_AS(atomic_decompose(f, 1.0, 1.0), Error);
  CHECK_THROWS_AS(atomic_decompose(f, 2.0, 2.0), Error);
  CHECK_THROWS_AS(atomic_decompose(f, 0.0, 2.0), Error);
}

TEST_CASE("images of atoms stay on the atom's support") {
  const Grid2D g(3, 3);
  const DyadicRectangle r{{1, 0}, {1, 1}};
  const auto d = atomic_decompose(haar_function(g, r), 1.0, 3.0);
  REQUIRE(d.atoms.size() == 1);
  for (auto tag : {OperatorTag::Pi3, OperatorTag::Pi4}) {
    const NamedOperator op(tag, AnySignal(oracle::random_signal(g, 9)));
    const auto rep = local_image_check(op, d.atoms[0], 2.0);
    CHECK(rep.support_contained);
    CHECK(rep.outside_max == 0.0);
  }
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto dec = atomic_decompose(oracle::random_signal(g, seed), 1.0, 3.0);
    const NamedOperator op(OperatorTag::Pi3, AnySignal(oracle::random_signal(g, 50 + seed)));
    for (const auto& a : dec.atoms) CHECK(local_image_check(op, a, 2.0).support_contained);
  }
}

TEST_CASE("zero atom has zero image") {
  const Grid2D g(2, 2);
  Atom a{full_mask(g), HaarCoeffs2D(g), 2.0};
  const auto rep = local_image_check(NamedOperator(OperatorTag::Pi4, AnySignal(oracle::random_signal(g, 1))), a, 1.5);
  CHECK(max_abs(rep.image.values()) == 0.0);
  CHECK(rep.ratio == 0.0);
}

TEST_CASE("local image check rejects bad inputs") {
  const Grid2D g(2, 2);
  Atom a{full_mask(g), HaarCoeffs2D(g), 2.0};
  const NamedOperator pi3(OperatorTag::Pi3, AnySignal(Signal2D(g)));
  CHECK_THROWS_AS(local_image_check(pi3, a, 2.0), Error);
  CHECK_THROWS_AS(local_image_check(pi3, a, 1.0), Error);
  CHECK_THROWS_AS(local_image_check(NamedOperator(OperatorTag::Pi2, AnySignal(Signal2D(g))), a, 1.5), Error);
}
