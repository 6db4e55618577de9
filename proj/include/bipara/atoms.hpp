#pragma once

#include <vector>

#include "bipara/cells.hpp"
#include "bipara/haar.hpp"
#include "bipara/paraproducts.hpp"

namespace bipara {

/// cc-only coefficients on rectangles inside `support`, with ||signal||_s <= |support|^{1/s}.
struct Atom {
  CellMask support;
  HaarCoeffs2D coeffs;
  double s = 2.0;

  Signal2D signal() const { return haar_inverse_2d(coeffs); }
  /// Both atom conditions, the norm bound up to a relative slack.
  bool valid(double slack = 1e-12) const;
};

struct AtomicDecomposition {
  Grid2D grid;
  double p = 1.0;
  double s = 2.0;
  std::vector<CellMask> omegas;
  std::vector<double> scalars;
  std::vector<Atom> atoms;

  bool empty() const { return atoms.empty(); }
  /// sum_i a_i * atom_i.
  Signal2D reconstruct() const;
  /// (sum_i a_i^p |Omega_i|)^{1/p}.
  double quasi_norm_sum() const;
};

/// Superlevel sets {S(f) > 2^k}, thinned so each kept set has at most half
/// the measure of the previous one; each rectangle's coefficient goes to the
/// last kept set containing it. Requires s > max(1, p).
AtomicDecomposition atomic_decompose(const Signal2D& f, double p, double s);

struct LocalImageReport {
  bool support_contained = true;
  double outside_max = 0.0;  // max |image| on cells outside the support
  double ratio = 0.0;        // ||image||_q / |support|^{1/q}
  Signal2D image;
};

/// Applies Pi3 or Pi4 to an atom and measures how far the image is from an L^q atom on the same set.
LocalImageReport local_image_check(const NamedOperator& op, const Atom& atom, double q);

}  // namespace bipara
