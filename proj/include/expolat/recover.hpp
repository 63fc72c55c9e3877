#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "expolat/diffops.hpp"
#include "expolat/exppoly.hpp"

namespace expolat {

struct RecoveryConfig {
  /// Upper bound on the annihilator degree per direction.
  unsigned max_order = 8;
  /// Relative singular-value threshold for kernel detection.
  double rank_tol = 1e-9;
  /// Roots closer than this are treated as one root.
  double cluster_tol = 1e-6;
  /// Acceptance threshold for the reconstruction residual.
  double residual_tol = 1e-8;
  /// Snap witnesses and coefficients to nearby Gaussian rationals and
  /// re-verify exactly when the samples are exact.
  bool exact_lift = false;

  /// Throws invalid_argument unless tolerances are positive and max_order >= 1.
  void validate() const;
};

/// Monic q(z) = sum_k coeffs[k] z^k; degree 0 (q = 1) means everything is
/// annihilated.
struct Annihilator {
  std::vector<Complex> coeffs{Complex(1.0)};

  std::size_t degree() const { return coeffs.size() - 1; }
  Complex operator()(Complex z) const;
};

struct Root {
  Complex value;
  unsigned multiplicity = 1;
};

/// Minimal-degree monic q with q(S_h) s = 0 on every sampled chain along
/// direction h, where S_h is the shift by h. Rows of the stacked Hankel
/// system are normalized before the kernel test.
///
/// Requires the longest chain x, x+h, ... inside the box to have at least
/// 2*max_order + 1 points (insufficient_box otherwise); throws
/// no_annihilator if no kernel appears up to max_order.
Annihilator direction_annihilator(const SampledFunction& s, const LatticePoint& direction, const RecoveryConfig& cfg);

/// direction_annihilator along a coordinate axis.
Annihilator section_annihilator(const SampledFunction& s, std::size_t axis, const RecoveryConfig& cfg);

/// Companion-matrix eigenvalues of q grouped into roots with multiplicities.
/// A group of m eigenvalues is merged when all lie within
/// max(cluster_tol, rank_tol^(1/m) * max(1, |centre|)) of their centre;
/// merged centres are polished by Newton steps on q^(m-1). Output is sorted
/// by (re, im).
std::vector<Root> annihilator_roots(const Annihilator& q, const RecoveryConfig& cfg);

/// Splits s into per-root components along `axis` using the partial-fraction
/// projectors u_j(S) prod_{i != j} (S - r_i)^{m_i}. Components live on the
/// box shrunk by (deg q - 1) along the axis. A single root returns [s].
std::vector<SampledFunction> split_spectrum(const SampledFunction& s, std::size_t axis, const std::vector<Root>& roots,
                                            const RecoveryConfig& cfg);

struct AxisSpectrum {
  std::size_t axis = 0;
  std::vector<Root> roots;
};

struct Decomposition {
  /// Float-backend result.
  ExpPoly result;
  std::vector<AxisSpectrum> spectra;
  /// max |result - s| / max(1, max |s|) over the sample box.
  double residual = 0.0;
  /// max |result - s| over the sample box.
  double abs_residual = 0.0;
  bool success = false;
  /// Set when the exact lift was requested and re-verified.
  std::optional<ExpPoly> exact_result;
  std::vector<std::string> flags;
};

/// Decomposes samples into an exponential polynomial.
Decomposition recover(const SampledFunction& s, const RecoveryConfig& cfg);

}  // namespace expolat
