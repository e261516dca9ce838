#pragma once

#include <span>

namespace ming {

/// Largest n for which the dense cross-checks run.
inline constexpr int kDenseValidationCap = 12;

struct DenseCheckReport {
  int n = 0;
  /// max |A + A^*| over the dense block.
  double skew_hermitian_error = 0.0;
  /// max-norm distance between exp((2 pi / h) A) and the forward cycle.
  double cycle_error = 0.0;
  /// Whether every orbit of the full decomposition is closed under rotate in
  /// the order the generator cycles it.
  bool orbits_follow_rotation = false;
  /// max-norm distance between dense exp((2 pi t / h) A) and evolve_orbit
  /// over the requested times and all basis vectors.
  double evolve_error = 0.0;
  bool pass = false;
};

/// Builds the dense generator block from ming_entry, exponentiates it with a
/// Pade matrix exponential and compares against the bit rotation and the
/// spectral evolution. Requires prime n <= kDenseValidationCap.
DenseCheckReport dense_check(int n, std::span<const double> times, double tolerance = 1e-9);

}  // namespace ming
