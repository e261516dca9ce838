#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ming/basis_index.hpp"
#include "ming/orbit.hpp"

namespace ming {

using cdouble = std::complex<double>;

/// Planck's constant for an n-oscillator amplifier, rescaled as h(n) = h0 / n.
class PhysicalScale {
 public:
  PhysicalScale(double h0, int n);

  double h0() const { return h0_; }
  int n() const { return n_; }
  double h() const { return h0_ / n_; }

 private:
  double h0_;
  int n_;
};

/// Entry (row, col) of the Ming generator restricted to one orbit, written in
/// the orbit basis v_j = |b 2^j>. The generator is (h / 2pi) log P, where P is
/// the forward cycle v_j -> v_{j+1}, with the log branch that puts eigenvalue
/// i h k / n on Fourier mode k = 0..n-1:
///
///   A[r, c] = (i h / n^2) sum_k k exp(-2 pi i k (r - c) / n)
///
/// which sums to i h (n - 1) / (2n) on the diagonal and to
/// -(h / 2n) (cot(pi m / n) + i) with m = r - c elsewhere.
cdouble ming_entry(int row, int col, int n, const PhysicalScale& scale);

/// The Ming generator on the span of one orbit. Entries are computed on demand.
class MingBlock {
 public:
  MingBlock(Orbit orbit, PhysicalScale scale);

  const Orbit& orbit() const { return orbit_; }
  int size() const { return orbit_.length(); }
  const PhysicalScale& scale() const { return scale_; }

  cdouble entry(int row, int col) const;
  /// Dense matrix; intended for validation at small n.
  Eigen::MatrixXcd dense() const;

  /// exp((2 pi t / h) A) applied to amplitudes on this orbit. The factor h in
  /// A cancels against 2 pi / h, so the result does not depend on the scale.
  std::vector<cdouble> evolve(std::span<const cdouble> amplitudes, double t) const;

 private:
  Orbit orbit_;
  PhysicalScale scale_;
};

/// Spectral evolution of one orbit block: F diag(exp(2 pi i k t / n)) F* v,
/// with F the unitary DFT of length n = amplitudes.size(). Unitary for every
/// real t and periodic in t with period n; at t = 1 it shifts position j to j+1.
std::vector<cdouble> evolve_orbit(std::span<const cdouble> amplitudes, double t);

/// Amplitudes of one orbit in the orbit's rotation order.
struct OrbitAmplitudes {
  Orbit orbit;
  std::vector<cdouble> amplitudes;
};

/// An amplifier wave function supported on explicitly tracked orbits and the
/// two fixed points.
struct BranchState {
  std::vector<OrbitAmplitudes> orbits;
  cdouble all_zeros{};
  cdouble all_ones{};

  double norm_squared() const;
  /// Zero for indices on untracked orbits.
  cdouble amplitude(const BasisIndex& i) const;

  static BranchState basis(const BasisIndex& i);
};

/// A state of the particle + amplifier system,
///   a0 psi_0 (x) branch0 + a1 psi_1 (x) branch1.
/// branch1 evolves under the Ming generator, branch0 is idle.
struct CombinedState {
  int n = 0;
  cdouble a0{};
  cdouble a1{};
  BranchState branch0;
  BranchState branch1;

  /// (a0 psi_0 + a1 psi_1) (x) |apparatus>.
  static CombinedState prepared(cdouble a0, cdouble a1, const BasisIndex& apparatus);

  double norm() const;
  /// Amplitude of psi_eps (x) |i>.
  cdouble amplitude(int eps, const BasisIndex& i) const;
};

struct DynamicsOptions {
  /// Constant phase rate on the idle branch: branch0 picks up exp(-i rate t).
  /// Pointer statistics do not depend on it.
  double idle_phase_rate = 0.0;
};

CombinedState evolve_combined(const CombinedState& state, double t,
                              const DynamicsOptions& options = {});

}  // namespace ming
