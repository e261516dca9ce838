#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ming {

/// One eigenvalue and an orthonormal basis (as columns) of its eigenspace.
struct Eigenpair {
  double eigenvalue = 0.0;
  Eigen::MatrixXcd basis;
};

/// A self-adjoint operator on a finite-dimensional space given by its
/// spectral resolution. Degeneracy is carried by eigenspace dimension.
class Observable {
 public:
  /// Throws IllFormedObservable unless the eigenspaces are orthonormal,
  /// resolve the identity to 1e-12 and carry distinct eigenvalues.
  Observable(int dimension, std::vector<Eigenpair> eigenpairs);

  /// Groups (eigenvalue, eigenvector) pairs, merging exactly equal eigenvalues
  /// into one eigenspace.
  static Observable from_eigenvectors(int dimension,
                                      const std::vector<std::pair<double, Eigen::VectorXcd>>& pairs);

  int dimension() const { return dimension_; }
  const std::vector<Eigenpair>& eigenpairs() const { return eigenpairs_; }

  Eigen::MatrixXcd projector(std::size_t k) const;
  Eigen::MatrixXcd matrix() const;
  /// <psi| Q |psi> for a normalized psi.
  double expectation(const Eigen::VectorXcd& state) const;

 private:
  int dimension_;
  std::vector<Eigenpair> eigenpairs_;
};

struct MeasurementOutcome {
  double eigenvalue = 0.0;
  double probability = 0.0;
  Eigen::VectorXcd post_state;
};

/// Born probabilities and Lüders reduction: one outcome per eigenvalue whose
/// projection has probability >= 1e-15, with the renormalized projection as
/// post-measurement state.
std::vector<MeasurementOutcome> measure(const Eigen::VectorXcd& state, const Observable& obs);

/// Outcome-weighted expectation of `obs` over the post-measurement ensemble.
double expectation_after(const std::vector<MeasurementOutcome>& outcomes, const Observable& obs);

// ---------------------------------------------------------------------------
// Two distinguishable spins, basis |uu>, |ud>, |du>, |dd> (first spin first).

/// (|uu> + |ud>) / sqrt(2).
Eigen::VectorXcd paradox_state();

/// Perturbed first-spin observable: 1 + eps on |uu>, 1 - eps on |ud>, 0 on the
/// spin-down subspace. eps = 0 gives the degenerate first-spin observable.
Observable first_spin_observable(double eps = 0.0);

/// Eigenvalue 1 on (|uu> + |ud>)/sqrt(2); 0 on (|uu> - |ud>)/sqrt(2) and on
/// the spin-down subspace.
Observable witness_observable();

struct ParadoxRow {
  double eps = 0.0;
  std::vector<MeasurementOutcome> outcomes;
  /// Expectation of the witness after measuring the perturbed observable.
  double expectation_r = 0.0;
};

/// Requires eps = 0 and at least two positive values in the grid; negative
/// values are rejected.
std::vector<ParadoxRow> paradox_scan(const std::vector<double>& eps_grid);

/// Illustrative smoothing of the paradox step. Logistic blend in eps / width:
///   value(eps) = 1/2 + 1 / (1 + exp(steepness * eps / width)),
/// equal to 1 at eps = 0, decreasing to 1/2, and tending to the sharp step as
/// width -> 0. Not derived from any dynamics.
struct SmoothingModel {
  double width = 0.01;
  double steepness = 4.0;

  static constexpr std::string_view kDescription =
      "illustrative logistic blend 1/2 + 1/(1+exp(k*eps/w)); not derived from a dynamical model";

  double operator()(double eps) const;
};

std::vector<std::pair<double, double>> smoothing_scan(const std::vector<double>& eps_grid,
                                                      const SmoothingModel& model);

/// Monte Carlo estimate of expectation_after(measure(state, measured), witness):
/// samples an outcome of `measured`, then an outcome of `witness` on the
/// reduced state, and averages the witness eigenvalues. Deterministic for a
/// fixed seed.
double sampled_expectation_after(const Eigen::VectorXcd& state, const Observable& measured,
                                 const Observable& witness, long samples, std::uint64_t seed);

}  // namespace ming
