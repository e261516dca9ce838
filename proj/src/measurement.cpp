#include "ming/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ming/errors.hpp"

namespace ming {

namespace {

constexpr double kIdentityTolerance = 1e-12;
constexpr double kMinProbability = 1e-15;

Eigen::VectorXcd basis_vector(int dim, int k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(k) = 1.0;
  return v;
}

void require_normalized(const Eigen::VectorXcd& state, int dim) {
  if (state.size() != dim) throw std::invalid_argument("state dimension does not match observable");
  const double norm = state.norm();
  if (std::abs(norm - 1.0) > 1e-9) throw NotNormalized(norm);
}

}  // namespace

Observable::Observable(int dimension, std::vector<Eigenpair> eigenpairs)
    : dimension_(dimension), eigenpairs_(std::move(eigenpairs)) {
  if (dimension < 1) throw IllFormedObservable("dimension must be positive");
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dimension, dimension);
  Eigen::Index columns = 0;
  for (std::size_t k = 0; k < eigenpairs_.size(); ++k) {
    const auto& b = eigenpairs_[k].basis;
    if (b.rows() != dimension || b.cols() == 0) {
      throw IllFormedObservable("eigenspace basis has the wrong shape");
    }
    const Eigen::MatrixXcd gram = b.adjoint() * b;
    if ((gram - Eigen::MatrixXcd::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff() >
        kIdentityTolerance) {
      throw IllFormedObservable("eigenspace basis is not orthonormal");
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (eigenpairs_[j].eigenvalue == eigenpairs_[k].eigenvalue) {
        throw IllFormedObservable("eigenvalues must be distinct across eigenpairs");
      }
    }
    sum += b * b.adjoint();
    columns += b.cols();
  }
  if (columns != dimension ||
      (sum - Eigen::MatrixXcd::Identity(dimension, dimension)).cwiseAbs().maxCoeff() >
          kIdentityTolerance) {
    throw IllFormedObservable("eigenspaces do not resolve the identity");
  }
}

Observable Observable::from_eigenvectors(
    int dimension, const std::vector<std::pair<double, Eigen::VectorXcd>>& pairs) {
  std::vector<Eigenpair> grouped;
  for (const auto& [value, vec] : pairs) {
    auto it = std::find_if(grouped.begin(), grouped.end(),
                           [&](const Eigenpair& e) { return e.eigenvalue == value; });
    if (it == grouped.end()) {
      grouped.push_back({value, vec});
    } else {
      Eigen::MatrixXcd wider(it->basis.rows(), it->basis.cols() + 1);
      wider << it->basis, vec;
      it->basis = std::move(wider);
    }
  }
  return Observable(dimension, std::move(grouped));
}

Eigen::MatrixXcd Observable::projector(std::size_t k) const {
  const auto& b = eigenpairs_.at(k).basis;
  return b * b.adjoint();
}

Eigen::MatrixXcd Observable::matrix() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dimension_, dimension_);
  for (std::size_t k = 0; k < eigenpairs_.size(); ++k) {
    m += eigenpairs_[k].eigenvalue * projector(k);
  }
  return m;
}

double Observable::expectation(const Eigen::VectorXcd& state) const {
  require_normalized(state, dimension_);
  double e = 0.0;
  for (const auto& pair : eigenpairs_) {
    e += pair.eigenvalue * (pair.basis.adjoint() * state).squaredNorm();
  }
  return e;
}

std::vector<MeasurementOutcome> measure(const Eigen::VectorXcd& state, const Observable& obs) {
  require_normalized(state, obs.dimension());
  std::vector<MeasurementOutcome> out;
  for (const auto& pair : obs.eigenpairs()) {
    const Eigen::VectorXcd coeffs = pair.basis.adjoint() * state;
    const double p = coeffs.squaredNorm();
    if (p < kMinProbability) continue;
    out.push_back({pair.eigenvalue, p, (pair.basis * coeffs) / std::sqrt(p)});
  }
  return out;
}

double expectation_after(const std::vector<MeasurementOutcome>& outcomes, const Observable& obs) {
  double e = 0.0;
  for (const auto& o : outcomes) e += o.probability * obs.expectation(o.post_state);
  return e;
}

Eigen::VectorXcd paradox_state() {
  Eigen::VectorXcd psi = basis_vector(4, 0) + basis_vector(4, 1);
  return psi / std::sqrt(2.0);
}

Observable first_spin_observable(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be >= 0");
  return Observable::from_eigenvectors(4, {{1.0 + eps, basis_vector(4, 0)},
                                           {1.0 - eps, basis_vector(4, 1)},
                                           {0.0, basis_vector(4, 2)},
                                           {0.0, basis_vector(4, 3)}});
}

Observable witness_observable() {
  const Eigen::VectorXcd plus = paradox_state();
  const Eigen::VectorXcd minus = (basis_vector(4, 0) - basis_vector(4, 1)) / std::sqrt(2.0);
  return Observable::from_eigenvectors(
      4, {{1.0, plus}, {0.0, minus}, {0.0, basis_vector(4, 2)}, {0.0, basis_vector(4, 3)}});
}

std::vector<ParadoxRow> paradox_scan(const std::vector<double>& eps_grid) {
  const bool has_zero = std::find(eps_grid.begin(), eps_grid.end(), 0.0) != eps_grid.end();
  const auto positives = std::count_if(eps_grid.begin(), eps_grid.end(), [](double e) { return e > 0.0; });
  if (!has_zero || positives < 2) {
    throw std::invalid_argument("eps grid must contain 0 and at least two positive values");
  }
  const Eigen::VectorXcd psi = paradox_state();
  const Observable witness = witness_observable();
  std::vector<ParadoxRow> rows;
  for (double eps : eps_grid) {
    ParadoxRow row;
    row.eps = eps;
    row.outcomes = measure(psi, first_spin_observable(eps));
    row.expectation_r = expectation_after(row.outcomes, witness);
    rows.push_back(std::move(row));
  }
  return rows;
}

double SmoothingModel::operator()(double eps) const {
  if (!(width > 0.0)) throw std::invalid_argument("smoothing width must be positive");
  if (!(eps >= 0.0)) throw std::invalid_argument("eps must be >= 0");
  return 0.5 + 1.0 / (1.0 + std::exp(steepness * eps / width));
}

std::vector<std::pair<double, double>> smoothing_scan(const std::vector<double>& eps_grid,
                                                      const SmoothingModel& model) {
  std::vector<std::pair<double, double>> out;
  out.reserve(eps_grid.size());
  for (double eps : eps_grid) out.emplace_back(eps, model(eps));
  return out;
}

double sampled_expectation_after(const Eigen::VectorXcd& state, const Observable& measured,
                                 const Observable& witness, long samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const auto first = measure(state, measured);
  std::vector<double> p_first;
  std::vector<std::vector<MeasurementOutcome>> second;
  std::vector<std::discrete_distribution<std::size_t>> second_dist;
  for (const auto& o : first) {
    p_first.push_back(o.probability);
    second.push_back(measure(o.post_state, witness));
    std::vector<double> w;
    for (const auto& s : second.back()) w.push_back(s.probability);
    second_dist.emplace_back(w.begin(), w.end());
  }
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick_first(p_first.begin(), p_first.end());
  double sum = 0.0;
  for (long k = 0; k < samples; ++k) {
    const std::size_t a = pick_first(rng);
    const std::size_t b = second_dist[a](rng);
    sum += second[a][b].eigenvalue;
  }
  return sum / static_cast<double>(samples);
}

}  // namespace ming
