#include "ming/validation.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "ming/dynamics.hpp"
#include "ming/errors.hpp"
#include "ming/orbit.hpp"

namespace ming {

DenseCheckReport dense_check(int n, std::span<const double> times, double tolerance) {
  if (!is_prime(n)) throw NonPrimeN(n);
  if (n > kDenseValidationCap) throw CapExceeded(n, kDenseValidationCap);

  DenseCheckReport r;
  r.n = n;
  const auto decomposition = decompose(n);
  const PhysicalScale scale(1.0, n);
  const MingBlock block(decomposition.orbits.front(), scale);
  const Eigen::MatrixXcd a = block.dense();
  r.skew_hermitian_error = (a + a.adjoint()).cwiseAbs().maxCoeff();

  const double rate = 2.0 * std::numbers::pi / scale.h();
  Eigen::MatrixXcd cycle = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) cycle((j + 1) % n, j) = 1.0;
  const Eigen::MatrixXcd unit_step = (rate * a).exp();
  r.cycle_error = (unit_step - cycle).cwiseAbs().maxCoeff();

  r.orbits_follow_rotation = std::all_of(
      decomposition.orbits.begin(), decomposition.orbits.end(), [](const Orbit& o) {
        const auto members = o.members();
        for (std::size_t j = 0; j < members.size(); ++j) {
          if (rotate(members[j]) != members[(j + 1) % members.size()]) return false;
        }
        return true;
      });

  for (double t : times) {
    const Eigen::MatrixXcd u = (rate * t * a).exp();
    for (int j = 0; j < n; ++j) {
      std::vector<cdouble> e(static_cast<std::size_t>(n));
      e[static_cast<std::size_t>(j)] = 1.0;
      const auto evolved = block.evolve(e, t);
      for (int k = 0; k < n; ++k) {
        r.evolve_error = std::max(r.evolve_error, std::abs(evolved[static_cast<std::size_t>(k)] - u(k, j)));
      }
    }
  }
  r.pass = r.skew_hermitian_error <= tolerance && r.cycle_error <= tolerance &&
           r.orbits_follow_rotation && r.evolve_error <= tolerance;
  return r;
}

}  // namespace ming
