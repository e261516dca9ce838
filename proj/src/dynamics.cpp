#include "ming/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dft.hpp"

namespace ming {

using std::numbers::pi;

PhysicalScale::PhysicalScale(double h0, int n) : h0_(h0), n_(n) {
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw std::invalid_argument("h0 must be positive");
  if (n < 1) throw std::invalid_argument("n must be positive");
}

cdouble ming_entry(int row, int col, int n, const PhysicalScale& scale) {
  if (row < 0 || col < 0 || row >= n || col >= n) {
    throw std::out_of_range("generator entry outside the block");
  }
  const double h = scale.h();
  const double nn = n;
  if (row == col) return {0.0, h * (nn - 1.0) / (2.0 * nn)};
  const int m = row - col;
  const double cot = 1.0 / std::tan(pi * m / nn);
  return {-h * cot / (2.0 * nn), -h / (2.0 * nn)};
}

MingBlock::MingBlock(Orbit orbit, PhysicalScale scale)
    : orbit_(std::move(orbit)), scale_(scale) {}

cdouble MingBlock::entry(int row, int col) const {
  return ming_entry(row, col, size(), scale_);
}

Eigen::MatrixXcd MingBlock::dense() const {
  const int n = size();
  Eigen::MatrixXcd a(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a(r, c) = entry(r, c);
  }
  return a;
}

std::vector<cdouble> MingBlock::evolve(std::span<const cdouble> amplitudes, double t) const {
  if (static_cast<int>(amplitudes.size()) != size()) {
    throw std::invalid_argument("amplitude vector does not match the orbit length");
  }
  return evolve_orbit(amplitudes, t);
}

std::vector<cdouble> evolve_orbit(std::span<const cdouble> amplitudes, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("evolution time must be finite");
  const auto n = static_cast<long>(amplitudes.size());
  std::vector<cdouble> out(amplitudes.begin(), amplitudes.end());
  if (n <= 1) return out;

  // Integer times are exact shifts.
  if (t == std::floor(t) && std::abs(t) < 9.0e15) {
    long shift = static_cast<long>(std::fmod(t, static_cast<double>(n)));
    if (shift < 0) shift += n;
    for (long j = 0; j < n; ++j) out[static_cast<std::size_t>((j + shift) % n)] =
        amplitudes[static_cast<std::size_t>(j)];
    return out;
  }

  // Mode k of the forward cycle is u_k[j] = exp(-2 pi i j k / n) / sqrt(n) with
  // eigenvalue exp(2 pi i k / n), so projecting onto the modes is a backward DFT.
  detail::dft_inplace(out, detail::DftSign::backward);
  const double tau = std::fmod(t, static_cast<double>(n));
  const double inv_n = 1.0 / static_cast<double>(n);
  for (long k = 0; k < n; ++k) {
    const double turns = std::fmod(static_cast<double>(k) * tau, static_cast<double>(n)) * inv_n;
    out[static_cast<std::size_t>(k)] *= std::polar(inv_n, 2.0 * pi * turns);
  }
  detail::dft_inplace(out, detail::DftSign::forward);
  return out;
}

double BranchState::norm_squared() const {
  double s = std::norm(all_zeros) + std::norm(all_ones);
  for (const auto& o : orbits) {
    for (const auto& a : o.amplitudes) s += std::norm(a);
  }
  return s;
}

cdouble BranchState::amplitude(const BasisIndex& i) const {
  if (i.is_zero()) return all_zeros;
  if (i.is_all_ones()) return all_ones;
  const auto where = locate(i);
  for (const auto& o : orbits) {
    if (o.orbit == where.orbit) return o.amplitudes[static_cast<std::size_t>(where.position)];
  }
  return {};
}

BranchState BranchState::basis(const BasisIndex& i) {
  BranchState b;
  if (i.is_zero()) {
    b.all_zeros = 1.0;
  } else if (i.is_all_ones()) {
    b.all_ones = 1.0;
  } else {
    auto where = locate(i);
    std::vector<cdouble> amps(static_cast<std::size_t>(where.orbit.length()));
    amps[static_cast<std::size_t>(where.position)] = 1.0;
    b.orbits.push_back({std::move(where.orbit), std::move(amps)});
  }
  return b;
}

CombinedState CombinedState::prepared(cdouble a0, cdouble a1, const BasisIndex& apparatus) {
  CombinedState s;
  s.n = apparatus.size();
  s.a0 = a0;
  s.a1 = a1;
  s.branch0 = BranchState::basis(apparatus);
  s.branch1 = s.branch0;
  return s;
}

double CombinedState::norm() const {
  return std::sqrt(std::norm(a0) * branch0.norm_squared() +
                   std::norm(a1) * branch1.norm_squared());
}

cdouble CombinedState::amplitude(int eps, const BasisIndex& i) const {
  if (eps == 0) return a0 * branch0.amplitude(i);
  if (eps == 1) return a1 * branch1.amplitude(i);
  throw std::invalid_argument("particle label must be 0 or 1");
}

CombinedState evolve_combined(const CombinedState& state, double t,
                              const DynamicsOptions& options) {
  CombinedState out = state;
  for (auto& o : out.branch1.orbits) o.amplitudes = evolve_orbit(o.amplitudes, t);
  if (options.idle_phase_rate != 0.0) {
    const cdouble phase = std::polar(1.0, -options.idle_phase_rate * t);
    out.branch0.all_zeros *= phase;
    out.branch0.all_ones *= phase;
    for (auto& o : out.branch0.orbits) {
      for (auto& a : o.amplitudes) a *= phase;
    }
  }
  return out;
}

}  // namespace ming
