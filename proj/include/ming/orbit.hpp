#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ming/basis_index.hpp"

namespace ming {

/// Largest n for which decompose() enumerates all 2^n indices.
inline constexpr int kDecomposeCap = 20;

bool is_prime(long n);

/// One rotation cycle. Members are produced on demand: member(j) is the
/// representative rotated j times, so an orbit costs O(n) memory regardless
/// of how many members it has.
class Orbit {
 public:
  Orbit(BasisIndex representative, int length);

  /// Numerically minimal member.
  const BasisIndex& representative() const { return representative_; }
  int length() const { return length_; }
  int n() const { return representative_.size(); }

  BasisIndex member(long j) const;
  /// Materializes every member in rotation order; O(n * length) memory.
  std::vector<BasisIndex> members() const;

  friend bool operator==(const Orbit&, const Orbit&) = default;

 private:
  BasisIndex representative_;
  int length_;
};

/// An orbit together with the position of a particular member in it.
struct OrbitPosition {
  Orbit orbit;
  int position;
};

struct OrbitDecomposition {
  int n;
  /// Number of full orbits, (2^n - 2) / n.
  std::uint64_t q;
  /// Sorted by representative.
  std::vector<Orbit> orbits;
  /// The all-zeros and all-ones indices.
  std::array<BasisIndex, 2> fixed_points;
};

/// Partition of [0, 2^n) into rotation orbits. Throws NonPrimeN or
/// CapExceeded (n > kDecomposeCap).
OrbitDecomposition decompose(int n);

/// The rotation cycle through i, in O(n) time and memory. Throws
/// FixedPointInput for the all-zeros and all-ones indices.
Orbit orbit_of(const BasisIndex& i);

/// Like orbit_of, also reporting where i sits: orbit.member(position) == i.
OrbitPosition locate(const BasisIndex& i);

}  // namespace ming
