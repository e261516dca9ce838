#include "ming/orbit.hpp"

#include <stdexcept>

#include "ming/errors.hpp"

namespace ming {

namespace {

// Digits read from the most significant end, so that lexicographic order on
// strings is numeric order on indices and rotate_by(i, r) is a left shift by r.
std::vector<unsigned char> msb_first(const BasisIndex& i) {
  const int n = i.size();
  std::vector<unsigned char> s(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = i.bit(n - 1 - k);
  return s;
}

// Booth's least-rotation algorithm.
std::size_t least_rotation(const std::vector<unsigned char>& s) {
  const std::size_t n = s.size();
  auto at = [&](std::size_t j) { return s[j % n]; };
  std::vector<long> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const unsigned char sj = at(j);
    long i = f[j - k - 1];
    while (i != -1 && sj != at(k + static_cast<std::size_t>(i) + 1)) {
      if (sj < at(k + static_cast<std::size_t>(i) + 1)) k = j - static_cast<std::size_t>(i) - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (sj != at(k + static_cast<std::size_t>(i + 1))) {
      if (sj < at(k)) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k % n;
}

// Smallest cyclic period via the prefix function.
int cyclic_period(const std::vector<unsigned char>& s) {
  const std::size_t n = s.size();
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t q = 1; q < n; ++q) {
    std::size_t k = pi[q - 1];
    while (k > 0 && s[q] != s[k]) k = pi[k - 1];
    if (s[q] == s[k]) ++k;
    pi[q] = k;
  }
  const std::size_t p = n - pi[n - 1];
  return static_cast<int>(n % p == 0 ? p : n);
}

}  // namespace

bool is_prime(long n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (long d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

Orbit::Orbit(BasisIndex representative, int length)
    : representative_(std::move(representative)), length_(length) {
  if (length < 1) throw std::invalid_argument("orbit length must be positive");
}

BasisIndex Orbit::member(long j) const {
  j %= length_;
  if (j < 0) j += length_;
  return rotate_by(representative_, j);
}

std::vector<BasisIndex> Orbit::members() const {
  std::vector<BasisIndex> out;
  out.reserve(static_cast<std::size_t>(length_));
  BasisIndex cur = representative_;
  for (int j = 0; j < length_; ++j) {
    out.push_back(cur);
    cur = rotate(cur);
  }
  return out;
}

OrbitDecomposition decompose(int n) {
  if (!is_prime(n)) throw NonPrimeN(n);
  if (n > kDecomposeCap) throw CapExceeded(n, kDecomposeCap);

  const std::uint64_t modulus = (std::uint64_t{1} << n) - 1;
  std::vector<bool> seen(modulus + 1, false);
  OrbitDecomposition out{n, (modulus - 1) / static_cast<std::uint64_t>(n), {},
                         {BasisIndex::zeros(n), BasisIndex::ones(n)}};
  out.orbits.reserve(out.q);
  // Ascending scan: the first unseen value of an orbit is its minimum.
  for (std::uint64_t v = 1; v < modulus; ++v) {
    if (seen[v]) continue;
    int length = 0;
    std::uint64_t w = v;
    do {
      seen[w] = true;
      w = (2 * w) % modulus;
      ++length;
    } while (w != v);
    out.orbits.emplace_back(BasisIndex(n, v), length);
  }
  return out;
}

OrbitPosition locate(const BasisIndex& i) {
  if (i.is_fixed_point()) throw FixedPointInput();
  const auto s = msb_first(i);
  const auto shift = static_cast<long>(least_rotation(s));
  const int length = cyclic_period(s);
  BasisIndex rep = rotate_by(i, shift);
  const long pos = ((i.size() - shift) % length + length) % length;
  return {Orbit(std::move(rep), length), static_cast<int>(pos)};
}

Orbit orbit_of(const BasisIndex& i) { return locate(i).orbit; }

}  // namespace ming
