#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ming {

/// An n-bit amplifier basis label |d_0 d_1 ... d_{n-1}>, where bit p is the
/// excitation of oscillator p and d_0 is the least significant bit.
///
/// Values are stored as packed 64-bit words so that n is not limited to the
/// width of a machine integer; the orbit machinery works for n in the tens of
/// thousands without ever touching the 2^n-dimensional space.
class BasisIndex {
 public:
  /// Index with all digits zero.
  explicit BasisIndex(int n);
  /// Requires n <= 64 and value < 2^n.
  BasisIndex(int n, std::uint64_t value);

  static BasisIndex zeros(int n) { return BasisIndex(n); }
  static BasisIndex ones(int n);
  /// Digit string in the order d_0 d_1 ... d_{n-1}, e.g. "11100" for 7 at n=5.
  static BasisIndex from_digits(std::string_view digits);

  int size() const { return n_; }
  bool bit(int p) const { return (words_[p >> 6] >> (p & 63)) & 1U; }
  void set_bit(int p, bool value);
  int popcount() const;

  bool fits_u64() const { return n_ <= 64; }
  /// Numeric value; throws std::out_of_range when n > 64.
  std::uint64_t to_u64() const;

  bool is_zero() const;
  bool is_all_ones() const;
  bool is_fixed_point() const { return is_zero() || is_all_ones(); }

  std::string digits() const;
  /// Decimal value when it fits in 64 bits, otherwise the digit string.
  std::string to_string() const;

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
  /// Numeric order; only meaningful between indices of equal size.
  friend std::strong_ordering operator<=>(const BasisIndex& a, const BasisIndex& b);

 private:
  friend BasisIndex rotate(const BasisIndex& i);

  void check_position(int p) const;

  int n_;
  std::vector<std::uint64_t> words_;
};

/// One step of the Ming cycle: d'_0 = d_{n-1}, d'_p = d_{p-1}. Numerically this
/// is value -> 2*value mod (2^n - 1), with 0 and 2^n - 1 fixed.
BasisIndex rotate(const BasisIndex& i);

/// rotate applied r times (r may be negative), in O(n).
BasisIndex rotate_by(const BasisIndex& i, long r);

}  // namespace ming
