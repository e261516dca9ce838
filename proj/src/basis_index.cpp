#include "ming/basis_index.hpp"

#include <bit>
#include <stdexcept>

namespace ming {

namespace {

std::size_t word_count(int n) { return static_cast<std::size_t>((n + 63) / 64); }

std::uint64_t top_mask(int n) {
  const int used = n & 63;
  return used == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << used) - 1;
}

}  // namespace

BasisIndex::BasisIndex(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("BasisIndex needs n >= 1");
  words_.assign(word_count(n), 0);
}

BasisIndex::BasisIndex(int n, std::uint64_t value) : BasisIndex(n) {
  if (n > 64) throw std::invalid_argument("integer construction needs n <= 64");
  if (n < 64 && (value >> n) != 0) {
    throw std::out_of_range("value " + std::to_string(value) + " does not fit in " +
                            std::to_string(n) + " digits");
  }
  words_[0] = value;
}

BasisIndex BasisIndex::ones(int n) {
  BasisIndex out(n);
  for (auto& w : out.words_) w = ~std::uint64_t{0};
  out.words_.back() &= top_mask(n);
  return out;
}

BasisIndex BasisIndex::from_digits(std::string_view digits) {
  BasisIndex out(static_cast<int>(digits.size()));
  for (std::size_t p = 0; p < digits.size(); ++p) {
    if (digits[p] == '1') {
      out.set_bit(static_cast<int>(p), true);
    } else if (digits[p] != '0') {
      throw std::invalid_argument("digit string may only contain 0 and 1");
    }
  }
  return out;
}

void BasisIndex::check_position(int p) const {
  if (p < 0 || p >= n_) throw std::out_of_range("digit position out of range");
}

void BasisIndex::set_bit(int p, bool value) {
  check_position(p);
  const std::uint64_t m = std::uint64_t{1} << (p & 63);
  if (value) {
    words_[p >> 6] |= m;
  } else {
    words_[p >> 6] &= ~m;
  }
}

int BasisIndex::popcount() const {
  int c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

std::uint64_t BasisIndex::to_u64() const {
  if (!fits_u64()) throw std::out_of_range("index has more than 64 digits");
  return words_[0];
}

bool BasisIndex::is_zero() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

bool BasisIndex::is_all_ones() const { return popcount() == n_; }

std::string BasisIndex::digits() const {
  std::string s(static_cast<std::size_t>(n_), '0');
  for (int p = 0; p < n_; ++p) {
    if (bit(p)) s[static_cast<std::size_t>(p)] = '1';
  }
  return s;
}

std::string BasisIndex::to_string() const {
  return fits_u64() ? std::to_string(words_[0]) : digits();
}

std::strong_ordering operator<=>(const BasisIndex& a, const BasisIndex& b) {
  if (a.n_ != b.n_) return a.n_ <=> b.n_;
  for (std::size_t k = a.words_.size(); k-- > 0;) {
    if (a.words_[k] != b.words_[k]) return a.words_[k] <=> b.words_[k];
  }
  return std::strong_ordering::equal;
}

BasisIndex rotate(const BasisIndex& i) {
  BasisIndex out(i.n_);
  const int n = i.n_;
  const bool wrap = i.bit(n - 1);
  std::uint64_t carry = 0;
  for (std::size_t k = 0; k < i.words_.size(); ++k) {
    const std::uint64_t w = i.words_[k];
    out.words_[k] = (w << 1) | carry;
    carry = w >> 63;
  }
  out.words_.back() &= top_mask(n);
  if (wrap) out.words_[0] |= 1U;
  return out;
}

BasisIndex rotate_by(const BasisIndex& i, long r) {
  const long n = i.size();
  r %= n;
  if (r < 0) r += n;
  if (r == 0) return i;
  if (r == 1) return rotate(i);
  BasisIndex out(i.size());
  for (long p = 0; p < n; ++p) {
    if (i.bit(static_cast<int>(p))) out.set_bit(static_cast<int>((p + r) % n), true);
  }
  return out;
}

}  // namespace ming
