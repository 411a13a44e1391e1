#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dualhash {

// Thrown on any dimension / length disagreement between operands.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Packed bit string over F2.
//
// Bit i lives in word i/64 at position i%64. Storage past size() is always
// zero, so word-level operations (xor, popcount, equality) need no masking.
// Serialized form is little-endian bytes, LSB-first within each byte.
class BitVector {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t len) : len_(len), words_(word_count(len), 0) {}

  static std::size_t word_count(std::size_t len) { return (len + word_bits - 1) / word_bits; }

  static BitVector from_bits(std::initializer_list<int> bits) {
    BitVector v(bits.size());
    std::size_t i = 0;
    for (int b : bits) v.set(i++, b != 0);
    return v;
  }

  static BitVector ones(std::size_t len) {
    BitVector v(len);
    for (auto& w : v.words_) w = ~word_type{0};
    v.clear_tail();
    return v;
  }

  // Low `len` bits of `value`, bit 0 first.
  static BitVector from_uint(std::uint64_t value, std::size_t len) {
    if (len > word_bits) throw dimension_error("from_uint: len > 64");
    BitVector v(len);
    if (len) v.words_[0] = len == word_bits ? value : (value & ((word_type{1} << len) - 1));
    return v;
  }

  static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t len) {
    if (bytes.size() * 8 < len) throw dimension_error("from_bytes: not enough bytes for requested length");
    BitVector v(len);
    for (std::size_t i = 0; i < (len + 7) / 8; ++i)
      v.words_[i / 8] |= word_type{bytes[i]} << (8 * (i % 8));
    v.clear_tail();
    return v;
  }

  // Hex digits encode bytes in stream order ("0f" -> byte 0x0f -> bits 1,1,1,1,0,0,0,0).
  static BitVector from_hex(std::string_view hex, std::size_t len) {
    if (hex.size() % 2) throw std::invalid_argument("from_hex: odd number of hex digits");
    std::vector<std::uint8_t> bytes(hex.size() / 2);
    auto nibble = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      throw std::invalid_argument("from_hex: invalid hex digit");
    };
    for (std::size_t i = 0; i < bytes.size(); ++i)
      bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return from_bytes(bytes, len);
  }

  template <class URBG>
  static BitVector random(std::size_t len, URBG& gen) {
    BitVector v(len);
    std::uniform_int_distribution<word_type> dist;
    for (auto& w : v.words_) w = dist(gen);
    v.clear_tail();
    return v;
  }

  std::size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }

  bool get(std::size_t i) const { return (words_[i / word_bits] >> (i % word_bits)) & 1U; }
  bool operator[](std::size_t i) const { return get(i); }
  void set(std::size_t i, bool b = true) {
    const word_type mask = word_type{1} << (i % word_bits);
    if (b)
      words_[i / word_bits] |= mask;
    else
      words_[i / word_bits] &= ~mask;
  }
  void flip(std::size_t i) { words_[i / word_bits] ^= word_type{1} << (i % word_bits); }

  std::span<const word_type> words() const { return words_; }
  std::span<word_type> words() { return words_; }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool parity() const {
    word_type acc = 0;
    for (auto w : words_) acc ^= w;
    return std::popcount(acc) & 1;
  }
  bool is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](word_type w) { return w == 0; });
  }

  BitVector& operator^=(const BitVector& o) {
    if (o.len_ != len_) throw dimension_error("xor: length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  // Inner product over F2.
  friend bool dot(const BitVector& a, const BitVector& b) {
    if (a.len_ != b.len_) throw dimension_error("dot: length mismatch");
    word_type acc = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i) acc ^= a.words_[i] & b.words_[i];
    return std::popcount(acc) & 1;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

  // Bits [pos, pos+count).
  BitVector slice(std::size_t pos, std::size_t count) const {
    if (pos + count > len_) throw dimension_error("slice: range out of bounds");
    BitVector out(count);
    const std::size_t shift = pos % word_bits;
    const std::size_t base = pos / word_bits;
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
      word_type lo = words_[base + w] >> shift;
      if (shift && base + w + 1 < words_.size()) lo |= words_[base + w + 1] << (word_bits - shift);
      out.words_[w] = lo;
    }
    out.clear_tail();
    return out;
  }

  // XOR `src` into this vector starting at bit `pos`.
  void xor_at(std::size_t pos, const BitVector& src) {
    if (pos + src.len_ > len_) throw dimension_error("xor_at: range out of bounds");
    const std::size_t shift = pos % word_bits;
    const std::size_t base = pos / word_bits;
    for (std::size_t w = 0; w < src.words_.size(); ++w) {
      const word_type v = src.words_[w];
      words_[base + w] ^= v << shift;
      if (shift && base + w + 1 < words_.size()) words_[base + w + 1] ^= v >> (word_bits - shift);
    }
  }

  void assign_at(std::size_t pos, const BitVector& src) {
    xor_at(pos, slice(pos, src.len_));
    xor_at(pos, src);
  }

  static BitVector concat(std::span<const BitVector> parts) {
    std::size_t total = 0;
    for (const auto& p : parts) total += p.len_;
    BitVector out(total);
    std::size_t pos = 0;
    for (const auto& p : parts) {
      out.xor_at(pos, p);
      pos += p.len_;
    }
    return out;
  }
  static BitVector concat(const BitVector& a, const BitVector& b) {
    const BitVector parts[] = {a, b};
    return concat(parts);
  }

  // Copy with length changed; new bits are zero.
  BitVector resized(std::size_t len) const {
    if (len <= len_) return slice(0, len);
    BitVector out(len);
    out.xor_at(0, *this);
    return out;
  }

  BitVector reversed() const {
    BitVector out(len_);
    for (std::size_t i = 0; i < len_; ++i)
      if (get(i)) out.set(len_ - 1 - i);
    return out;
  }

  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out((len_ + 7) / 8);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
    return out;
  }

  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    for (auto b : to_bytes()) {
      s.push_back(digits[b >> 4]);
      s.push_back(digits[b & 0xF]);
    }
    return s;
  }

  // "0110..." in index order.
  std::string to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  // First 64 bits as an integer (bit 0 = LSB).
  std::uint64_t to_uint() const { return words_.empty() ? 0 : words_[0]; }

 private:
  void clear_tail() {
    if (len_ % word_bits) words_.back() &= (word_type{1} << (len_ % word_bits)) - 1;
  }

  std::size_t len_ = 0;
  std::vector<word_type> words_;
};

}  // namespace dualhash
