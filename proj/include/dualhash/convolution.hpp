#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "dualhash/bitvector.hpp"

namespace dualhash {

// Raised when a convolution length cannot be computed exactly by the transform.
class exactness_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace detail {

// Arithmetic mod p = 15 * 2^27 + 1 in Montgomery form (R = 2^32).
struct MontgomeryField {
  static constexpr std::uint32_t p = 2013265921U;
  static constexpr std::uint32_t generator = 31;
  static constexpr int max_log2 = 27;

  static constexpr std::uint32_t neg_p_inv = [] {
    std::uint32_t inv = 1;
    for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;  // Newton: inv = p^-1 mod 2^32
    return static_cast<std::uint32_t>(0U - inv);
  }();
  static constexpr std::uint32_t r_mod_p = static_cast<std::uint32_t>((std::uint64_t{1} << 32) % p);
  static constexpr std::uint32_t r2_mod_p =
      static_cast<std::uint32_t>((static_cast<unsigned __int128>(1) << 64) % p);

  static std::uint32_t reduce(std::uint64_t t) {
    const std::uint32_t m = static_cast<std::uint32_t>(t) * neg_p_inv;
    const std::uint32_t u = static_cast<std::uint32_t>((t + std::uint64_t{m} * p) >> 32);
    return u >= p ? u - p : u;
  }
  static std::uint32_t mul(std::uint32_t a, std::uint32_t b) { return reduce(std::uint64_t{a} * b); }
  static std::uint32_t add(std::uint32_t a, std::uint32_t b) {
    const std::uint32_t s = a + b;
    return s >= p ? s - p : s;
  }
  static std::uint32_t sub(std::uint32_t a, std::uint32_t b) { return a >= b ? a - b : a + p - b; }
  static std::uint32_t to_mont(std::uint32_t a) { return mul(a, r2_mod_p); }
  static std::uint32_t from_mont(std::uint32_t a) { return reduce(a); }
  static std::uint32_t pow(std::uint32_t base_mont, std::uint64_t e) {
    std::uint32_t result = r_mod_p;
    while (e) {
      if (e & 1) result = mul(result, base_mont);
      base_mont = mul(base_mont, base_mont);
      e >>= 1;
    }
    return result;
  }
};

// roots[len + j] = w_{2 len}^j for power-of-two len < size (and the inverse table likewise).
struct NttTables {
  std::vector<std::uint32_t> roots;
  std::vector<std::uint32_t> inv_roots;
  std::uint32_t inv_size = 0;  // Montgomery form of size^-1
};

inline std::shared_ptr<const NttTables> ntt_tables(int log2_size) {
  using F = MontgomeryField;
  static std::mutex mu;
  static std::array<std::shared_ptr<const NttTables>, F::max_log2 + 1> cache;
  std::lock_guard lock(mu);
  if (cache[log2_size]) return cache[log2_size];

  const std::size_t size = std::size_t{1} << log2_size;
  auto t = std::make_shared<NttTables>();
  t->roots.assign(std::max<std::size_t>(size, 2), 0);
  t->inv_roots.assign(std::max<std::size_t>(size, 2), 0);
  const std::uint32_t g = F::to_mont(F::generator);
  for (std::size_t len = 1; len < size; len <<= 1) {
    const std::uint32_t w = F::pow(g, (F::p - 1) / (2 * len));
    const std::uint32_t w_inv = F::pow(w, 2 * len - 1);
    std::uint32_t cur = F::r_mod_p, cur_inv = F::r_mod_p;
    for (std::size_t j = 0; j < len; ++j) {
      t->roots[len + j] = cur;
      t->inv_roots[len + j] = cur_inv;
      cur = F::mul(cur, w);
      cur_inv = F::mul(cur_inv, w_inv);
    }
  }
  t->inv_size = F::pow(F::to_mont(static_cast<std::uint32_t>(size % F::p)), F::p - 2);
  cache[log2_size] = t;
  return t;
}

// Decimation in frequency; output in bit-reversed order.
inline void ntt_forward(std::vector<std::uint32_t>& a, const NttTables& t) {
  using F = MontgomeryField;
  const std::size_t n = a.size();
  for (std::size_t len = n / 2; len >= 1; len >>= 1) {
    const std::uint32_t* w = t.roots.data() + len;
    for (std::size_t i = 0; i < n; i += 2 * len) {
      std::uint32_t* lo = a.data() + i;
      std::uint32_t* hi = lo + len;
      for (std::size_t j = 0; j < len; ++j) {
        const std::uint32_t u = lo[j], v = hi[j];
        lo[j] = F::add(u, v);
        hi[j] = F::mul(F::sub(u, v), w[j]);
      }
    }
  }
}

// Decimation in time from bit-reversed input; includes the 1/size scaling.
inline void ntt_inverse(std::vector<std::uint32_t>& a, const NttTables& t) {
  using F = MontgomeryField;
  const std::size_t n = a.size();
  for (std::size_t len = 1; len < n; len <<= 1) {
    const std::uint32_t* w = t.inv_roots.data() + len;
    for (std::size_t i = 0; i < n; i += 2 * len) {
      std::uint32_t* lo = a.data() + i;
      std::uint32_t* hi = lo + len;
      for (std::size_t j = 0; j < len; ++j) {
        const std::uint32_t u = lo[j], v = F::mul(hi[j], w[j]);
        lo[j] = F::add(u, v);
        hi[j] = F::sub(u, v);
      }
    }
  }
  for (auto& x : a) x = F::mul(x, t.inv_size);
}

inline std::vector<std::uint32_t> to_residues(const BitVector& v, std::size_t size) {
  std::vector<std::uint32_t> out(size, 0);
  const auto one = MontgomeryField::r_mod_p;
  const auto words = v.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    auto bits = words[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      out[w * BitVector::word_bits + static_cast<std::size_t>(b)] = one;
      bits &= bits - 1;
    }
  }
  return out;
}

}  // namespace detail

// Schoolbook lengths below this use the O(L^2/64) word loop.
inline constexpr std::size_t schoolbook_threshold = 64;

// Largest cyclic length the transform path computes exactly.
inline constexpr std::size_t max_transform_length = std::size_t{1} << (detail::MontgomeryField::max_log2 - 1);

inline void check_conv_args(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw dimension_error("cyclic_convolve_f2: operand lengths differ");
  if (a.empty()) throw dimension_error("cyclic_convolve_f2: empty operands");
}

// Cyclic rotation: out[(i + shift) mod L] = v[i].
inline BitVector rotate_left(const BitVector& v, std::size_t shift) {
  const std::size_t L = v.size();
  shift %= L;
  if (shift == 0) return v;
  BitVector out(L);
  out.xor_at(shift, v.slice(0, L - shift));
  out.xor_at(0, v.slice(L - shift, shift));
  return out;
}

// c_t = XOR_{i+j = t mod L} a_i b_j by accumulating rotated copies of b.
inline BitVector cyclic_convolve_schoolbook(const BitVector& a, const BitVector& b) {
  check_conv_args(a, b);
  const std::size_t L = a.size();
  // Doubled b lets every rotation be a single slice.
  const BitVector bb = BitVector::concat(b, b);
  BitVector c(L);
  for (std::size_t i = 0; i < L; ++i)
    if (a.get(i)) c ^= bb.slice(L - i, L);
  return c;
}

// Exact cyclic convolution through the number-theoretic transform: the linear
// convolution is computed at a power-of-two size >= 2L-1, then folded mod x^L - 1.
// Every integer coefficient is at most L < p, so residues are exact counts.
inline BitVector cyclic_convolve_ntt(const BitVector& a, const BitVector& b) {
  using F = detail::MontgomeryField;
  check_conv_args(a, b);
  const std::size_t L = a.size();
  if (L > max_transform_length)
    throw exactness_error("cyclic_convolve_f2: length " + std::to_string(L) + " exceeds transform limit " +
                          std::to_string(max_transform_length));
  const std::size_t lin = 2 * L - 1;
  const int log2_size = std::max(1, static_cast<int>(std::bit_width(lin - 1)));
  const std::size_t size = std::size_t{1} << log2_size;
  const auto tables = detail::ntt_tables(log2_size);

  auto fa = detail::to_residues(a, size);
  detail::ntt_forward(fa, *tables);
  if (&a == &b) {
    for (auto& x : fa) x = F::mul(x, x);
  } else {
    auto fb = detail::to_residues(b, size);
    detail::ntt_forward(fb, *tables);
    for (std::size_t i = 0; i < size; ++i) fa[i] = F::mul(fa[i], fb[i]);
  }
  detail::ntt_inverse(fa, *tables);

  BitVector c(L);
  auto words = c.words();
  for (std::size_t t = 0; t < L; ++t) {
    std::uint32_t count = F::from_mont(fa[t]);
    if (t + L < lin) count += F::from_mont(fa[t + L]);
    if (count & 1U) words[t / BitVector::word_bits] |= BitVector::word_type{1} << (t % BitVector::word_bits);
  }
  return c;
}

// Cyclic convolution over F2 of two equal-length bit vectors.
inline BitVector cyclic_convolve_f2(const BitVector& a, const BitVector& b) {
  check_conv_args(a, b);
  if (a.size() < schoolbook_threshold) return cyclic_convolve_schoolbook(a, b);
  return cyclic_convolve_ntt(a, b);
}

}  // namespace dualhash
