#pragma once

// Arithmetic in F_{2^k} for k in N_A, where k+1 is an odd prime with 2 as a
// primitive root. Elements are the even-weight polynomials of degree <= k taken
// modulo x^{k+1} + 1, and multiplication is one cyclic convolution of length k+1.

#include <cstdint>
#include <span>
#include <optional>
#include <stdexcept>
#include <string>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

#include "dualhash/bitvector.hpp"
#include "dualhash/convolution.hpp"
#include "dualhash/numtheory.hpp"

namespace dualhash {

class not_in_na_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class search_exhausted_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Membership in N_A: k+1 an odd prime and ord_{k+1}(2) == k, checked through
// 2^{k/q} != 1 (mod k+1) for every prime q | k.
inline bool is_in_na(std::uint64_t k, std::uint64_t rho_budget = std::uint64_t{1} << 22) {
  if (k < 2 || k == UINT64_MAX) return false;
  const std::uint64_t p = k + 1;
  if (p % 2 == 0 || !numtheory::is_prime(p)) return false;
  const auto factors = numtheory::distinct_prime_factors(k, rho_budget);
  if (!factors) throw search_exhausted_error("is_in_na: could not factor " + std::to_string(k));
  for (auto q : *factors)
    if (numtheory::pow_mod(2, k / q, p) == 1) return false;
  return true;
}

struct NaSearchOptions {
  std::uint64_t max_candidates = std::uint64_t{1} << 32;  // even k values examined
  std::uint64_t rho_budget = std::uint64_t{1} << 20;      // per candidate
};

struct NaSearchResult {
  std::uint64_t k = 0;
  std::uint64_t candidates = 0;       // even k examined
  std::uint64_t factor_timeouts = 0;  // candidates skipped because factoring ran out of budget
};

// Smallest k >= lower in N_A, walking even k upward.
inline NaSearchResult find_na_at_least(std::uint64_t lower, const NaSearchOptions& opt = {}) {
  if (lower < 2) throw std::invalid_argument("find_na_at_least: lower must be >= 2");
  NaSearchResult r;
  std::uint64_t k = lower + (lower & 1);
  for (; r.candidates < opt.max_candidates; k += 2, ++r.candidates) {
    if (k < lower) break;  // wrapped
    const std::uint64_t p = k + 1;
    if (!numtheory::is_prime(p)) continue;
    const auto factors = numtheory::distinct_prime_factors(k, opt.rho_budget);
    if (!factors) {
      ++r.factor_timeouts;
      continue;
    }
    bool ok = true;
    for (auto q : *factors)
      if (numtheory::pow_mod(2, k / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      r.k = k;
      ++r.candidates;
      return r;
    }
  }
  throw search_exhausted_error("find_na_at_least: no k in N_A found within " + std::to_string(opt.max_candidates) +
                               " candidates above " + std::to_string(lower));
}

// Validated member of N_A.
class NaIndex {
 public:
  explicit NaIndex(std::uint64_t k) : k_(k) {
    if (!is_in_na(k)) throw not_in_na_error("k = " + std::to_string(k) + " is not in N_A");
  }
  std::uint64_t value() const { return k_; }
  std::size_t ring_length() const { return static_cast<std::size_t>(k_) + 1; }
  friend bool operator==(const NaIndex&, const NaIndex&) = default;

 private:
  std::uint64_t k_;
};

// Element of S: coefficients a_0..a_k with even Hamming weight.
class RingElement {
 public:
  RingElement(NaIndex k, BitVector coeffs) : k_(k), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != k_.ring_length()) throw dimension_error("RingElement: need k+1 coefficients");
    if (coeffs_.parity()) throw std::invalid_argument("RingElement: odd Hamming weight is outside S");
  }
  static RingElement zero(NaIndex k) { return {k, BitVector(k.ring_length())}; }

  // Identity of S: 0 mod (x+1) and 1 mod (x^k + ... + 1), i.e. x + x^2 + ... + x^k.
  static RingElement identity(NaIndex k) {
    BitVector e(k.ring_length());
    for (std::size_t i = 1; i < e.size(); ++i) e.set(i);
    return {k, std::move(e)};
  }

  NaIndex index() const { return k_; }
  const BitVector& coeffs() const { return coeffs_; }
  friend bool operator==(const RingElement&, const RingElement&) = default;

 private:
  NaIndex k_;
  BitVector coeffs_;
};

// Shortened k-bit form D(a); every k-bit string is a field element.
struct FieldElementShort {
  NaIndex k;
  BitVector bits;
};

namespace facm {

// E: append the parity bit.
inline BitVector extend_bits(const BitVector& s) {
  BitVector a = s.resized(s.size() + 1);
  if (s.parity()) a.set(s.size());
  return a;
}

// D: drop the last coefficient.
inline BitVector shorten_bits(const BitVector& a) { return a.slice(0, a.size() - 1); }

// a(x) * b(x) mod x^{k+1} + 1 on raw coefficient vectors.
inline BitVector mul_bits(const BitVector& a, const BitVector& b) { return cyclic_convolve_f2(a, b); }

// M(a)^T v on shortened coordinates: with c = v(x) * a(x^{-1}) mod x^{k+1}+1,
// (M(a)^T v)_j = c_j + c_k. Here `a` is the extended (k+1)-bit element.
inline BitVector transpose_mul_bits(const BitVector& a_ext, const BitVector& v_short) {
  const std::size_t L = a_ext.size();
  BitVector a_rev(L);
  if (a_ext.get(0)) a_rev.set(0);
  for (std::size_t q = 1; q < L; ++q)
    if (a_ext.get(q)) a_rev.set(L - q);
  BitVector c = cyclic_convolve_f2(v_short.resized(L), a_rev);
  BitVector out = c.slice(0, L - 1);
  if (c.get(L - 1)) out ^= BitVector::ones(L - 1);
  return out;
}

}  // namespace facm

inline RingElement extend(const FieldElementShort& s) {
  if (s.bits.size() != s.k.value()) throw dimension_error("extend: need k bits");
  return {s.k, facm::extend_bits(s.bits)};
}

inline FieldElementShort shorten(const RingElement& a) { return {a.index(), facm::shorten_bits(a.coeffs())}; }

// Same as shorten, for raw coefficients that have not been validated yet.
inline FieldElementShort shorten(NaIndex k, const BitVector& coeffs) {
  if (coeffs.size() != k.ring_length()) throw dimension_error("shorten: need k+1 coefficients");
  if (coeffs.parity()) throw std::invalid_argument("shorten: odd Hamming weight is outside S");
  return {k, facm::shorten_bits(coeffs)};
}

inline RingElement ring_add(const RingElement& a, const RingElement& b) {
  if (!(a.index() == b.index())) throw dimension_error("ring_add: k mismatch");
  return {a.index(), a.coeffs() ^ b.coeffs()};
}

inline RingElement ring_mul(const RingElement& a, const RingElement& b) {
  if (!(a.index() == b.index())) throw dimension_error("ring_mul: k mismatch");
  return {a.index(), facm::mul_bits(a.coeffs(), b.coeffs())};
}

namespace detail {

// 64x64 -> 128 carry-less product, 4-bit windows.
inline void clmul64_soft(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
  std::uint64_t tab_lo[16], tab_hi[16];
  tab_lo[0] = tab_hi[0] = 0;
  for (int v = 1; v < 16; ++v) {
    const int bit = 31 - __builtin_clz(static_cast<unsigned>(v));
    const int rest = v ^ (1 << bit);
    tab_lo[v] = tab_lo[rest] ^ (a << bit);
    tab_hi[v] = tab_hi[rest] ^ (bit ? a >> (64 - bit) : 0);
  }
  lo = hi = 0;
  for (int s = 60; s >= 0; s -= 4) {
    const unsigned w = static_cast<unsigned>(b >> s) & 15U;
    hi = (hi << 4) | (lo >> 60);
    lo <<= 4;
    lo ^= tab_lo[w];
    hi ^= tab_hi[w];
  }
}

inline void poly_mul_words_soft(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::uint64_t lo, hi;
      clmul64_soft(a[i], b[j], lo, hi);
      out[i + j] ^= lo;
      out[i + j + 1] ^= hi;
    }
  }
}

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
__attribute__((target("pclmul,sse2"))) inline void poly_mul_words_hw(std::span<const std::uint64_t> a,
                                                                     std::span<const std::uint64_t> b,
                                                                     std::span<std::uint64_t> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    const __m128i x = _mm_cvtsi64_si128(static_cast<long long>(a[i]));
    for (std::size_t j = 0; j < b.size(); ++j) {
      const __m128i r = _mm_clmulepi64_si128(x, _mm_cvtsi64_si128(static_cast<long long>(b[j])), 0);
      out[i + j] ^= static_cast<std::uint64_t>(_mm_cvtsi128_si64(r));
      out[i + j + 1] ^= static_cast<std::uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)));
    }
  }
}
#endif

// Quadratic word-by-word polynomial product; out needs a.size() + b.size() words.
inline void poly_mul_words(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                           std::span<std::uint64_t> out) {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  static const bool hw = __builtin_cpu_supports("pclmul");
  if (hw) return poly_mul_words_hw(a, b, out);
#endif
  poly_mul_words_soft(a, b, out);
}

}  // namespace detail

// O(k^2) schoolbook product, independent of the convolution code path: the
// plain polynomial product word by word, then folded mod x^{k+1} + 1.
inline RingElement schoolbook_ring_mul(const RingElement& a, const RingElement& b) {
  if (!(a.index() == b.index())) throw dimension_error("schoolbook_ring_mul: k mismatch");
  const std::size_t L = a.index().ring_length();
  BitVector prod(2 * L + 128);
  detail::poly_mul_words(a.coeffs().words(), b.coeffs().words(), prod.words());
  BitVector c = prod.slice(0, L);
  c ^= prod.slice(L, L);
  return {a.index(), std::move(c)};
}

inline RingElement ring_pow(const RingElement& a, std::uint64_t e) {
  RingElement result = RingElement::identity(a.index());
  RingElement base = a;
  while (e) {
    if (e & 1) result = ring_mul(result, base);
    e >>= 1;
    if (e) base = ring_mul(base, base);
  }
  return result;
}

}  // namespace dualhash
