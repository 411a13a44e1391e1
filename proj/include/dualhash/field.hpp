#pragma once

// F_{2^k} on k-bit strings. For k in N_A the circulant (FACM) representation is
// used; any other k up to slow_field_max_k falls back to a polynomial basis
// modulo a sparse irreducible polynomial.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualhash/bitmatrix.hpp"
#include "dualhash/bitvector.hpp"
#include "dualhash/facm.hpp"
#include "dualhash/numtheory.hpp"

namespace dualhash {

inline constexpr std::size_t slow_field_max_k = 4096;

class field_unavailable_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

// Degree of a polynomial stored LSB-first; -1 for zero.
inline long poly_degree(const BitVector& p) {
  const auto w = p.words();
  for (std::size_t i = w.size(); i-- > 0;)
    if (w[i]) return static_cast<long>(i * BitVector::word_bits + 63 - std::countl_zero(w[i]));
  return -1;
}

// Reduce p (any length) modulo x^k + sum_{t in taps} x^t, result has k bits.
inline BitVector reduce_sparse(BitVector p, std::size_t k, const std::vector<std::size_t>& taps) {
  for (long d = poly_degree(p); d >= static_cast<long>(k); d = poly_degree(p)) {
    const std::size_t s = static_cast<std::size_t>(d) - k;
    p.flip(static_cast<std::size_t>(d));
    for (auto t : taps) p.flip(s + t);
  }
  return p.resized(k);
}

inline BitVector square_mod(const BitVector& a, std::size_t k, const std::vector<std::size_t>& taps) {
  BitVector sq(2 * k);
  for (std::size_t i = 0; i < k; ++i)
    if (a.get(i)) sq.set(2 * i);
  return reduce_sparse(std::move(sq), k, taps);
}

inline BitVector poly_mod(BitVector a, const BitVector& f) {
  const long df = poly_degree(f);
  const BitVector ft = f.resized(static_cast<std::size_t>(df) + 1);
  for (long d = poly_degree(a); d >= df; d = poly_degree(a)) a.xor_at(static_cast<std::size_t>(d - df), ft);
  return a;
}

inline BitVector poly_gcd(BitVector a, BitVector b) {
  const std::size_t len = std::max(a.size(), b.size());
  a = a.resized(len);
  b = b.resized(len);
  while (!b.is_zero()) {
    a = poly_mod(std::move(a), b);
    std::swap(a, b);
  }
  return a;
}

// Rabin's irreducibility test for x^k + sum x^taps.
inline bool is_irreducible_sparse(std::size_t k, const std::vector<std::size_t>& taps) {
  if (k == 1) return true;
  BitVector f(k + 1);
  f.set(k);
  for (auto t : taps) f.flip(t);
  const auto primes = numtheory::distinct_prime_factors(k).value();
  std::vector<std::size_t> checkpoints;
  for (auto q : primes) checkpoints.push_back(k / q);

  BitVector x(k);
  x.set(1);
  BitVector h = x;
  for (std::size_t j = 1; j <= k; ++j) {
    h = square_mod(h, k, taps);
    for (auto c : checkpoints) {
      if (c != j) continue;
      BitVector diff = (h ^ x).resized(k + 1);
      if (poly_degree(poly_gcd(diff, f)) != 0) return false;
    }
  }
  return h == x;
}

inline std::vector<std::size_t> find_sparse_irreducible(std::size_t k) {
  if (k == 1) return {0};
  for (std::size_t a = 1; a < k; ++a)
    if (is_irreducible_sparse(k, {0, a})) return {0, a};
  for (std::size_t a = 3; a < k; ++a)
    for (std::size_t b = 2; b < a; ++b)
      for (std::size_t c = 1; c < b; ++c)
        if (is_irreducible_sparse(k, {0, c, b, a})) return {0, c, b, a};
  throw field_unavailable_error("no trinomial or pentanomial of degree " + std::to_string(k));
}

}  // namespace detail

// Multiplication M(a) x = a*x on k-bit strings, and its transpose.
class GF2k {
 public:
  explicit GF2k(std::size_t k) : k_(k) {
    if (k < 1) throw field_unavailable_error("field size must be >= 1");
    if (is_in_na(k)) {
      na_.emplace(k);
      return;
    }
    if (k > slow_field_max_k)
      throw field_unavailable_error("k = " + std::to_string(k) + " is not in N_A and exceeds the polynomial-basis cap " +
                                    std::to_string(slow_field_max_k));
    taps_ = detail::find_sparse_irreducible(k);
  }

  std::size_t k() const { return k_; }
  bool circulant() const { return na_.has_value(); }
  // Low-order terms of the reduction polynomial (polynomial basis only).
  const std::vector<std::size_t>& taps() const { return taps_; }

  BitVector one() const {
    if (na_) return shorten(RingElement::identity(*na_)).bits;
    BitVector e(k_);
    e.set(0);
    return e;
  }

  BitVector mul(const BitVector& a, const BitVector& b) const {
    check(a);
    check(b);
    if (na_) return facm::shorten_bits(facm::mul_bits(facm::extend_bits(a), facm::extend_bits(b)));
    BitVector prod(2 * k_);
    for (std::size_t i = 0; i < k_; ++i)
      if (a.get(i)) prod.xor_at(i, b);
    return detail::reduce_sparse(std::move(prod), k_, taps_);
  }

  // M(a)^T v.
  BitVector mul_transposed(const BitVector& a, const BitVector& v) const {
    check(a);
    check(v);
    if (na_) return facm::transpose_mul_bits(facm::extend_bits(a), v);
    BitVector out(k_);
    BitVector s = a;
    for (std::size_t j = 0; j < k_; ++j) {
      if (dot(v, s)) out.set(j);
      s = times_x(s);
    }
    return out;
  }

  BitVector pow(const BitVector& a, std::uint64_t e) const {
    BitVector result = one();
    BitVector base = a;
    while (e) {
      if (e & 1) result = mul(result, base);
      e >>= 1;
      if (e) base = mul(base, base);
    }
    return result;
  }

  // Multiplication matrix column j = a * e_j, built with the O(k^2) ring product
  // in the circulant case so it does not share code with mul().
  BitMatrix mul_matrix(const BitVector& a) const;

 private:
  void check(const BitVector& v) const {
    if (v.size() != k_) throw dimension_error("GF2k: operand must have k bits");
  }
  BitVector times_x(const BitVector& s) const {
    BitVector shifted(k_ + 1);
    shifted.xor_at(1, s);
    return detail::reduce_sparse(std::move(shifted), k_, taps_);
  }

  std::size_t k_;
  std::optional<NaIndex> na_;
  std::vector<std::size_t> taps_;
};

inline BitMatrix GF2k::mul_matrix(const BitVector& a) const {
  check(a);
  BitMatrix m(k_, k_);
  for (std::size_t j = 0; j < k_; ++j) {
    BitVector e(k_);
    e.set(j);
    BitVector col;
    if (na_)
      col = shorten(schoolbook_ring_mul(extend({*na_, a}), extend({*na_, e}))).bits;
    else
      col = mul(a, e);
    for (std::size_t i = 0; i < k_; ++i)
      if (col.get(i)) m.set(i, j);
  }
  return m;
}

// Shared instance per k; construction searches for the reduction polynomial once.
inline std::shared_ptr<const GF2k> field_for(std::size_t k) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const GF2k>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(k); it != cache.end()) return it->second;
  }
  auto f = std::make_shared<const GF2k>(k);
  std::lock_guard lock(mu);
  return cache.emplace(k, std::move(f)).first->second;
}

}  // namespace dualhash
