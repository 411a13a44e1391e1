#pragma once

#include <cstddef>

#include "dualhash/bitmatrix.hpp"
#include "dualhash/bitvector.hpp"
#include "dualhash/convolution.hpp"

namespace dualhash {

// m x (n-m) Toeplitz matrix T with T_ij = r_{j-i}, r = (r_{1-m}, ..., r_{n-m-1}).
// seed[q] holds r_{q+1-m}, so seed has n-1 bits.
struct ToeplitzSpec {
  std::size_t m = 0;
  std::size_t n = 0;
  BitVector seed;

  void validate() const {
    if (m < 1 || m >= n) throw dimension_error("ToeplitzSpec: need 1 <= m < n");
    if (seed.size() != n - 1) throw dimension_error("ToeplitzSpec: seed must have n-1 bits");
  }
  std::size_t cols() const { return n - m; }
  bool entry(std::size_t i, std::size_t j) const { return seed.get(j + m - 1 - i); }

  // T^T is again Toeplitz, (n-m) x m, with the seed read backwards.
  ToeplitzSpec transposed() const { return {n - m, n, seed.reversed()}; }
};

inline BitMatrix toeplitz_matrix(const ToeplitzSpec& spec) {
  spec.validate();
  BitMatrix t(spec.m, spec.cols());
  for (std::size_t i = 0; i < spec.m; ++i)
    for (std::size_t j = 0; j < spec.cols(); ++j)
      if (spec.entry(i, j)) t.set(i, j);
  return t;
}

// y = T(r) x via the circulant embedding of size n-1: with x reversed and
// zero-padded, y_i is coefficient n-2-i of the cyclic convolution with the seed.
inline BitVector toeplitz_mul(const ToeplitzSpec& spec, const BitVector& x) {
  spec.validate();
  if (x.size() != spec.cols()) throw dimension_error("toeplitz_mul: x must have n-m bits");
  const std::size_t L = spec.n - 1;
  const BitVector c = cyclic_convolve_f2(spec.seed, x.reversed().resized(L));
  return c.slice(spec.cols() - 1, spec.m).reversed();
}

// y = x G_MT(r)^T with G_MT = (T(r) | I_m): T x_head xor x_tail.
inline BitVector modified_toeplitz_hash(const BitVector& seed, const BitVector& x, std::size_t m) {
  const std::size_t n = x.size();
  if (m < 1 || m >= n) throw dimension_error("modified_toeplitz_hash: need 1 <= m < n");
  if (seed.size() != n - 1) throw dimension_error("modified_toeplitz_hash: seed must have n-1 bits");
  BitVector y = toeplitz_mul({m, n, seed}, x.slice(0, n - m));
  y ^= x.slice(n - m, m);
  return y;
}

// Check-matrix side, H = (I_{n-m} | T(r)^T): x_head xor T^T x_tail.
inline BitVector modified_toeplitz_dual(const BitVector& seed, const BitVector& x, std::size_t m) {
  const std::size_t n = x.size();
  if (m < 1 || m >= n) throw dimension_error("modified_toeplitz_dual: need 1 <= m < n");
  if (seed.size() != n - 1) throw dimension_error("modified_toeplitz_dual: seed must have n-1 bits");
  const ToeplitzSpec t{m, n, seed};
  BitVector y = toeplitz_mul(t.transposed(), x.slice(n - m, m));
  y ^= x.slice(0, n - m);
  return y;
}

}  // namespace dualhash
