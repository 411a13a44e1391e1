#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace dualhash::numtheory {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 pow_mod(u64 base, u64 e, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return result;
}

// Deterministic Miller-Rabin. The first twelve prime bases are a proven
// witness set for every n < 3.3e24, which covers all of u64.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : bases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : bases) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Brent's variant of Pollard rho. Returns a nontrivial factor of composite n,
// or nullopt when the iteration budget runs out.
inline std::optional<u64> pollard_rho(u64 n, u64& budget) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1; budget > 0; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
        budget = budget > m ? budget - m : 0;
      } while (k < r && g == 1 && budget > 0);
      r *= 2;
    } while (g == 1 && budget > 0);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return std::nullopt;
}

// Distinct prime factors of n, ascending. nullopt if the rho budget is exhausted.
inline std::optional<std::vector<u64>> distinct_prime_factors(u64 n, u64 rho_budget = u64{1} << 22) {
  std::vector<u64> primes;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  for (u64 p = 17; p < 1000 && p * p <= n; p += 2) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  std::vector<u64> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    u64 v = stack.back();
    stack.pop_back();
    if (v == 1) continue;
    if (is_prime(v)) {
      primes.push_back(v);
      continue;
    }
    auto f = pollard_rho(v, rho_budget);
    if (!f) return std::nullopt;
    stack.push_back(*f);
    stack.push_back(v / *f);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

// Multiplicative order of a modulo m by direct iteration (test oracle; O(m)).
inline u64 naive_order(u64 a, u64 m) {
  u64 x = a % m;
  for (u64 j = 1; j <= m; ++j) {
    if (x == 1) return j;
    x = mul_mod(x, a, m);
  }
  return 0;
}

}  // namespace dualhash::numtheory
