#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dualhash/bitmatrix.hpp"
#include "dualhash/bitvector.hpp"
#include "dualhash/field.hpp"
#include "dualhash/toeplitz.hpp"

namespace dualhash {

class infeasible_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FamilyKind { MT, F1, F2, Dual, Composed };

struct SeedSegment {
  std::string label;
  std::size_t bits = 0;
};

// Design claims: delta-almost universal2 and delta-almost dual universal2
// constants the construction is proven to meet (absent = no claim).
struct DeltaClaims {
  std::optional<double> universal;
  std::optional<double> dual;
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::MT;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t d = 0;
  // F1: k = m (field size), l = n / m blocks. F2: k = n - m, l = n / k blocks.
  std::size_t k = 0;
  std::size_t l = 0;
  std::shared_ptr<const FamilySpec> base;   // Dual
  std::shared_ptr<const FamilySpec> inner;  // Composed, applied first
  std::shared_ptr<const FamilySpec> outer;  // Composed
  // Composed families built by make_g / make_f3 / make_f4.
  std::string label;
  std::size_t g_l = 0;
  std::size_t requested_l = 0;

  std::vector<SeedSegment> seed_layout() const;
  DeltaClaims claims() const;
};

inline std::string kind_name(const FamilySpec& s) {
  switch (s.kind) {
    case FamilyKind::MT: return "mt";
    case FamilyKind::F1: return "f1";
    case FamilyKind::F2: return "f2";
    case FamilyKind::Dual: return "dual";
    case FamilyKind::Composed: return s.label.empty() ? "composed" : s.label;
  }
  return "?";
}

inline FamilySpec make_mt(std::size_t n, std::size_t m) {
  if (m < 1 || m >= n) throw infeasible_error("mt: need 1 <= m < n");
  FamilySpec s;
  s.kind = FamilyKind::MT;
  s.n = n;
  s.m = m;
  s.d = n - 1;
  return s;
}

inline FamilySpec make_f1(std::size_t m, std::size_t l) {
  if (l < 2) throw infeasible_error("f1: need l >= 2 blocks");
  if (m < 1) throw infeasible_error("f1: need m >= 1");
  field_for(m);
  FamilySpec s;
  s.kind = FamilyKind::F1;
  s.k = m;
  s.l = l;
  s.n = l * m;
  s.m = m;
  s.d = (l - 1) * m;
  return s;
}

inline FamilySpec make_f2(std::size_t k, std::size_t l) {
  if (l < 2) throw infeasible_error("f2: need l >= 2 blocks");
  if (k < 1) throw infeasible_error("f2: need k >= 1");
  field_for(k);
  FamilySpec s;
  s.kind = FamilyKind::F2;
  s.k = k;
  s.l = l;
  s.n = l * k;
  s.m = (l - 1) * k;
  s.d = k;
  return s;
}

inline FamilySpec dual(const FamilySpec& s) {
  if (s.kind == FamilyKind::Dual) return *s.base;
  FamilySpec out;
  out.kind = FamilyKind::Dual;
  out.n = s.n;
  out.m = s.n - s.m;
  out.d = s.d;
  out.base = std::make_shared<const FamilySpec>(s);
  return out;
}

inline FamilySpec compose(const FamilySpec& outer, const FamilySpec& inner) {
  if (inner.m != outer.n) throw dimension_error("compose: inner output length must equal outer input length");
  FamilySpec out;
  out.kind = FamilyKind::Composed;
  out.n = inner.n;
  out.m = outer.m;
  out.d = inner.d + outer.d;
  out.inner = std::make_shared<const FamilySpec>(inner);
  out.outer = std::make_shared<const FamilySpec>(outer);
  return out;
}

inline bool g_feasible(std::size_t n, std::size_t l, std::size_t m) {
  return m >= 1 && m < l && l < n && n % l == 0 && l % (l - m) == 0;
}

// Outer f_F2 on l bits (k = l - m) after the dual of f_F2 on n bits with k = l.
inline FamilySpec make_g(std::size_t n, std::size_t l, std::size_t m) {
  if (!(m >= 1 && m < l && l < n)) throw infeasible_error("g: need 1 <= m < l < n");
  if (n % l != 0) throw infeasible_error("g: l must divide n");
  if (l % (l - m) != 0) throw infeasible_error("g: l - m must divide l");
  FamilySpec s = compose(make_f2(l - m, l / (l - m)), dual(make_f2(l, n / l)));
  s.label = "g";
  s.g_l = l;
  s.requested_l = l;
  return s;
}

namespace detail {
inline FamilySpec snapped_g(std::size_t n, std::size_t m, std::size_t requested, const char* label) {
  for (std::size_t l = requested; l > m; --l) {
    if (!g_feasible(n, l, m)) continue;
    FamilySpec s = make_g(n, l, m);
    s.label = label;
    s.requested_l = requested;
    return s;
  }
  throw infeasible_error(std::string(label) + ": no feasible l in (m, " + std::to_string(requested) + "]");
}
}  // namespace detail

inline FamilySpec make_f3(std::size_t n, std::size_t m, std::size_t t) {
  if (!(m < t && t < n)) throw infeasible_error("f3: need m < t < n");
  return detail::snapped_g(n, m, t, "f3");
}

inline FamilySpec make_f4(std::size_t n, std::size_t m, std::size_t t) {
  const std::size_t l = (t + m) / 2;
  if (!(m < t && l < n)) throw infeasible_error("f4: need m < (t+m)/2 < n");
  return detail::snapped_g(n, m, l, "f4");
}

inline std::vector<SeedSegment> FamilySpec::seed_layout() const {
  switch (kind) {
    case FamilyKind::MT: return {{"r", d}};
    case FamilyKind::F1: {
      std::vector<SeedSegment> out;
      for (std::size_t i = 1; i < l; ++i) out.push_back({"r" + std::to_string(i), k});
      return out;
    }
    case FamilyKind::F2: return {{"r", k}};
    case FamilyKind::Dual: return base->seed_layout();
    case FamilyKind::Composed: {
      std::vector<SeedSegment> out;
      for (auto& seg : inner->seed_layout()) out.push_back({"inner." + seg.label, seg.bits});
      for (auto& seg : outer->seed_layout()) out.push_back({"outer." + seg.label, seg.bits});
      return out;
    }
  }
  return {};
}

inline DeltaClaims FamilySpec::claims() const {
  switch (kind) {
    case FamilyKind::MT: return {1.0, 1.0};
    case FamilyKind::F1: return {1.0, 1.0};
    case FamilyKind::F2: return {std::nullopt, static_cast<double>(l - 1)};
    case FamilyKind::Dual: {
      const auto b = base->claims();
      return {b.dual, b.universal};
    }
    case FamilyKind::Composed: {
      const auto i = inner->claims();
      const auto o = outer->claims();
      DeltaClaims c;
      if (i.dual && o.dual) c.dual = *i.dual * *o.dual;
      return c;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Evaluation

inline void check_eval_args(const FamilySpec& s, const BitVector& seed, const BitVector& x) {
  if (seed.size() != s.d)
    throw dimension_error("evaluate: seed has " + std::to_string(seed.size()) + " bits, family needs " +
                          std::to_string(s.d));
  if (x.size() != s.n)
    throw dimension_error("evaluate: input has " + std::to_string(x.size()) + " bits, family needs " +
                          std::to_string(s.n));
}

inline constexpr std::size_t matrix_max_n = 32;

inline BitMatrix generator_matrix(const FamilySpec& s, const BitVector& seed);
inline BitMatrix check_matrix(const FamilySpec& s, const BitVector& seed);

inline BitVector evaluate(const FamilySpec& s, const BitVector& seed, const BitVector& x);

namespace detail {

// sum_i r_i x_i + x_l
inline BitVector eval_f1(const FamilySpec& s, const BitVector& seed, const BitVector& x) {
  const auto f = field_for(s.k);
  BitVector y = x.slice((s.l - 1) * s.k, s.k);
  for (std::size_t i = 0; i + 1 < s.l; ++i) y ^= f->mul(seed.slice(i * s.k, s.k), x.slice(i * s.k, s.k));
  return y;
}

// x_i + M(r_i)^T x_l for i < l
inline BitVector eval_f1_dual(const FamilySpec& s, const BitVector& seed, const BitVector& x) {
  const auto f = field_for(s.k);
  const BitVector last = x.slice((s.l - 1) * s.k, s.k);
  BitVector y = x.slice(0, (s.l - 1) * s.k);
  for (std::size_t i = 0; i + 1 < s.l; ++i) y.xor_at(i * s.k, f->mul_transposed(seed.slice(i * s.k, s.k), last));
  return y;
}

// (x_1 + r x_l, ..., x_{l-1} + r^{l-1} x_l)
inline BitVector eval_f2(const FamilySpec& s, const BitVector& seed, const BitVector& x) {
  const auto f = field_for(s.k);
  BitVector y = x.slice(0, s.m);
  BitVector t = x.slice(s.m, s.k);
  for (std::size_t i = 0; i + 1 < s.l; ++i) {
    t = f->mul(seed, t);
    y.xor_at(i * s.k, t);
  }
  return y;
}

// x_l + sum_i M(r)^{T i} x_i, Horner form.
inline BitVector eval_f2_dual(const FamilySpec& s, const BitVector& seed, const BitVector& x) {
  const auto f = field_for(s.k);
  BitVector acc = x.slice((s.l - 2) * s.k, s.k);
  for (std::size_t i = s.l - 2; i-- > 0;) {
    acc = f->mul_transposed(seed, acc);
    acc ^= x.slice(i * s.k, s.k);
  }
  acc = f->mul_transposed(seed, acc);
  acc ^= x.slice(s.m, s.k);
  return acc;
}

inline BitVector eval_dual(const FamilySpec& s, const BitVector& seed, const BitVector& x) {
  const FamilySpec& b = *s.base;
  switch (b.kind) {
    case FamilyKind::MT: return modified_toeplitz_dual(seed, x, b.m);
    case FamilyKind::F1: return eval_f1_dual(b, seed, x);
    case FamilyKind::F2: return eval_f2_dual(b, seed, x);
    case FamilyKind::Dual: return evaluate(*b.base, seed, x);
    case FamilyKind::Composed:
      if (b.n > matrix_max_n)
        throw dimension_error("evaluate: dual of a composed family is only available for n <= 32");
      return dense_mul(check_matrix(b, seed), x);
  }
  return {};
}

}  // namespace detail

inline BitVector evaluate(const FamilySpec& s, const BitVector& seed, const BitVector& x) {
  check_eval_args(s, seed, x);
  switch (s.kind) {
    case FamilyKind::MT: return modified_toeplitz_hash(seed, x, s.m);
    case FamilyKind::F1: return detail::eval_f1(s, seed, x);
    case FamilyKind::F2: return detail::eval_f2(s, seed, x);
    case FamilyKind::Dual: return detail::eval_dual(s, seed, x);
    case FamilyKind::Composed: {
      const BitVector mid = evaluate(*s.inner, seed.slice(0, s.inner->d), x);
      return evaluate(*s.outer, seed.slice(s.inner->d, s.outer->d), mid);
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Explicit matrices, verification scale only

namespace detail {

inline void check_matrix_args(const FamilySpec& s, const BitVector& seed) {
  if (s.n > matrix_max_n) throw dimension_error("generator/check matrix: n exceeds 32");
  if (seed.size() != s.d) throw dimension_error("generator/check matrix: seed length != d");
}

// A = (M(r_1) | ... | M(r_{l-1})), m x (n-m)
inline BitMatrix f1_a(const FamilySpec& s, const BitVector& seed) {
  const auto f = field_for(s.k);
  BitMatrix a = f->mul_matrix(seed.slice(0, s.k));
  for (std::size_t i = 1; i + 1 < s.l; ++i) a = BitMatrix::hstack(a, f->mul_matrix(seed.slice(i * s.k, s.k)));
  return a;
}

// B = (M(r); M(r^2); ...; M(r^{l-1})), m x k; powers via the matrix product.
inline BitMatrix f2_b(const FamilySpec& s, const BitVector& seed) {
  const auto f = field_for(s.k);
  const BitMatrix mr = f->mul_matrix(seed);
  BitMatrix p = mr;
  BitMatrix b = p;
  for (std::size_t i = 2; i < s.l; ++i) {
    p = mr * p;
    b = BitMatrix::vstack(b, p);
  }
  return b;
}

}  // namespace detail

inline BitMatrix generator_matrix(const FamilySpec& s, const BitVector& seed) {
  detail::check_matrix_args(s, seed);
  switch (s.kind) {
    case FamilyKind::MT:
      return BitMatrix::hstack(toeplitz_matrix({s.m, s.n, seed}), BitMatrix::identity(s.m));
    case FamilyKind::F1: return BitMatrix::hstack(detail::f1_a(s, seed), BitMatrix::identity(s.m));
    case FamilyKind::F2: return BitMatrix::hstack(BitMatrix::identity(s.m), detail::f2_b(s, seed));
    case FamilyKind::Dual: return check_matrix(*s.base, seed);
    case FamilyKind::Composed:
      return generator_matrix(*s.outer, seed.slice(s.inner->d, s.outer->d)) *
             generator_matrix(*s.inner, seed.slice(0, s.inner->d));
  }
  return {};
}

inline BitMatrix check_matrix(const FamilySpec& s, const BitVector& seed) {
  detail::check_matrix_args(s, seed);
  switch (s.kind) {
    case FamilyKind::MT:
      return BitMatrix::hstack(BitMatrix::identity(s.n - s.m), toeplitz_matrix({s.m, s.n, seed}).transpose());
    case FamilyKind::F1:
      return BitMatrix::hstack(BitMatrix::identity(s.n - s.m), detail::f1_a(s, seed).transpose());
    case FamilyKind::F2:
      return BitMatrix::hstack(detail::f2_b(s, seed).transpose(), BitMatrix::identity(s.k));
    case FamilyKind::Dual: return generator_matrix(*s.base, seed);
    case FamilyKind::Composed: return generator_matrix(s, seed).null_space();
  }
  return {};
}

// ---------------------------------------------------------------------------
// Feasibility helpers: smallest padded input length for a requested (n, m).

struct FeasibleParams {
  FamilySpec spec;
  std::size_t requested_n = 0;
  std::size_t requested_m = 0;
  std::size_t padding = 0;  // zero bits appended to the input
};

inline FeasibleParams feasible_f1(std::size_t n, std::size_t m) {
  if (m < 1 || m >= n) throw infeasible_error("f1: need 1 <= m < n");
  const std::size_t l = (n + m - 1) / m;
  FamilySpec s = make_f1(m, l);
  return {s, n, m, s.n - n};
}

// k = n - m and l = 1 + ceil(m / k); the output grows to (l-1)k >= m.
inline FeasibleParams feasible_f2(std::size_t n, std::size_t m) {
  if (m < 1 || m >= n) throw infeasible_error("f2: need 1 <= m < n");
  const std::size_t k = n - m;
  const std::size_t l = 1 + (m + k - 1) / k;
  FamilySpec s = make_f2(k, l);
  return {s, n, m, s.n - n};
}

// ---------------------------------------------------------------------------
// Text record: space separated key=value, nested records in braces.
//   kind=f1 n=4 m=2 l=2 k=2 d=2
//   kind=g n=12 m=4 l=6 d=8            (also f3 / f4, with requested_l)
//   kind=dual n=4 m=2 d=2 base={kind=f1 ...}
//   kind=composed n=.. m=.. d=.. inner={...} outer={...}

inline std::string to_text(const FamilySpec& s) {
  const std::string nmd =
      " n=" + std::to_string(s.n) + " m=" + std::to_string(s.m);
  const std::string dd = " d=" + std::to_string(s.d);
  switch (s.kind) {
    case FamilyKind::MT: return "kind=mt" + nmd + dd;
    case FamilyKind::F1:
    case FamilyKind::F2:
      return "kind=" + kind_name(s) + nmd + " l=" + std::to_string(s.l) + " k=" + std::to_string(s.k) + dd;
    case FamilyKind::Dual: return "kind=dual" + nmd + dd + " base={" + to_text(*s.base) + "}";
    case FamilyKind::Composed:
      if (!s.label.empty()) {
        std::string out = "kind=" + s.label + nmd + " l=" + std::to_string(s.g_l);
        if (s.requested_l != s.g_l) out += " requested_l=" + std::to_string(s.requested_l);
        return out + dd;
      }
      return "kind=composed" + nmd + dd + " inner={" + to_text(*s.inner) + "} outer={" + to_text(*s.outer) + "}";
  }
  return {};
}

class parse_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::map<std::string, std::string> split_record(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    if (i >= text.size()) break;
    const std::size_t eq = text.find('=', i);
    if (eq == std::string_view::npos) throw parse_error("family record: expected key=value");
    std::string key(text.substr(i, eq - i));
    std::size_t j = eq + 1;
    std::string value;
    if (j < text.size() && text[j] == '{') {
      int depth = 0;
      std::size_t start = j + 1;
      for (; j < text.size(); ++j) {
        if (text[j] == '{') ++depth;
        if (text[j] == '}' && --depth == 0) break;
      }
      if (j >= text.size()) throw parse_error("family record: unbalanced braces");
      value = std::string(text.substr(start, j - start));
      ++j;
    } else {
      const std::size_t end = std::min(text.find(' ', j), text.size());
      value = std::string(text.substr(j, end - j));
      j = end;
    }
    if (!kv.emplace(std::move(key), std::move(value)).second) throw parse_error("family record: duplicate key");
    i = j;
  }
  return kv;
}

inline std::size_t field_u(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw parse_error("family record: missing " + key);
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(it->second, &pos);
  } catch (const std::exception&) {
    throw parse_error("family record: bad number for " + key);
  }
  if (pos != it->second.size()) throw parse_error("family record: bad number for " + key);
  return static_cast<std::size_t>(v);
}

}  // namespace detail

inline FamilySpec parse_family(std::string_view text) {
  const auto kv = detail::split_record(text);
  auto it = kv.find("kind");
  if (it == kv.end()) throw parse_error("family record: missing kind");
  const std::string& kind = it->second;
  FamilySpec s;
  if (kind == "mt") {
    s = make_mt(detail::field_u(kv, "n"), detail::field_u(kv, "m"));
  } else if (kind == "f1") {
    s = make_f1(detail::field_u(kv, "k"), detail::field_u(kv, "l"));
  } else if (kind == "f2") {
    s = make_f2(detail::field_u(kv, "k"), detail::field_u(kv, "l"));
  } else if (kind == "dual") {
    s = dual(parse_family(kv.at("base")));
  } else if (kind == "g" || kind == "f3" || kind == "f4") {
    s = make_g(detail::field_u(kv, "n"), detail::field_u(kv, "l"), detail::field_u(kv, "m"));
    s.label = kind;
    if (kv.count("requested_l")) s.requested_l = detail::field_u(kv, "requested_l");
  } else if (kind == "composed") {
    if (!kv.count("inner") || !kv.count("outer")) throw parse_error("family record: composed needs inner and outer");
    s = compose(parse_family(kv.at("outer")), parse_family(kv.at("inner")));
  } else {
    throw parse_error("family record: unknown kind '" + kind + "'");
  }
  for (const char* key : {"n", "m", "d"})
    if (kv.count(key) && detail::field_u(kv, key) != (key[0] == 'n' ? s.n : key[0] == 'm' ? s.m : s.d))
      throw parse_error(std::string("family record: inconsistent ") + key);
  return s;
}

inline bool operator==(const FamilySpec& a, const FamilySpec& b) { return to_text(a) == to_text(b); }

}  // namespace dualhash
