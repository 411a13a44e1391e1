#pragma once

// Brute-force oracles for small instances: exact delta measurement, classical
// entropies and distances, and the empirical leftover-hash experiment.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "dualhash/families.hpp"
#include "dualhash/security.hpp"

namespace dualhash::verify {

inline constexpr std::size_t max_exhaustive_n = 24;
inline constexpr std::size_t max_seed_bits = 24;
inline constexpr std::size_t max_source_n = 20;

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational make(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    const std::uint64_t g = std::gcd(num, den);
    return {num / g, den / g};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool at_most(std::uint64_t k) const {
    return static_cast<unsigned __int128>(num) <= static_cast<unsigned __int128>(k) * den;
  }
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Integer weights over {0,1}^d; probabilities are weight / total.
struct SeedDistribution {
  std::size_t d = 0;
  std::vector<std::uint64_t> weights;

  static void check_bits(std::size_t d) {
    if (d > max_seed_bits) throw dimension_error("SeedDistribution: d exceeds 24 bits");
  }
  static SeedDistribution uniform(std::size_t d) {
    check_bits(d);
    return {d, std::vector<std::uint64_t>(std::size_t{1} << d, 1)};
  }
  static SeedDistribution point_mass(std::size_t d, std::uint64_t r) {
    check_bits(d);
    SeedDistribution s{d, std::vector<std::uint64_t>(std::size_t{1} << d, 0)};
    s.weights.at(r) = 1;
    return s;
  }
  // Uniform on 2^h seeds picked by a seeded PRNG: H_min = h exactly.
  static SeedDistribution flat(std::size_t d, std::size_t h, std::uint64_t prng_seed) {
    check_bits(d);
    if (h > d) throw std::invalid_argument("SeedDistribution::flat: h > d");
    SeedDistribution s{d, std::vector<std::uint64_t>(std::size_t{1} << d, 0)};
    std::mt19937_64 gen(prng_seed);
    const std::uint64_t size = std::uint64_t{1} << d, pick = std::uint64_t{1} << h;
    // Floyd's sampling of `pick` distinct values below `size`.
    for (std::uint64_t j = size - pick; j < size; ++j) {
      const std::uint64_t v = std::uniform_int_distribution<std::uint64_t>(0, j)(gen);
      if (s.weights[v]) s.weights[j] = 1;
      else s.weights[v] = 1;
    }
    return s;
  }

  std::uint64_t total() const { return std::accumulate(weights.begin(), weights.end(), std::uint64_t{0}); }
  double h_min() const {
    const auto mx = *std::max_element(weights.begin(), weights.end());
    return -std::log2(static_cast<double>(mx) / static_cast<double>(total()));
  }
  void validate(std::size_t expected_d) const {
    if (d != expected_d) throw dimension_error("SeedDistribution: d does not match the family seed length");
    if (weights.size() != (std::size_t{1} << d)) throw dimension_error("SeedDistribution: weight table size != 2^d");
    if (total() == 0) throw std::invalid_argument("SeedDistribution: all weights zero");
  }
};

// ---------------------------------------------------------------------------
// Linear-map helpers on uint32 masks

namespace detail {

inline std::uint32_t to_mask(const BitVector& v) { return static_cast<std::uint32_t>(v.to_uint()); }

// Column j = f_r(e_j), as an m-bit mask.
inline std::vector<std::uint32_t> columns(const FamilySpec& s, const BitVector& seed) {
  std::vector<std::uint32_t> cols(s.n);
  for (std::size_t j = 0; j < s.n; ++j) {
    BitVector e(s.n);
    e.set(j);
    cols[j] = to_mask(evaluate(s, seed, e));
  }
  return cols;
}

inline std::uint32_t apply(const std::vector<std::uint32_t>& cols, std::uint32_t x) {
  std::uint32_t y = 0;
  while (x) {
    y ^= cols[static_cast<std::size_t>(std::countr_zero(x))];
    x &= x - 1;
  }
  return y;
}

// Basis of {x : sum_j x_j cols[j] = 0}.
inline std::vector<std::uint32_t> kernel_basis(const std::vector<std::uint32_t>& cols) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pivots;  // (reduced column, combination)
  std::vector<std::uint32_t> basis;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::uint32_t v = cols[j], comb = std::uint32_t{1} << j;
    for (auto& [pv, pc] : pivots)
      if (v & (std::uint32_t{1} << (31 - std::countl_zero(pv)))) {
        v ^= pv;
        comb ^= pc;
      }
    if (v == 0) basis.push_back(comb);
    else pivots.emplace_back(v, comb);
  }
  return basis;
}

// Reduce a set of vectors to an independent set with the same span.
inline std::vector<std::uint32_t> independent(const std::vector<std::uint32_t>& vs) {
  std::vector<std::uint32_t> basis;
  for (auto v : vs) {
    for (auto b : basis)
      if (v & (std::uint32_t{1} << (31 - std::countl_zero(b)))) v ^= b;
    if (!v) continue;
    // keep leading bits distinct
    for (auto& b : basis)
      if (b & (std::uint32_t{1} << (31 - std::countl_zero(v)))) b ^= v;
    basis.push_back(v);
  }
  return basis;
}

// Calls fn(v) for every nonzero v in span(basis), basis independent.
template <class Fn>
void for_each_nonzero_in_span(const std::vector<std::uint32_t>& basis, Fn&& fn) {
  std::uint32_t v = 0;
  const std::uint64_t count = std::uint64_t{1} << basis.size();
  for (std::uint64_t g = 1; g < count; ++g) {
    v ^= basis[static_cast<std::size_t>(std::countr_zero(g))];
    fn(v);
  }
}

inline std::vector<std::uint32_t> rows_of(const std::vector<std::uint32_t>& cols, std::size_t m) {
  std::vector<std::uint32_t> rows(m, 0);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < m; ++i)
      if (cols[j] >> i & 1U) rows[i] |= std::uint32_t{1} << j;
  return rows;
}

}  // namespace detail

struct DeltaOptions {
  std::optional<std::uint64_t> sampled_seeds;  // absent = enumerate every seed with nonzero weight
  std::uint64_t prng_seed = 1;
};

struct DeltaMeasurement {
  Rational delta;                // 2^bits * max_x Pr[...]
  std::uint32_t worst_x = 0;
  bool exhaustive = true;
  std::uint64_t prng_seed = 0;
};

namespace detail {

enum class Subspace { Kernel, RowSpace };

inline DeltaMeasurement measure(const FamilySpec& s, const SeedDistribution& sd, Subspace which,
                                const DeltaOptions& opt) {
  if (s.n > max_exhaustive_n) throw dimension_error("measure_delta: n exceeds 24");
  sd.validate(s.d);
  std::vector<std::uint64_t> counts(std::size_t{1} << s.n, 0);
  std::uint64_t total = 0;

  auto visit = [&](std::uint64_t r, std::uint64_t w) {
    const auto cols = columns(s, BitVector::from_uint(r, s.d));
    const auto basis = which == Subspace::Kernel ? kernel_basis(cols) : independent(rows_of(cols, s.m));
    for_each_nonzero_in_span(basis, [&](std::uint32_t x) { counts[x] += w; });
    total += w;
  };

  DeltaMeasurement out;
  if (opt.sampled_seeds) {
    out.exhaustive = false;
    out.prng_seed = opt.prng_seed;
    std::mt19937_64 gen(opt.prng_seed);
    std::discrete_distribution<std::uint64_t> pick(sd.weights.begin(), sd.weights.end());
    for (std::uint64_t i = 0; i < *opt.sampled_seeds; ++i) visit(pick(gen), 1);
  } else {
    for (std::uint64_t r = 0; r < sd.weights.size(); ++r)
      if (sd.weights[r]) visit(r, sd.weights[r]);
  }
  const auto it = std::max_element(counts.begin() + 1, counts.end());
  out.worst_x = static_cast<std::uint32_t>(it - counts.begin());
  const std::size_t bits = which == Subspace::Kernel ? s.m : s.n - s.m;
  out.delta = Rational::make(*it << bits, total);
  return out;
}

}  // namespace detail

// delta = 2^m max_{x != 0} Pr_R[f_R(x) = 0]
inline DeltaMeasurement measure_delta_universal(const FamilySpec& s, const SeedDistribution& sd,
                                                const DeltaOptions& opt = {}) {
  return detail::measure(s, sd, detail::Subspace::Kernel, opt);
}

// delta = 2^{n-m} max_{x != 0} Pr_R[x in (Ker f_R)^perp], the row space of G.
inline DeltaMeasurement measure_delta_dual(const FamilySpec& s, const SeedDistribution& sd,
                                           const DeltaOptions& opt = {}) {
  return detail::measure(s, sd, detail::Subspace::RowSpace, opt);
}

// ---------------------------------------------------------------------------
// Classical distributions

struct JointDistribution {
  std::size_t a_size = 0;
  std::size_t e_size = 0;
  std::vector<double> probs;  // probs[a * e_size + e]

  double at(std::size_t a, std::size_t e) const { return probs[a * e_size + e]; }

  static JointDistribution product(const std::vector<double>& pa, const std::vector<double>& pe) {
    JointDistribution j{pa.size(), pe.size(), std::vector<double>(pa.size() * pe.size())};
    for (std::size_t a = 0; a < pa.size(); ++a)
      for (std::size_t e = 0; e < pe.size(); ++e) j.probs[a * pe.size() + e] = pa[a] * pe[e];
    return j;
  }

  void validate() const {
    if (a_size == 0 || e_size == 0 || probs.size() != a_size * e_size)
      throw dimension_error("JointDistribution: table size != a_size * e_size");
    double sum = 0;
    for (double p : probs) {
      if (!(p >= 0)) throw std::invalid_argument("JointDistribution: negative probability");
      sum += p;
    }
    if (std::fabs(sum - 1) > 1e-12) throw std::invalid_argument("JointDistribution: probabilities do not sum to 1");
  }

  std::vector<double> marginal_e() const {
    std::vector<double> pe(e_size, 0);
    for (std::size_t a = 0; a < a_size; ++a)
      for (std::size_t e = 0; e < e_size; ++e) pe[e] += at(a, e);
    return pe;
  }
};

inline void validate_distribution(const std::vector<double>& p) {
  if (p.empty()) throw std::invalid_argument("distribution: empty");
  double sum = 0;
  for (double v : p) {
    if (!(v >= 0)) throw std::invalid_argument("distribution: negative probability");
    sum += v;
  }
  if (sum <= 0) throw std::invalid_argument("distribution: all-zero input");
  if (std::fabs(sum - 1) > 1e-12) throw std::invalid_argument("distribution: probabilities do not sum to 1");
}

inline double h_min(const std::vector<double>& p) {
  validate_distribution(p);
  return -std::log2(*std::max_element(p.begin(), p.end()));
}

// -log sum_e max_a P(a,e)
inline double h_min_cond(const JointDistribution& j) {
  j.validate();
  double c = 0;
  for (std::size_t e = 0; e < j.e_size; ++e) {
    double mx = 0;
    for (std::size_t a = 0; a < j.a_size; ++a) mx = std::max(mx, j.at(a, e));
    c += mx;
  }
  return -std::log2(c);
}

namespace detail {
inline void check_support(const JointDistribution& j, const std::vector<double>& q) {
  validate_distribution(q);
  if (q.size() != j.e_size) throw dimension_error("Q_E size != e_size");
  const auto pe = j.marginal_e();
  for (std::size_t e = 0; e < q.size(); ++e)
    if (q[e] == 0 && pe[e] > 0) throw std::invalid_argument("support violation: Q_E(e) = 0 < P_E(e)");
}
}  // namespace detail

// -log max_{a,e} P(a,e) / Q(e)
inline double h_min_cond(const JointDistribution& j, const std::vector<double>& q) {
  j.validate();
  detail::check_support(j, q);
  double mx = 0;
  for (std::size_t a = 0; a < j.a_size; ++a)
    for (std::size_t e = 0; e < j.e_size; ++e)
      if (q[e] > 0) mx = std::max(mx, j.at(a, e) / q[e]);
  return -std::log2(mx);
}

// -log sum_e Q(e) sum_a (P(a,e)/Q(e))^2
inline double h2_cond(const JointDistribution& j, const std::vector<double>& q) {
  j.validate();
  detail::check_support(j, q);
  double s = 0;
  for (std::size_t a = 0; a < j.a_size; ++a)
    for (std::size_t e = 0; e < j.e_size; ++e)
      if (q[e] > 0) s += j.at(a, e) * j.at(a, e) / q[e];
  return -std::log2(s);
}

// log sum_e P(e)^2 / Q(e)
inline double renyi_divergence2(const std::vector<double>& p, const std::vector<double>& q) {
  validate_distribution(p);
  validate_distribution(q);
  if (p.size() != q.size()) throw dimension_error("renyi_divergence2: size mismatch");
  double s = 0;
  for (std::size_t e = 0; e < p.size(); ++e) {
    if (p[e] == 0) continue;
    if (q[e] == 0) throw std::invalid_argument("support violation: Q(e) = 0 < P(e)");
    s += p[e] * p[e] / q[e];
  }
  return std::log2(s);
}

// || P_{A,E} - P_{U,A} x P_E ||_1
inline double d1_prime(const JointDistribution& j) {
  j.validate();
  const auto pe = j.marginal_e();
  double s = 0;
  for (std::size_t a = 0; a < j.a_size; ++a)
    for (std::size_t e = 0; e < j.e_size; ++e) s += std::fabs(j.at(a, e) - pe[e] / static_cast<double>(j.a_size));
  return s;
}

// sum_{a,e} (P(a,e) - P_E(e)/|A|)^2 / Q(e)
inline double d2(const JointDistribution& j, const std::vector<double>& q) {
  j.validate();
  detail::check_support(j, q);
  const auto pe = j.marginal_e();
  double s = 0;
  for (std::size_t a = 0; a < j.a_size; ++a)
    for (std::size_t e = 0; e < j.e_size; ++e) {
      if (q[e] == 0) continue;
      const double diff = j.at(a, e) - pe[e] / static_cast<double>(j.a_size);
      s += diff * diff / q[e];
    }
  return s;
}

// Same quantity through the entropies: 2^{-H2(A|E||Q)} - |A|^{-1} 2^{D2(P_E||Q)}.
inline double d2_from_entropies(const JointDistribution& j, const std::vector<double>& q) {
  return std::exp2(-h2_cond(j, q)) - std::exp2(renyi_divergence2(j.marginal_e(), q)) / static_cast<double>(j.a_size);
}

// ---------------------------------------------------------------------------
// Sources and the leftover experiment

// Uniform on a pseudo-randomly chosen 2^t-subset of {0,1}^n (Floyd sampling).
inline std::vector<std::uint32_t> flat_source_support(std::size_t n, std::size_t t, std::uint64_t select_seed) {
  if (n > max_source_n) throw dimension_error("flat_source: n exceeds 20");
  if (t > n) throw std::invalid_argument("flat_source: t > n");
  const std::uint64_t size = std::uint64_t{1} << n, pick = std::uint64_t{1} << t;
  std::mt19937_64 gen(select_seed);
  std::vector<bool> chosen(size, false);
  std::vector<std::uint32_t> out;
  out.reserve(pick);
  for (std::uint64_t j = size - pick; j < size; ++j) {
    std::uint64_t v = std::uniform_int_distribution<std::uint64_t>(0, j)(gen);
    if (chosen[v]) v = j;
    chosen[v] = true;
    out.push_back(static_cast<std::uint32_t>(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<double> flat_source(std::size_t n, std::size_t t, std::uint64_t select_seed) {
  std::vector<double> p(std::size_t{1} << n, 0);
  const double w = std::exp2(-static_cast<double>(t));
  for (auto x : flat_source_support(n, t, select_seed)) p[x] = w;
  return p;
}

// Smallest proven epsilon for the family at source min-entropy t, over the
// routes its design claims support.
inline security::ExtractorBound theoretical_bound(const FamilySpec& s, double t) {
  using namespace security;
  ExtractorBound b;
  b.n = static_cast<double>(s.n);
  b.m = static_cast<double>(s.m);
  b.t = t;
  b.d = b.h = static_cast<double>(s.d);
  b.log2_epsilon = std::numeric_limits<double>::infinity();
  auto consider = [&](double log2_eps, double delta, double delta_prime, const char* id) {
    if (log2_eps < b.log2_epsilon) {
      b.log2_epsilon = log2_eps;
      b.delta = delta;
      b.delta_prime = delta_prime;
      b.formula_id = id;
    }
  };
  const auto c = s.claims();
  if (c.universal) consider(bound_universal_classical_log2(*c.universal, b.m, t), *c.universal, 1, "universal");
  if (c.dual) consider(bound_dual_classical_log2(*c.dual, b.m, t), *c.dual, 1, "dual");
  if (s.kind == FamilyKind::Composed) {
    const auto ci = s.inner->claims(), co = s.outer->claims();
    if (ci.universal && co.dual)
      consider(bound_concat_classical_log2(*ci.universal, *co.dual, b.m, static_cast<double>(s.inner->m), t),
               *ci.universal, *co.dual, "concat");
  }
  if (b.formula_id.empty()) throw std::invalid_argument("theoretical_bound: family has no usable delta claim");
  b.epsilon = std::exp2(b.log2_epsilon);
  return b;
}

struct LeftoverOptions {
  std::optional<std::uint64_t> sampled_trials;  // absent = exhaustive over seeds
  std::uint64_t prng_seed = 1;
};

struct LeftoverResult {
  double measured = 0;         // E_R || P_{f_R(A)} - P_{U_m} ||_1
  double source_h_min = 0;
  double seed_h_min = 0;
  security::ExtractorBound bound;  // uniform-seed bound at t = H_min(A)
  double penalized_bound = 0;      // bound * 2^{(d-h)/2}
  bool exhaustive = true;
  std::uint64_t prng_seed = 0;
};

inline LeftoverResult empirical_leftover(const FamilySpec& s, const SeedDistribution& sd,
                                         const std::vector<double>& source, const LeftoverOptions& opt = {}) {
  if (s.n > max_source_n) throw dimension_error("empirical_leftover: n exceeds 20");
  if (source.size() != (std::size_t{1} << s.n)) throw dimension_error("empirical_leftover: source size != 2^n");
  sd.validate(s.d);
  LeftoverResult res;
  res.source_h_min = h_min(source);
  res.seed_h_min = sd.h_min();

  std::vector<std::uint32_t> support;
  for (std::uint32_t x = 0; x < source.size(); ++x)
    if (source[x] > 0) support.push_back(x);
  const std::size_t out_size = std::size_t{1} << s.m;
  const double u = 1.0 / static_cast<double>(out_size);
  std::vector<double> push(out_size);

  auto distance = [&](std::uint64_t r) {
    const auto cols = detail::columns(s, BitVector::from_uint(r, s.d));
    std::fill(push.begin(), push.end(), 0.0);
    for (auto x : support) push[detail::apply(cols, x)] += source[x];
    double l1 = 0;
    for (double p : push) l1 += std::fabs(p - u);
    return l1;
  };

  if (opt.sampled_trials) {
    res.exhaustive = false;
    res.prng_seed = opt.prng_seed;
    std::mt19937_64 gen(opt.prng_seed);
    std::discrete_distribution<std::uint64_t> pick(sd.weights.begin(), sd.weights.end());
    double acc = 0;
    for (std::uint64_t i = 0; i < *opt.sampled_trials; ++i) acc += distance(pick(gen));
    res.measured = acc / static_cast<double>(*opt.sampled_trials);
  } else {
    const double total = static_cast<double>(sd.total());
    double acc = 0;
    for (std::uint64_t r = 0; r < sd.weights.size(); ++r)
      if (sd.weights[r]) acc += static_cast<double>(sd.weights[r]) * distance(r);
    res.measured = acc / total;
  }
  res.bound = theoretical_bound(s, res.source_h_min);
  res.bound.h = res.seed_h_min;
  res.penalized_bound = security::penalty_nonuniform(res.bound.epsilon, static_cast<double>(s.d), res.seed_h_min,
                                                     security::PenaltyRoute::Collision);
  return res;
}

}  // namespace dualhash::verify
