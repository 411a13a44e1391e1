#pragma once

// Leftover-hash style security bounds. Every formula has a log2-domain form
// (the *_log2 functions, used for astronomically small epsilon) and a plain
// linear form; the two are computed independently so they can be checked
// against each other.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dualhash::security {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log2(2^a + 2^b)
inline double log2_sum(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp2(lo - hi)) / std::log(2.0);
}

inline double safe_log2(double x) { return x <= 0 ? neg_inf : std::log2(x); }

inline double ceil_div(double a, double b) { return std::ceil(a / b); }

inline void require_delta(double delta, const char* what) {
  if (!(delta >= 1)) throw std::invalid_argument(std::string(what) + ": delta must be >= 1");
}

// --- universal / dual universal, classical ------------------------------

inline double bound_universal_classical_log2(double delta, double m, double t) {
  require_delta(delta, "bound_universal_classical");
  return 0.5 * log2_sum(safe_log2(delta - 1), m - t);
}
inline double bound_universal_classical(double delta, double m, double t) {
  require_delta(delta, "bound_universal_classical");
  return std::sqrt(delta - 1 + std::pow(2.0, m - t));
}

inline double bound_dual_classical_log2(double delta, double m, double t) {
  require_delta(delta, "bound_dual_classical");
  return 0.5 * std::log2(delta) + (m - t) / 2;
}
inline double bound_dual_classical(double delta, double m, double t) {
  require_delta(delta, "bound_dual_classical");
  return std::sqrt(delta) * std::pow(2.0, (m - t) / 2);
}

// --- eta minimization ---------------------------------------------------

struct EtaMinimum {
  double log2_eta = 0;
  double log2_value = 0;
};

// Golden-section search over u = log2(eta) for an objective that is convex in
// eta. The initial bracket [(m-t)/2 - 8, 0] is widened while the minimum sits
// on an end point.
inline EtaMinimum minimize_over_eta(const std::function<double(double)>& log2_objective, double m, double t) {
  double lo = (m - t) / 2 - 8, hi = 0;
  for (int i = 0; i < 64 && log2_objective(lo) <= log2_objective(lo + 1e-3); ++i) lo -= 16 * (i + 1);
  for (int i = 0; i < 64 && log2_objective(hi) <= log2_objective(hi - 1e-3); ++i) hi += 16 * (i + 1);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = log2_objective(a), fb = log2_objective(b);
  for (int it = 0; it < 400 && hi - lo > 1e-11 * std::max(1.0, std::fabs(lo)); ++it) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = log2_objective(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = log2_objective(b);
    }
  }
  const double u = (lo + hi) / 2;
  return {u, log2_objective(u)};
}

// --- universal, quantum -------------------------------------------------

// 2 eta + sqrt(delta - 1 + (1 + 2/eta^2) 2^{m-t})
inline double bound_universal_quantum_log2_at(double delta, double m, double t, double log2_eta) {
  require_delta(delta, "bound_universal_quantum");
  const double coeff = log2_sum(0, 1 - 2 * log2_eta);
  return log2_sum(1 + log2_eta, 0.5 * log2_sum(safe_log2(delta - 1), coeff + m - t));
}

inline double bound_universal_quantum_log2(double delta, double m, double t,
                                           std::optional<double> log2_eta = std::nullopt) {
  if (log2_eta) return bound_universal_quantum_log2_at(delta, m, t, *log2_eta);
  return minimize_over_eta([&](double u) { return bound_universal_quantum_log2_at(delta, m, t, u); }, m, t)
      .log2_value;
}

inline double bound_universal_quantum(double delta, double m, double t, std::optional<double> eta = std::nullopt) {
  require_delta(delta, "bound_universal_quantum");
  if (eta) {
    if (!(*eta > 0)) throw std::invalid_argument("bound_universal_quantum: eta must be > 0");
    return 2 * *eta + std::sqrt(delta - 1 + (1 + 2 / (*eta * *eta)) * std::pow(2.0, m - t));
  }
  const auto best = minimize_over_eta(
      [&](double u) { return std::log2(bound_universal_quantum(delta, m, t, std::exp2(u))); }, m, t);
  return std::exp2(best.log2_value);
}

// --- concatenation ------------------------------------------------------

// sqrt(delta' (2^{m-t} + 2^{m-l} (delta - 1)))
inline double bound_concat_classical_log2(double delta, double delta_prime, double m, double l, double t) {
  require_delta(delta, "bound_concat_classical");
  require_delta(delta_prime, "bound_concat_classical");
  return 0.5 * (std::log2(delta_prime) + log2_sum(m - t, m - l + safe_log2(delta - 1)));
}
inline double bound_concat_classical(double delta, double delta_prime, double m, double l, double t) {
  require_delta(delta, "bound_concat_classical");
  require_delta(delta_prime, "bound_concat_classical");
  return std::sqrt(delta_prime * (std::pow(2.0, m - t) + std::pow(2.0, m - l) * (delta - 1)));
}

// sqrt(delta') sqrt((2 eta^-2 + 1) 2^{m-t} + 2^{m-l} (delta - 1)(1 + eta)) + 2 eta
inline double bound_concat_quantum_log2(double delta, double delta_prime, double m, double l, double t,
                                        double log2_eta) {
  require_delta(delta, "bound_concat_quantum");
  require_delta(delta_prime, "bound_concat_quantum");
  const double first = log2_sum(1 - 2 * log2_eta, 0) + m - t;
  const double second = m - l + safe_log2(delta - 1) + log2_sum(0, log2_eta);
  return log2_sum(0.5 * (std::log2(delta_prime) + log2_sum(first, second)), 1 + log2_eta);
}
inline double bound_concat_quantum(double delta, double delta_prime, double m, double l, double t, double eta) {
  require_delta(delta, "bound_concat_quantum");
  require_delta(delta_prime, "bound_concat_quantum");
  if (!(eta > 0)) throw std::invalid_argument("bound_concat_quantum: eta must be > 0");
  return std::sqrt(delta_prime) *
             std::sqrt((2 / (eta * eta) + 1) * std::pow(2.0, m - t) + std::pow(2.0, m - l) * (delta - 1) * (1 + eta)) +
         2 * eta;
}

// Two dual families in sequence: sqrt(delta delta') 2^{(m-t)/2}
inline double bound_dual_dual_concat_log2(double delta, double delta_prime, double m, double t) {
  require_delta(delta, "bound_dual_dual_concat");
  require_delta(delta_prime, "bound_dual_dual_concat");
  return 0.5 * (std::log2(delta) + std::log2(delta_prime)) + (m - t) / 2;
}
inline double bound_dual_dual_concat(double delta, double delta_prime, double m, double t) {
  require_delta(delta, "bound_dual_dual_concat");
  require_delta(delta_prime, "bound_dual_dual_concat");
  return std::sqrt(delta * delta_prime) * std::pow(2.0, (m - t) / 2);
}

// --- g_{n,l,m} ----------------------------------------------------------

struct GBounds {
  double epsilon_c = 0;
  double epsilon_q = 0;
  double log2_epsilon_c = 0;
  double log2_epsilon_q = 0;
  double log2_eta = 0;  // eta used for epsilon_q (given or minimizing)
};

inline void check_g_order(double n, double l, double m) {
  if (!(m < l && l < n)) throw std::invalid_argument("g_bounds: need m < l < n");
}

// c1 = ceil(m/(n-m)), c2 = ceil(l/(n-l)):
// eps_c = sqrt(c1 (2^{m-t} + 2^{m-l} (c2 - 1)))
// eps_q = sqrt(c1 ((1 + eta^-2) 2^{m-t} + (1 + eta) 2^{m-l} (c2 - 1))) + 2 eta
inline double g_epsilon_q_log2(double n, double l, double m, double t, double log2_eta) {
  const double c1 = ceil_div(m, n - m), c2 = ceil_div(l, n - l);
  const double first = log2_sum(0, -2 * log2_eta) + m - t;
  const double second = log2_sum(0, log2_eta) + m - l + safe_log2(c2 - 1);
  return log2_sum(0.5 * (std::log2(c1) + log2_sum(first, second)), 1 + log2_eta);
}

inline double g_epsilon_q_linear(double n, double l, double m, double t, double eta) {
  const double c1 = ceil_div(m, n - m), c2 = ceil_div(l, n - l);
  return std::sqrt(c1 * ((1 + 1 / (eta * eta)) * std::pow(2.0, m - t) + (1 + eta) * std::pow(2.0, m - l) * (c2 - 1))) +
         2 * eta;
}

inline GBounds g_bounds(double n, double l, double m, double t, std::optional<double> eta = std::nullopt) {
  check_g_order(n, l, m);
  const double c1 = ceil_div(m, n - m), c2 = ceil_div(l, n - l);
  GBounds g;
  g.log2_epsilon_c = 0.5 * (std::log2(c1) + log2_sum(m - t, m - l + safe_log2(c2 - 1)));
  g.epsilon_c = std::sqrt(c1 * (std::pow(2.0, m - t) + std::pow(2.0, m - l) * (c2 - 1)));
  if (eta) {
    if (!(*eta > 0)) throw std::invalid_argument("g_bounds: eta must be > 0");
    g.log2_eta = std::log2(*eta);
    g.log2_epsilon_q = g_epsilon_q_log2(n, l, m, t, g.log2_eta);
  } else {
    const auto best = minimize_over_eta([&](double u) { return g_epsilon_q_log2(n, l, m, t, u); }, m, t);
    g.log2_eta = best.log2_eta;
    g.log2_epsilon_q = best.log2_value;
  }
  g.epsilon_q = std::exp2(g.log2_epsilon_q);
  return g;
}

// eps_3 = sqrt(ceil(m/(n-m)) ceil(t/(n-t))) 2^{(m-t)/2}
inline double f3_bound_log2(double n, double m, double t) {
  return 0.5 * (std::log2(ceil_div(m, n - m)) + std::log2(ceil_div(t, n - t))) + (m - t) / 2;
}
inline double f3_bound(double n, double m, double t) {
  return std::sqrt(ceil_div(m, n - m) * ceil_div(t, n - t)) * std::pow(2.0, (m - t) / 2);
}

// eps_4 with u = (m-t)/4, c = ceil((m+t)/(2n-m-t)):
//   2^u sqrt(c1 (2^{2u} - 2^u + (1 + 2^u) c)) + 2^{u+1}
// The log form uses the cancellation-free radicand c + 2^{2u} + (c - 1) 2^u.
inline void check_f4(double n, double m, double t) {
  if (!(m < t && (m + t) / 2 < n)) throw std::invalid_argument("f4_bound: need m < t and (m+t)/2 < n");
}
inline double f4_bound_log2(double n, double m, double t) {
  check_f4(n, m, t);
  const double u = (m - t) / 4;
  const double c1 = ceil_div(m, n - m), c = ceil_div(m + t, 2 * n - m - t);
  const double radicand = log2_sum(std::log2(c), log2_sum(2 * u, safe_log2(c - 1) + u));
  return log2_sum(u + 0.5 * (std::log2(c1) + radicand), u + 1);
}
inline double f4_bound(double n, double m, double t) {
  check_f4(n, m, t);
  const double e = std::pow(2.0, (m - t) / 4);
  const double c1 = ceil_div(m, n - m), c = ceil_div(m + t, 2 * n - m - t);
  return e * std::sqrt(c1 * (e * e - e + (1 + e) * c)) + 2 * e;
}

// --- non-uniform seeds --------------------------------------------------

enum class PenaltyRoute { Direct, Collision };

inline double penalty_nonuniform_log2(double log2_epsilon, double d, double h, PenaltyRoute route) {
  if (h > d) throw std::invalid_argument("penalty_nonuniform: h > d");
  return log2_epsilon + (route == PenaltyRoute::Direct ? d - h : (d - h) / 2);
}
inline double penalty_nonuniform(double epsilon, double d, double h, PenaltyRoute route) {
  if (h > d) throw std::invalid_argument("penalty_nonuniform: h > d");
  return epsilon * (route == PenaltyRoute::Direct ? std::pow(2.0, d - h) : std::sqrt(std::pow(2.0, d - h)));
}

// --- seed-length lower bounds -------------------------------------------

inline double seed_lower_bound_dual(double n, double m, double delta) {
  require_delta(delta, "seed_lower_bound_dual");
  return n - m - std::log2(delta);
}

inline double extractor_seed_lower_bound_log2eps(double n, double m, double t, double log2_epsilon) {
  if (!(log2_epsilon <= 0)) throw std::invalid_argument("extractor_seed_lower_bound: need epsilon <= 1");
  return -log2_epsilon - std::max(t - n + m, 0.0);
}
inline double extractor_seed_lower_bound(double n, double m, double t, double epsilon) {
  if (!(epsilon > 0 && epsilon <= 1)) throw std::invalid_argument("extractor_seed_lower_bound: need 0 < epsilon <= 1");
  return extractor_seed_lower_bound_log2eps(n, m, t, std::log2(epsilon));
}

// --- universal -> dual conversion ----------------------------------------

struct DualDelta {
  double value = 0;
  bool valid = false;
};

// The dual of a delta-almost universal2 f: F2^n -> F2^m is
// 2(1 - 2^{-m} delta) + (delta - 1) 2^{n-m} almost universal2.
inline DualDelta dual_delta_conversion(double delta, double n, double m) {
  if (delta < 0) throw std::invalid_argument("dual_delta_conversion: delta must be >= 0");
  const double v = 2 * (1 - std::pow(2.0, -m) * delta) + (delta - 1) * std::pow(2.0, n - m);
  return {v, v >= 0};
}

// --- records ------------------------------------------------------------

struct ExtractorBound {
  double n = 0, m = 0, t = 0, d = 0, h = 0;
  double delta = 1, delta_prime = 1;
  std::optional<double> eta;
  double epsilon = 0;
  double log2_epsilon = 0;
  std::string formula_id;
  std::string notes;
};

// --- comparison table ---------------------------------------------------

// Leading value plus an unspecified asymptotic remainder ("+O(1)", ...).
struct Quantity {
  double value = 0;
  std::string asymptotic;  // empty when exact
  bool available = true;

  std::string render(bool numeric) const {
    if (!available) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    std::string s = buf;
    if (asymptotic.empty()) return s;
    if (numeric) return s + " (leading-order)";
    if (asymptotic.front() == '(') return asymptotic + "*" + s;
    if (asymptotic.front() == 'O') return asymptotic + "[" + s + "]";
    return s + " " + asymptotic;
  }
};

struct ComparisonRow {
  std::string name;
  Quantity t_classical;
  Quantity t_quantum;
  Quantity h;
  int iterations = 0;  // fixed-point rows
};

struct RegimeParams {
  double alpha = 0.5;
  double beta = 0.01;
  double gamma = 1;
  double n = 1e6;

  double m() const { return std::round(alpha * n); }
  double log2_epsilon() const { return -beta * std::pow(n, gamma); }
};

struct FixedPoint {
  double value = 0;
  int iterations = 0;
  bool converged = false;
};

// t <- rhs(t) from t = start; stops when successive iterates differ by < 2^-20.
inline FixedPoint iterate_fixed_point(const std::function<double(double)>& rhs, double start, int cap = 1000) {
  FixedPoint fp{start, 0, false};
  for (int i = 0; i < cap; ++i) {
    const double next = rhs(fp.value);
    ++fp.iterations;
    if (!std::isfinite(next)) {
      fp.value = next;
      return fp;
    }
    const bool done = std::fabs(next - fp.value) < std::exp2(-20.0);
    fp.value = next;
    if (done) {
      fp.converged = true;
      break;
    }
  }
  return fp;
}

inline FixedPoint t3_fixed_point(double n, double m, double log2_epsilon) {
  const double base = m - 2 * log2_epsilon + std::log2(ceil_div(m, n - m));
  return iterate_fixed_point(
      [&](double t) {
        if (t >= n) return std::numeric_limits<double>::quiet_NaN();
        return base + std::log2(ceil_div(t, n - t));
      },
      m);
}

inline FixedPoint t4_fixed_point(double n, double m, double log2_epsilon) {
  const double c1 = ceil_div(m, n - m);
  return iterate_fixed_point(
      [&](double t) {
        if (m + t >= 2 * n) return std::numeric_limits<double>::quiet_NaN();
        const double u = (m - t) / 4;
        const double c = ceil_div(m + t, 2 * n - m - t);
        const double radicand = log2_sum(std::log2(c), log2_sum(2 * u, safe_log2(c - 1) + u));
        return m - 4 * log2_epsilon + 4 * log2_sum(0.5 * (std::log2(c1) + radicand), 1);
      },
      m);
}

// Rows for f_F (F1/F2), f_F3, f_F4, modified Toeplitz, TSSR, almost pairwise
// independent and Trevisan-based extractors at given n, m and log2(epsilon).
inline std::vector<ComparisonRow> comparison_table(double n, double m, double log2_epsilon) {
  if (!(m >= 1 && m < n)) throw std::invalid_argument("comparison_table: need 1 <= m < n");
  if (!(log2_epsilon <= 0)) throw std::invalid_argument("comparison_table: need epsilon <= 1");
  const double le = log2_epsilon;
  std::vector<ComparisonRow> rows;

  const double t0 = m - 2 * le + 2 * std::log2(ceil_div(m, n - m));
  rows.push_back({"F", {t0, ""}, {t0, ""}, {n - m, ""}, 0});

  const auto f3 = t3_fixed_point(n, m, le);
  rows.push_back({"F3", {f3.value, "", std::isfinite(f3.value)}, {0, "", false}, {2 * f3.value - m, "", std::isfinite(f3.value)}, f3.iterations});

  const auto f4 = t4_fixed_point(n, m, le);
  rows.push_back({"F4", {0, "", false}, {f4.value, "", std::isfinite(f4.value)}, {f4.value, "", std::isfinite(f4.value)}, f4.iterations});

  const double t_mt = m - 2 * le;
  rows.push_back({"MT", {t_mt, ""}, {t_mt, ""}, {n - 1, ""}, 0});

  const double h_tssr = 2 * std::ceil(m + std::log2(n / m) - 2 * le + 3);
  rows.push_back({"TSSR", {m - 2 * le, "+O(1)"}, {m - 4 * le, "+O(1)"}, {h_tssr, ""}, 0});

  const double h_pair = 4 * m - 4 * le + 2 * std::log2(n) + 2 * std::log2(m) + 1;
  rows.push_back({"pairwise", {m - 2 * le, "+O(1)"}, {m - 4 * le, "+O(1)"}, {h_pair, "(1+o(1))"}, 0});

  const double log_n_eps = std::log2(n) - le;
  const double h_trev = log_n_eps * log_n_eps * std::log2(m);
  rows.push_back({"Trevisan", {0, "", false}, {m - 4 * le, "+O(1)"}, {h_trev, "O(.)"}, 0});
  return rows;
}

inline std::vector<ComparisonRow> comparison_table(const RegimeParams& r) {
  if (!(r.alpha > 0 && r.alpha < 1)) throw std::invalid_argument("regime: alpha must lie in (0,1)");
  if (!(r.beta > 0)) throw std::invalid_argument("regime: beta must be > 0");
  if (!(r.gamma > 0 && r.gamma <= 1)) throw std::invalid_argument("regime: gamma must lie in (0,1]");
  return comparison_table(r.n, r.m(), r.log2_epsilon());
}

// Constant-epsilon column: m = alpha n, epsilon fixed.
inline std::vector<ComparisonRow> comparison_table_constant_epsilon(double n, double alpha, double log2_epsilon) {
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("regime: alpha must lie in (0,1)");
  return comparison_table(n, std::round(alpha * n), log2_epsilon);
}

}  // namespace dualhash::security
