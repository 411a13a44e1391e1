#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dualhash/verify.hpp"

using namespace dualhash;
using namespace dualhash::verify;

namespace {

// Oracle: count zeros of the hash over every seed and every nonzero x.
Rational brute_delta(const FamilySpec& s, std::size_t bits) {
  std::vector<std::uint64_t> hits(std::size_t{1} << s.n, 0);
  for (std::uint64_t r = 0; r < (std::uint64_t{1} << s.d); ++r) {
    const auto seed = BitVector::from_uint(r, s.d);
    for (std::uint64_t x = 1; x < hits.size(); ++x)
      if (evaluate(s, seed, BitVector::from_uint(x, s.n)).is_zero()) ++hits[x];
  }
  const auto mx = *std::max_element(hits.begin() + 1, hits.end());
  return Rational::make(mx << bits, std::uint64_t{1} << s.d);
}

std::vector<double> random_dist(std::size_t size, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> p(size);
  double s = 0;
  for (auto& v : p) s += v = u(gen);
  for (auto& v : p) v /= s;
  return p;
}

JointDistribution random_joint(std::size_t a, std::size_t e, std::mt19937_64& gen) {
  return {a, e, random_dist(a * e, gen)};
}

}  // namespace

TEST(Rational, Basics) {
  const auto r = Rational::make(6, 4);
  EXPECT_EQ(r.num, 3u);
  EXPECT_EQ(r.den, 2u);
  EXPECT_EQ(r.str(), "3/2");
  EXPECT_TRUE(r.at_most(2));
  EXPECT_FALSE(r.at_most(1));
  EXPECT_EQ(Rational::make(4, 4).str(), "1");
}

TEST(SeedDistributions, MinEntropy) {
  EXPECT_DOUBLE_EQ(SeedDistribution::uniform(5).h_min(), 5);
  EXPECT_DOUBLE_EQ(SeedDistribution::point_mass(5, 3).h_min(), 0);
  for (std::size_t h = 0; h <= 6; ++h) {
    const auto sd = SeedDistribution::flat(6, h, 99);
    EXPECT_EQ(sd.total(), std::uint64_t{1} << h);
    EXPECT_DOUBLE_EQ(sd.h_min(), static_cast<double>(h));
  }
  EXPECT_THROW(SeedDistribution::uniform(25), dimension_error);
}

TEST(Delta, MatchesBruteForceOracle) {
  const std::vector<FamilySpec> specs = {make_f1(2, 2), make_f1(2, 3), make_f1(3, 3), make_f2(2, 3),
                                         make_f2(3, 3), make_mt(6, 3), make_mt(7, 2), make_g(8, 4, 2)};
  for (const auto& s : specs) {
    const auto u = SeedDistribution::uniform(s.d);
    EXPECT_EQ(measure_delta_universal(s, u).delta, brute_delta(s, s.m)) << to_text(s);
    EXPECT_EQ(measure_delta_dual(s, u).delta, brute_delta(dual(s), s.n - s.m)) << to_text(s);
  }
}

TEST(Delta, DualEqualsUniversalOfDual) {
  for (const auto& s : {make_f1(2, 3), make_f2(2, 3), make_mt(6, 3), make_f2(4, 3)}) {
    const auto u = SeedDistribution::uniform(s.d);
    EXPECT_EQ(measure_delta_dual(s, u).delta, measure_delta_universal(dual(s), u).delta);
  }
}

TEST(Delta, ClaimsHoldExactly) {
  for (std::size_t l : {2u, 3u}) {
    const auto s = make_f1(2, l);
    const auto u = SeedDistribution::uniform(s.d);
    EXPECT_TRUE(measure_delta_universal(s, u).delta.at_most(1));
    EXPECT_TRUE(measure_delta_dual(s, u).delta.at_most(1));
  }
  const auto f2 = make_f2(2, 3);
  EXPECT_TRUE(measure_delta_dual(f2, SeedDistribution::uniform(2)).delta.at_most(2));
  const auto mt = make_mt(6, 3);
  EXPECT_EQ(measure_delta_universal(mt, SeedDistribution::uniform(5)).delta, Rational::make(1, 1));
  EXPECT_EQ(measure_delta_dual(mt, SeedDistribution::uniform(5)).delta, Rational::make(1, 1));
}

TEST(Delta, PointMassGivesTwoToTheM) {
  for (const auto& s : {make_f1(2, 2), make_mt(6, 3), make_f2(2, 3)}) {
    const auto d = measure_delta_universal(s, SeedDistribution::point_mass(s.d, 1)).delta;
    EXPECT_EQ(d, Rational::make(std::uint64_t{1} << s.m, 1)) << to_text(s);
  }
}

TEST(Delta, SampledModeRecordsSeed) {
  const auto s = make_f1(4, 3);
  const auto m = measure_delta_universal(s, SeedDistribution::uniform(s.d), {200, 77});
  EXPECT_FALSE(m.exhaustive);
  EXPECT_EQ(m.prng_seed, 77u);
  const auto again = measure_delta_universal(s, SeedDistribution::uniform(s.d), {200, 77});
  EXPECT_EQ(m.delta, again.delta);
}

TEST(Delta, SizeCap) {
  EXPECT_THROW(measure_delta_universal(make_mt(30, 3), SeedDistribution::uniform(0)), dimension_error);
}

TEST(Metrics, MinEntropyExamples) {
  EXPECT_DOUBLE_EQ(h_min(std::vector<double>(8, 0.125)), 3);
  EXPECT_DOUBLE_EQ(h_min({1, 0, 0}), 0);
  EXPECT_THROW(h_min({0, 0}), std::invalid_argument);
  std::mt19937_64 gen(41);
  const auto pa = random_dist(6, gen), pe = random_dist(4, gen);
  EXPECT_NEAR(h_min_cond(JointDistribution::product(pa, pe)), h_min(pa), 1e-12);
}

TEST(Metrics, ConditionalMinEntropyOracle) {
  std::mt19937_64 gen(42);
  for (int i = 0; i < 20; ++i) {
    const auto j = random_joint(4, 3, gen);
    double c = 0;
    for (std::size_t e = 0; e < 3; ++e) c += std::max({j.at(0, e), j.at(1, e), j.at(2, e), j.at(3, e)});
    EXPECT_NEAR(h_min_cond(j), -std::log2(c), 1e-12);
    // The Q-relative version is never larger than the guessing form at Q = P_E.
    EXPECT_LE(h_min_cond(j, j.marginal_e()), h_min_cond(j) + 1e-12);
  }
}

TEST(Metrics, DistanceExamples) {
  std::mt19937_64 gen(43);
  const auto pe = random_dist(3, gen);
  const auto prod = JointDistribution::product(std::vector<double>(4, 0.25), pe);
  EXPECT_NEAR(d1_prime(prod), 0, 1e-15);
  EXPECT_NEAR(d2(prod, pe), 0, 1e-15);
  const JointDistribution point{2, 1, {1.0, 0.0}};
  EXPECT_DOUBLE_EQ(d1_prime(point), 1.0);
}

TEST(Metrics, D1BoundedByD2) {
  std::mt19937_64 gen(44);
  for (int i = 0; i < 50; ++i) {
    const auto j = random_joint(4, 5, gen);
    const auto q = random_dist(5, gen);
    EXPECT_LE(d1_prime(j), std::sqrt(d2(j, q) * 4) + 1e-12);
  }
}

TEST(Metrics, D2IdentityThroughEntropies) {
  std::mt19937_64 gen(45);
  for (int i = 0; i < 50; ++i) {
    const auto j = random_joint(3, 4, gen);
    const auto q = random_dist(4, gen);
    EXPECT_NEAR(d2(j, q), d2_from_entropies(j, q), 1e-12);
  }
}

TEST(Metrics, SupportViolation) {
  const JointDistribution j{2, 2, {0.25, 0.25, 0.25, 0.25}};
  EXPECT_THROW(d2(j, {1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(d2(j, {0.5, 0.5, 0.0}), dimension_error);
}

TEST(Sources, FlatSource) {
  EXPECT_DOUBLE_EQ(h_min(flat_source(8, 5, 1)), 5);
  const auto all = flat_source(6, 6, 3);
  for (double p : all) EXPECT_DOUBLE_EQ(p, 1.0 / 64);
  const auto pm = flat_source(6, 0, 3);
  EXPECT_EQ(std::count(pm.begin(), pm.end(), 1.0), 1);
  EXPECT_THROW(flat_source(6, 7, 3), std::invalid_argument);
  EXPECT_EQ(flat_source_support(10, 4, 8), flat_source_support(10, 4, 8));
}

TEST(Leftover, UniformSourceGivesZero) {
  for (const auto& s : {make_f1(2, 2), make_mt(6, 3), make_f2(2, 3), make_g(8, 4, 2)}) {
    const auto r = empirical_leftover(s, SeedDistribution::uniform(s.d), flat_source(s.n, s.n, 0));
    EXPECT_NEAR(r.measured, 0, 1e-12) << to_text(s);
  }
}

TEST(Leftover, F1FullEntropyExample) {
  const auto s = make_f1(2, 2);
  const auto r = empirical_leftover(s, SeedDistribution::uniform(2), flat_source(4, 4, 5));
  EXPECT_LE(r.measured, 0.5);
  EXPECT_DOUBLE_EQ(r.bound.epsilon, 0.5);
}

TEST(Leftover, UniformSeedsWithinBoundEveryT) {
  const std::vector<FamilySpec> specs = {make_f1(2, 2), make_f1(2, 3), make_f1(3, 3), make_f2(2, 3), make_f2(3, 3),
                                         make_mt(6, 3), make_mt(8, 2), make_g(8, 4, 2),   make_g(12, 6, 4),
                                         dual(make_f2(2, 3)), dual(make_f1(3, 3))};
  for (const auto& s : specs) {
    for (std::size_t t = 1; t <= s.n; ++t)
      for (std::uint64_t sel : {1u, 2u, 3u}) {
        const auto r = empirical_leftover(s, SeedDistribution::uniform(s.d), flat_source(s.n, t, sel * 100 + t));
        EXPECT_LE(r.measured, r.bound.epsilon * (1 + 1e-12)) << to_text(s) << " t=" << t;
      }
  }
}

TEST(Leftover, NonUniformSeedsWithinPenalty) {
  const std::vector<FamilySpec> specs = {make_f1(2, 2), make_f1(3, 3), make_f2(2, 3), make_mt(6, 3), make_mt(10, 4),
                                         make_f1(5, 2)};
  for (const auto& s : specs)
    for (std::size_t h = 0; h <= s.d; ++h)
      for (std::size_t t = 1; t <= s.n; ++t) {
        const auto sd = SeedDistribution::flat(s.d, h, 17 * h + t);
        const auto r = empirical_leftover(s, sd, flat_source(s.n, t, 31 * t));
        EXPECT_DOUBLE_EQ(r.seed_h_min, static_cast<double>(h));
        EXPECT_LE(r.measured, r.penalized_bound * (1 + 1e-12)) << to_text(s) << " h=" << h << " t=" << t;
      }
}

TEST(Leftover, PointMassSeedCanExceedUniformBound) {
  // A fixed map has a kernel; a source inside a coset of it is badly hashed.
  const auto s = make_f1(2, 2);
  const auto seed = BitVector::from_uint(1, 2);
  std::vector<double> src(16, 0);
  for (std::uint32_t v = 0; v < 16; ++v)
    if (evaluate(s, seed, BitVector::from_uint(v, 4)).is_zero()) src[v] = 0.25;
  const auto r = empirical_leftover(s, SeedDistribution::point_mass(2, 1), src);
  EXPECT_GT(r.measured, r.bound.epsilon);
  EXPECT_LE(r.measured, r.penalized_bound);
}

TEST(Leftover, SampledModeDeterministic) {
  const auto s = make_mt(8, 3);
  LeftoverOptions opt{50, 9};
  const auto a = empirical_leftover(s, SeedDistribution::uniform(s.d), flat_source(8, 5, 1), opt);
  const auto b = empirical_leftover(s, SeedDistribution::uniform(s.d), flat_source(8, 5, 1), opt);
  EXPECT_FALSE(a.exhaustive);
  EXPECT_EQ(a.prng_seed, 9u);
  EXPECT_DOUBLE_EQ(a.measured, b.measured);
}

TEST(TheoreticalBound, Routes) {
  EXPECT_EQ(theoretical_bound(make_f2(2, 3), 5).formula_id, "dual");
  EXPECT_EQ(theoretical_bound(make_g(12, 6, 4), 8).formula_id, "concat");
  EXPECT_DOUBLE_EQ(theoretical_bound(make_f1(2, 2), 4).epsilon, 0.5);
}

TEST(SeedOptimality, F1AttainsLowerBound) {
  for (std::size_t m : {2u, 4u, 10u, 100u, 1018u}) {
    const auto s = make_f1(m, 2);
    EXPECT_EQ(static_cast<double>(s.d), security::seed_lower_bound_dual(2.0 * m, m, 1));
    EXPECT_GT(make_mt(2 * m, m).d, s.d);
  }
}
