#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "dualhash/families.hpp"

using namespace dualhash;

namespace {

std::vector<FamilySpec> small_families() {
  std::vector<FamilySpec> out = {make_mt(6, 3),  make_mt(5, 1),    make_f1(2, 2),     make_f1(2, 3),
                                 make_f1(3, 3),  make_f1(4, 3),    make_f2(2, 3),     make_f2(3, 2),
                                 make_f2(4, 3),  make_f2(3, 4),    make_g(8, 4, 2),   make_g(12, 6, 4),
                                 make_f4(8, 2, 6),  make_f3(8, 2, 4)};
  const std::size_t base = out.size();
  for (std::size_t i = 0; i < base; ++i) out.push_back(dual(out[i]));
  out.push_back(compose(make_f1(2, 2), make_mt(8, 4)));
  return out;
}

std::uint64_t seed_count(const FamilySpec& s) { return std::uint64_t{1} << s.d; }

}  // namespace

TEST(Families, Dimensions) {
  const auto f1 = make_f1(2, 2);
  EXPECT_EQ(f1.n, 4u);
  EXPECT_EQ(f1.m, 2u);
  EXPECT_EQ(f1.d, 2u);
  const auto f2 = make_f2(2, 3);
  EXPECT_EQ(f2.n, 6u);
  EXPECT_EQ(f2.m, 4u);
  EXPECT_EQ(f2.d, 2u);
  const auto mt = make_mt(6, 3);
  EXPECT_EQ(mt.d, 5u);
  const auto f1big = make_f1(1018, 2);
  EXPECT_EQ(f1big.n, 2036u);
  EXPECT_EQ(f1big.d, 1018u);
  const auto g = make_g(12, 6, 4);
  EXPECT_EQ(g.n, 12u);
  EXPECT_EQ(g.m, 4u);
  EXPECT_EQ(g.d, 6u + 2u);
}

TEST(Families, SeedLayoutCoversSeed) {
  for (const auto& s : small_families()) {
    std::size_t total = 0;
    for (const auto& seg : s.seed_layout()) total += seg.bits;
    EXPECT_EQ(total, s.d) << to_text(s);
  }
}

TEST(Families, ZeroSeedF1OutputsLastBlock) {
  std::mt19937_64 gen(31);
  for (std::size_t m : {2u, 10u, 100u, 1018u}) {
    const auto s = make_f1(m, 3);
    const auto x = BitVector::random(s.n, gen);
    EXPECT_EQ(evaluate(s, BitVector(s.d), x), x.slice(2 * m, m));
  }
}

TEST(Families, EvaluateMatchesGeneratorExhaustive) {
  for (const auto& s : small_families()) {
    if (s.n > 12) continue;
    for (std::uint64_t r = 0; r < seed_count(s); ++r) {
      const auto seed = BitVector::from_uint(r, s.d);
      const auto g = generator_matrix(s, seed);
      ASSERT_EQ(g.rows(), s.m);
      ASSERT_EQ(g.cols(), s.n);
      for (std::uint64_t x = 0; x < (std::uint64_t{1} << s.n); ++x) {
        const auto xv = BitVector::from_uint(x, s.n);
        ASSERT_EQ(evaluate(s, seed, xv), dense_mul(g, xv)) << to_text(s) << " r=" << r << " x=" << x;
      }
    }
  }
}

TEST(Families, GeneratorTimesCheckTransposeIsZero) {
  for (const auto& s : small_families()) {
    if (s.n > 12) continue;
    for (std::uint64_t r = 0; r < seed_count(s); ++r) {
      const auto seed = BitVector::from_uint(r, s.d);
      const auto g = generator_matrix(s, seed), h = check_matrix(s, seed);
      ASSERT_TRUE((g * h.transpose()).is_zero()) << to_text(s) << " r=" << r;
      ASSERT_EQ(g.rank(), s.m) << to_text(s);
      ASSERT_EQ(h.rank(), s.n - s.m) << to_text(s);
      ASSERT_EQ(h, generator_matrix(dual(s), seed));
    }
  }
}

TEST(Families, DualOfDualIsIdentity) {
  for (const auto& s : small_families()) {
    EXPECT_EQ(dual(dual(s)), s);
    EXPECT_EQ(dual(s).m, s.n - s.m);
  }
}

TEST(Families, LinearityRandomLarge) {
  std::mt19937_64 gen(32);
  const std::vector<FamilySpec> specs = {make_f1(1018, 2), make_f1(100, 5), make_f2(100, 3), make_f2(127, 3),
                                         make_mt(500, 200), make_g(600, 300, 200), dual(make_f1(100, 4)),
                                         dual(make_f2(100, 4)), dual(make_mt(300, 100))};
  for (const auto& s : specs) {
    const auto seed = BitVector::random(s.d, gen);
    const auto a = BitVector::random(s.n, gen), b = BitVector::random(s.n, gen);
    EXPECT_EQ(evaluate(s, seed, a ^ b), evaluate(s, seed, a) ^ evaluate(s, seed, b)) << to_text(s);
    EXPECT_TRUE(evaluate(s, seed, BitVector(s.n)).is_zero());
  }
}

TEST(Families, F2DualMatchesExplicitTransposes) {
  // x_l + sum_i (M(r)^T)^i x_i, built from explicit matrices.
  std::mt19937_64 gen(33);
  for (auto [k, l] : std::vector<std::pair<std::size_t, std::size_t>>{{100, 3}, {52, 5}, {37, 4}}) {
    const auto s = make_f2(k, l);
    const auto& f = *field_for(k);
    const auto seed = BitVector::random(k, gen);
    const auto x = BitVector::random(s.n, gen);
    const auto mt = f.mul_matrix(seed).transpose();
    BitVector expect = x.slice((l - 1) * k, k);
    BitMatrix p = BitMatrix::identity(k);
    for (std::size_t i = 0; i + 1 < l; ++i) {
      p = mt * p;
      expect ^= dense_mul(p, x.slice(i * k, k));
    }
    EXPECT_EQ(evaluate(dual(s), seed, x), expect) << "k=" << k;
  }
}

TEST(Families, F1DualMatchesExplicitTransposes) {
  std::mt19937_64 gen(34);
  const auto s = make_f1(100, 4);
  const auto& f = *field_for(100);
  const auto seed = BitVector::random(s.d, gen);
  const auto x = BitVector::random(s.n, gen);
  const auto last = x.slice(300, 100);
  const auto y = evaluate(dual(s), seed, x);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto mt = f.mul_matrix(seed.slice(i * 100, 100)).transpose();
    EXPECT_EQ(y.slice(i * 100, 100), x.slice(i * 100, 100) ^ dense_mul(mt, last));
  }
}

TEST(Families, Claims) {
  EXPECT_EQ(make_f1(2, 3).claims().universal, 1.0);
  EXPECT_EQ(make_f1(2, 3).claims().dual, 1.0);
  EXPECT_EQ(make_f2(2, 3).claims().dual, 2.0);
  EXPECT_FALSE(make_f2(2, 3).claims().universal.has_value());
  EXPECT_EQ(dual(make_f2(2, 3)).claims().universal, 2.0);
  EXPECT_EQ(make_mt(6, 3).claims().universal, 1.0);
  EXPECT_EQ(make_mt(6, 3).claims().dual, 1.0);
}

TEST(Families, GFeasibilityAndSnapping) {
  EXPECT_TRUE(g_feasible(12, 6, 4));
  EXPECT_FALSE(g_feasible(12, 5, 4));
  EXPECT_THROW(make_g(12, 5, 4), infeasible_error);
  EXPECT_THROW(make_f3(8, 4, 6), infeasible_error);
  const auto f4 = make_f4(12, 4, 8);
  EXPECT_EQ(f4.g_l, 6u);
  const auto f3 = make_f3(24, 4, 7);  // l = 7 infeasible, snaps to 6
  EXPECT_EQ(f3.g_l, 6u);
  EXPECT_EQ(f3.requested_l, 7u);
}

TEST(Families, InfeasibleParameters) {
  EXPECT_THROW(make_mt(3, 3), infeasible_error);
  EXPECT_THROW(make_f1(2, 1), infeasible_error);
  EXPECT_THROW(make_f2(0, 3), infeasible_error);
  EXPECT_THROW(make_f1(5000, 2), field_unavailable_error);
}

TEST(Families, FeasiblePadding) {
  const auto a = feasible_f1(10, 3);
  EXPECT_EQ(a.spec.n, 12u);
  EXPECT_EQ(a.padding, 2u);
  const auto b = feasible_f2(10, 7);
  EXPECT_EQ(b.spec.k, 3u);
  EXPECT_EQ(b.spec.n, 12u);
  EXPECT_EQ(b.spec.m, 9u);
  EXPECT_EQ(b.padding, 2u);
  const auto c = feasible_f1(2036, 1018);
  EXPECT_EQ(c.padding, 0u);
  EXPECT_EQ(c.spec.d, 1018u);
}

TEST(Families, EvaluateChecksLengths) {
  const auto s = make_f1(2, 2);
  EXPECT_THROW(evaluate(s, BitVector(1), BitVector(4)), dimension_error);
  EXPECT_THROW(evaluate(s, BitVector(2), BitVector(5)), dimension_error);
  EXPECT_THROW(generator_matrix(make_f1(20, 2), BitVector(20)), dimension_error);
}

TEST(FamilyText, RoundTrip) {
  for (const auto& s : small_families()) {
    const auto text = to_text(s);
    EXPECT_EQ(to_text(parse_family(text)), text);
  }
  EXPECT_EQ(to_text(make_f1(2, 2)), "kind=f1 n=4 m=2 l=2 k=2 d=2");
}

TEST(FamilyText, Errors) {
  EXPECT_THROW(parse_family("n=4"), parse_error);
  EXPECT_THROW(parse_family("kind=zz n=4"), parse_error);
  EXPECT_THROW(parse_family("kind=f1 n=5 m=2 l=2 k=2 d=2"), parse_error);
}
