#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "sdl/errors.h"
#include "sdl/io.h"
#include "sdl/setarith.h"
#include "sdl/subgroup.h"

namespace sdl {
namespace {

GroupSet interval(const GroupPtr& g, Element lo, Element hi) {
  GroupSet s(g);
  for (Element x = lo; x <= hi; ++x) s.insert(x);
  return s;
}

TEST(ProductSet, Examples) {
  const GroupPtr z10 = FiniteGroup::cyclic(10);
  EXPECT_EQ(product_set(GroupSet(z10, {0, 1}), GroupSet(z10, {0, 2})), GroupSet(z10, {0, 1, 2, 3}));
  EXPECT_TRUE(product_set(GroupSet(z10), GroupSet(z10, {1})).empty());
  EXPECT_THROW(product_set(GroupSet(z10, {1}), GroupSet(FiniteGroup::cyclic(5), {1})), InputError);
}

TEST(ProductSet, MatchesOracleAndIsAssociative) {
  std::mt19937_64 rng(7);
  for (const GroupPtr& g : {FiniteGroup::cyclic(64), symmetric_group(4), FiniteGroup::abelian({2, 2, 2, 2})}) {
    const oracle::Table t = oracle::from_group(*g);
    for (int trial = 0; trial < 20; ++trial) {
      const auto ma = oracle::random_mask(t.n, 1 + rng() % 6, rng);
      const auto mb = oracle::random_mask(t.n, 1 + rng() % 6, rng);
      const auto mc = oracle::random_mask(t.n, 1 + rng() % 6, rng);
      const GroupSet a = oracle::to_set(g, ma), b = oracle::to_set(g, mb), c = oracle::to_set(g, mc);
      EXPECT_EQ(oracle::to_mask(product_set(a, b)), oracle::product(t, ma, mb));
      EXPECT_EQ(product_set(product_set(a, b), c), product_set(a, product_set(b, c)));
      EXPECT_EQ(oracle::to_mask(symmetric_power(a, 2)), oracle::sym_power(t, ma, 2));
      EXPECT_EQ(oracle::to_mask(signed_sumset(a, 2, 1)), oracle::signed_sumset(t, ma, 2, 1));
    }
  }
}

TEST(ProductSet, SymmetricPowersOfSymmetricSets) {
  const GroupPtr g = symmetric_group(4);
  GroupSet a(g, {0, 1, 5});
  a |= a.inverse();
  a.insert(g->identity());
  for (unsigned n = 1; n <= 3; ++n) EXPECT_EQ(symmetric_power(a, n), power_set(a, n));
}

TEST(Growth, SubgroupHasUnitDoubling) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  const GrowthReport r = growth_report(GroupSet(z12, {0, 4, 8}), 3);
  EXPECT_EQ(r.doubling, Rational(1));
  EXPECT_EQ(r.tripling, Rational(1));
}

TEST(Growth, IntervalInZ100) {
  const GroupPtr z = FiniteGroup::cyclic(100);
  const GrowthReport r = growth_report(interval(z, 0, 4), 2);
  EXPECT_EQ(r.square_size, 9u);
  EXPECT_EQ(r.doubling, Rational(9, 5));
  EXPECT_THROW(growth_report(GroupSet(z), 2), InputError);
}

TEST(Growth, RandomSubsetsMatchDoubleLoop) {
  const GroupPtr z = FiniteGroup::cyclic(64);
  const oracle::Table t = oracle::abelian({64});
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = oracle::random_mask(64, 8, rng);
    const GrowthReport r = growth_report(oracle::to_set(z, m), 3);
    const std::size_t sq = oracle::count(oracle::product(t, m, m));
    const std::size_t cube = oracle::count(oracle::power(t, m, 3));
    EXPECT_EQ(r.doubling, Rational(sq, 8));
    EXPECT_EQ(r.tripling, Rational(cube, 8));
    for (unsigned n = 1; n <= 3; ++n) EXPECT_EQ(r.symmetric_sizes[n - 1], oracle::count(oracle::sym_power(t, m, n)));
  }
}

TEST(Covering, Examples) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  const GroupSet h(z12, {0, 4, 8});
  const CoverResult self = covering_number(h, h, 4);
  EXPECT_EQ(self.value, 1u);

  const GroupPtr z100 = FiniteGroup::cyclic(100);
  const CoverResult small = covering_number(interval(z100, 0, 2), interval(z100, 0, 1), 4);
  EXPECT_EQ(small.value, 2u);
  EXPECT_TRUE(small.exact);

  const GroupPtr z6 = FiniteGroup::cyclic(6);
  const CoverResult whole = covering_number(GroupSet::full(z6), GroupSet(z6, {0, 1, 2}), 4);
  EXPECT_EQ(whole.value, 2u);
  EXPECT_TRUE(GroupSet::full(z6).subset_of(product_set(whole.translates, GroupSet(z6, {0, 1, 2}))));
  EXPECT_THROW(covering_number(h, GroupSet(z12), 4), InputError);
}

TEST(Covering, ExactValueIsMinimumAndAtLeastVolume) {
  const GroupPtr z = FiniteGroup::cyclic(16);
  const oracle::Table t = oracle::abelian({16});
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mx = oracle::random_mask(16, 4 + rng() % 8, rng);
    const auto ma = oracle::random_mask(16, 2 + rng() % 4, rng);
    const CoverResult r = covering_number(oracle::to_set(z, mx), oracle::to_set(z, ma), 16);
    ASSERT_TRUE(r.exact);
    EXPECT_GE(r.value, r.volume_bound);
    // Brute force over all translate sets, as 16-bit masks.
    std::uint32_t target = 0, tr[16] = {};
    for (oracle::Elem g = 0; g < 16; ++g) {
      if (mx[g]) target |= 1u << g;
      const auto m = oracle::product(t, oracle::singleton(t, g), ma);
      for (oracle::Elem i = 0; i < 16; ++i) tr[g] |= static_cast<std::uint32_t>(m[i] ? 1 : 0) << i;
    }
    std::size_t best = 17;
    for (std::uint32_t f = 1; f < (1u << 16); ++f) {
      const auto size = static_cast<std::size_t>(__builtin_popcount(f));
      if (size >= best) continue;
      std::uint32_t covered = 0;
      for (oracle::Elem g = 0; g < 16; ++g) {
        if ((f >> g) & 1) covered |= tr[g];
      }
      if ((target & ~covered) == 0) best = size;
    }
    EXPECT_EQ(r.value, best);
  }
}

TEST(RuzsaCover, Examples) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  const GroupSet h(z12, {0, 4, 8});
  EXPECT_EQ(ruzsa_cover(h, h).size(), 1u);

  const GroupPtr z100 = FiniteGroup::cyclic(100);
  const GroupSet x = interval(z100, 0, 9), y = interval(z100, 0, 4);
  const GroupSet f = ruzsa_cover(x, y);
  EXPECT_LE(f.size(), 2u);
  EXPECT_TRUE(x.subset_of(product_set(f, product_set(y, y.inverse()))));

  const GroupSet any(z100, {3, 17, 50});
  EXPECT_EQ(ruzsa_cover(any, GroupSet(z100, {0})), any);
  EXPECT_THROW(ruzsa_cover(GroupSet(z100), y), InputError);
}

TEST(Plunnecke, SubgroupHasEquality) {
  const GroupPtr g = FiniteGroup::abelian({2, 2, 2});
  const GroupSet h(g, {0, 1, 2, 3});
  const PlunneckeReport r = plunnecke_check(h, {{1, 1}, {2, 1}, {3, 2}});
  EXPECT_EQ(r.k, Rational(1));
  for (const PlunneckeRow& row : r.rows) {
    EXPECT_EQ(Rational(row.size), row.bound);
    EXPECT_FALSE(row.violated);
  }
}

TEST(Plunnecke, IntervalInZ100) {
  const GroupPtr z = FiniteGroup::cyclic(100);
  const PlunneckeReport r = plunnecke_check(interval(z, 0, 4), {{2, 1}});
  ASSERT_EQ(r.rows.size(), 1u);
  // 2A - A = {-4..8}.
  EXPECT_EQ(r.rows[0].size, 13u);
  EXPECT_EQ(r.rows[0].bound, Rational(729, 25));
  EXPECT_FALSE(r.any_violation);
}

TEST(Plunnecke, NonabelianUsesTripling) {
  const GroupPtr g = symmetric_group(3);
  const PlunneckeReport r = plunnecke_check(GroupSet(g, {0, 1, 2}), {{1, 1}});
  EXPECT_FALSE(r.abelian);
  EXPECT_FALSE(r.any_violation);
}

}  // namespace
}  // namespace sdl
