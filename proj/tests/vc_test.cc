#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "sdl/errors.h"
#include "sdl/io.h"
#include "sdl/setarith.h"
#include "sdl/subgroup.h"
#include "sdl/vc.h"

namespace sdl {
namespace {

TranslateFamily left_family(const GroupSet& a) { return TranslateFamily{a, Side::kLeft, std::nullopt}; }

GroupSet from_bits(const GroupPtr& g, std::uint32_t bits) {
  GroupSet s(g);
  for (Element i = 0; i < g->order(); ++i) {
    if ((bits >> i) & 1) s.insert(i);
  }
  return s;
}

SetSystem random_system(std::size_t ground, std::size_t members, double density, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  SetSystem s;
  s.ground_size = ground;
  for (std::size_t m = 0; m < members; ++m) {
    Bits b(ground);
    for (std::size_t i = 0; i < ground; ++i) b[i] = coin(rng);
    s.members.push_back(b);
  }
  return s;
}

std::vector<oracle::Mask> masks(const SetSystem& s) {
  std::vector<oracle::Mask> out;
  for (const Bits& b : s.members) {
    oracle::Mask m(s.ground_size, 0);
    for (std::size_t i = 0; i < s.ground_size; ++i) m[i] = b[i];
    out.push_back(m);
  }
  return out;
}

TEST(VcDimension, Examples) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  EXPECT_EQ(vc_dimension(left_family(GroupSet(z12, {1, 5, 9}))).dimension, 1u);
  EXPECT_EQ(vc_dimension(left_family(GroupSet(z12, {7}))).dimension, 1u);
  EXPECT_EQ(vc_dimension(left_family(GroupSet::full(z12))).dimension, 0u);
  const GroupPtr z8 = FiniteGroup::cyclic(8);
  const TranslateVc arc = vc_dimension(left_family(GroupSet(z8, {0, 1, 2})));
  EXPECT_EQ(arc.dimension, 2u);
  EXPECT_EQ(oracle::translate_vc(oracle::abelian({8}), oracle::from_list(8, {0, 1, 2}), true), 2u);
}

TEST(VcDimension, WitnessesRealizeEveryTrace) {
  const GroupPtr g = symmetric_group(4);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const GroupSet a = oracle::to_set(g, oracle::random_mask(24, 6 + rng() % 8, rng));
    for (Side side : {Side::kLeft, Side::kRight}) {
      const TranslateFamily f{a, side, std::nullopt};
      const TranslateVc r = vc_dimension(f);
      ASSERT_EQ(r.shattered.size(), r.dimension);
      ASSERT_EQ(r.translates.size(), std::size_t{1} << r.dimension);
      for (std::size_t mask = 0; mask < r.translates.size(); ++mask) {
        const GroupSet m = f.member(r.translates[mask]);
        for (std::size_t i = 0; i < r.dimension; ++i) EXPECT_EQ(m.contains(r.shattered[i]), ((mask >> i) & 1) == 1);
      }
      EXPECT_EQ(r.dimension, oracle::translate_vc(oracle::from_group(*g), oracle::to_mask(a), side == Side::kLeft));
    }
  }
}

TEST(Nip, AgreesWithOracleOnAllSubsetsOfZ12) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  const oracle::Table t = oracle::abelian({12});
  for (std::uint32_t bits = 0; bits < (1u << 12); ++bits) {
    const GroupSet a = from_bits(z12, bits);
    const std::size_t vc = oracle::translate_vc(t, oracle::to_mask(a), true);
    ASSERT_EQ(vc_dimension(left_family(a)).dimension, vc) << a.to_hex();
    for (std::size_t d = 1; d <= 3; ++d) ASSERT_EQ(is_d_nip(a, d).nip, vc < d) << a.to_hex();
  }
}

TEST(Nip, Examples) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  EXPECT_TRUE(is_d_nip(GroupSet(z12, {2, 6, 10}), 2).nip);
  EXPECT_TRUE(is_d_nip(GroupSet::full(z12), 1).nip);
}

TEST(Nip, PlantedShatteredTriple) {
  // Points 0,1,2 and translates g_S = -4S: p_i - g_S = i + 4S lies in A iff
  // i is in S. The remaining elements are a random half.
  const GroupPtr z32 = FiniteGroup::cyclic(32);
  std::mt19937_64 rng(17);
  GroupSet a(z32);
  std::vector<bool> fixed(32, false);
  for (Element s = 0; s < 8; ++s) {
    for (Element i = 0; i < 3; ++i) {
      fixed[i + 4 * s] = true;
      if ((s >> i) & 1) a.insert(i + 4 * s);
    }
  }
  for (Element x = 0; x < 32; ++x) {
    if (!fixed[x] && rng() % 2) a.insert(x);
  }
  const NipResult r = is_d_nip(a, 3);
  ASSERT_FALSE(r.nip);
  ASSERT_EQ(r.points.size(), 3u);
  ASSERT_EQ(r.translates.size(), 8u);
  for (std::size_t mask = 0; mask < 8; ++mask) {
    const GroupSet m = a.left_translate(r.translates[mask]);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(m.contains(r.points[i]), ((mask >> i) & 1) == 1);
  }
}

TEST(Stability, Examples) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  EXPECT_TRUE(is_d_stable(GroupSet(z12, {1, 4, 7, 10}), 2).stable);
  EXPECT_TRUE(is_d_stable(GroupSet(z12), 3).stable);

  const GroupPtr z40 = FiniteGroup::cyclic(40);
  GroupSet interval(z40);
  for (Element x = 0; x <= 9; ++x) interval.insert(x);
  const StabilityResult r = is_d_stable(interval, 2);
  ASSERT_FALSE(r.stable);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(interval.contains(z40->mul(r.a[i], r.b[j])), i <= j);
    }
  }
}

TEST(Stability, AgreesWithLadderOracleAndImpliesNip) {
  const GroupPtr g = dihedral_group(4);
  const oracle::Table t = oracle::from_group(*g);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const oracle::Mask m = oracle::random_mask(8, rng() % 9, rng);
    const GroupSet a = oracle::to_set(g, m);
    for (std::size_t d = 1; d <= 3; ++d) {
      const bool stable = is_d_stable(a, d).stable;
      ASSERT_EQ(stable, !oracle::has_ladder(t, m, d)) << a.to_hex() << " d=" << d;
      if (stable) EXPECT_TRUE(is_d_nip(a, d).nip);
    }
  }
}

TEST(Omission, HalfGraphAndLadders) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  EXPECT_TRUE(omits_bipartite(GroupSet(z12, {0, 3, 6, 9}), BipartiteGraphSpec::half_graph(2)).omits);
  EXPECT_EQ(nip_bound_from_omission(BipartiteGraphSpec::half_graph(2)), 3u);

  const oracle::Table t = oracle::abelian({12});
  std::mt19937_64 rng(31);
  const BipartiteGraphSpec half = BipartiteGraphSpec::half_graph(2);
  for (int trial = 0; trial < 40; ++trial) {
    const oracle::Mask m = oracle::random_mask(12, 1 + rng() % 8, rng);
    const GroupSet a = oracle::to_set(z12, m);
    const OmissionResult r = omits_bipartite(a, half);
    ASSERT_EQ(r.omits, !oracle::has_ladder(t, m, 2));
    if (!r.omits) {
      for (std::size_t v = 0; v < 2; ++v) {
        for (std::size_t w = 0; w < 2; ++w) {
          EXPECT_EQ(a.contains(z12->mul(r.right[w], r.left[v])), half.has_edge(v, w));
        }
      }
    }
  }
}

TEST(Omission, PowerSetCopyMeansNotNip) {
  const GroupPtr z16 = FiniteGroup::cyclic(16);
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const GroupSet a = oracle::to_set(z16, oracle::random_mask(16, 3 + rng() % 10, rng));
    const bool omits = omits_bipartite(a, BipartiteGraphSpec::power_set(2)).omits;
    EXPECT_EQ(omits, is_d_nip(a, 2).nip) << a.to_hex();
  }
  EXPECT_THROW(omits_bipartite(GroupSet(z16, {1}), BipartiteGraphSpec::half_graph(4)), CapacityError);
}

TEST(EpsApproximation, Examples) {
  const GroupPtr g = FiniteGroup::abelian({2, 2, 2});
  const TranslateFamily h{GroupSet(g, {0, 1, 2, 3}), Side::kLeft, std::nullopt};
  EXPECT_TRUE(verify_eps_approximation(h, {}, Rational(1)));
  // One point in each coset of the index-2 subgroup.
  EXPECT_TRUE(verify_eps_approximation(h, {0, 4}, Rational(1, 4)));
  EXPECT_FALSE(verify_eps_approximation(h, {0, 1}, Rational(1, 4)));

  const GroupPtr z64 = FiniteGroup::cyclic(64);
  std::mt19937_64 rng(41);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TranslateFamily f{oracle::to_set(z64, oracle::random_mask(64, 20, rng)), Side::kLeft, std::nullopt};
    const EpsApproximation e = eps_approximation(f, Rational(1, 5), seed);
    EXPECT_TRUE(verify_eps_approximation(f, e.sample, Rational(1, 5)));
    EXPECT_EQ(eps_approximation(f, Rational(1, 5), seed).sample, e.sample);
  }
}

TEST(HittingSet, Examples) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  EXPECT_EQ(greedy_hitting_set({GroupSet(z12, {0, 1}), GroupSet(z12, {0, 5}), GroupSet(z12, {0})}).points,
            GroupSet(z12, {0}));
  EXPECT_EQ(greedy_hitting_set({GroupSet(z12, {1}), GroupSet(z12, {2, 3}), GroupSet(z12, {4})}).points.size(), 3u);
  EXPECT_THROW(greedy_hitting_set({GroupSet(z12, {1}), GroupSet(z12)}), InputError);
}

TEST(HittingSet, DenseTranslatesMatchExactMinimum) {
  const GroupPtr z16 = FiniteGroup::cyclic(16);
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 25; ++trial) {
    const GroupSet a = oracle::to_set(z16, oracle::random_mask(16, 8 + rng() % 5, rng));
    std::vector<GroupSet> members;
    std::vector<std::uint32_t> bits;
    for (Element g = 0; g < 16; ++g) {
      members.push_back(a.left_translate(g));
      std::uint32_t b = 0;
      for (Element x : members.back().elements()) b |= 1u << x;
      bits.push_back(b);
    }
    const HittingSet h = greedy_hitting_set(members);
    for (const GroupSet& m : members) EXPECT_TRUE(m.intersects(h.points));
    std::size_t best = 17;
    for (std::uint32_t f = 1; f < (1u << 16); ++f) {
      const auto size = static_cast<std::size_t>(__builtin_popcount(f));
      if (size >= best) continue;
      bool hits = true;
      for (std::uint32_t b : bits) hits = hits && (b & f);
      if (hits) best = size;
    }
    EXPECT_GE(h.points.size(), h.fractional_lower_bound);
    EXPECT_EQ(h.points.size(), best) << a.to_hex();
  }
}

TEST(Sandwich, Examples) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  const Sandwich sub = nip_sandwich(GroupSet(z12, {0, 4, 8}));
  EXPECT_EQ(sub.e, GroupSet(z12, {0}));
  EXPECT_EQ(sub.f, GroupSet(z12, {0}));

  const GroupPtr z100 = FiniteGroup::cyclic(100);
  GroupSet a(z100);
  for (Element x = 0; x <= 9; ++x) a.insert(x);
  const Sandwich s = nip_sandwich(a);
  EXPECT_EQ(s.sym2.size(), 37u);
  EXPECT_LE(s.e.size(), 5u);
  EXPECT_TRUE(s.sym2.subset_of(product_set(s.e, a)));
  EXPECT_THROW(nip_sandwich(GroupSet(z100)), InputError);
}

TEST(Sandwich, NonabelianCosetMatchesOracle) {
  const GroupPtr g = symmetric_group(4);
  const oracle::Table t = oracle::from_group(*g);
  for (const Subgroup& h : enumerate_subgroups(g)) {
    for (Element rep : {Element{0}, Element{5}, Element{13}}) {
      const GroupSet a = h.set.left_translate(rep);
      const Sandwich s = nip_sandwich(a);
      const oracle::Mask ma = oracle::to_mask(a);
      const oracle::Mask sym2 = oracle::sym_power(t, ma, 2), sym3 = oracle::sym_power(t, ma, 3);
      const oracle::Mask me = oracle::to_mask(s.e), mf = oracle::to_mask(s.f);
      EXPECT_TRUE(oracle::subset(me, sym3));
      EXPECT_TRUE(oracle::subset(mf, sym3));
      EXPECT_TRUE(oracle::subset(sym2, oracle::product(t, me, ma)));
      EXPECT_TRUE(oracle::subset(sym2, oracle::product(t, ma, mf)));
    }
  }
}

TEST(VcCalculus, RandomFamiliesMatchOracle) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t ground = 4 + rng() % 9;
    const SetSystem s1 = random_system(ground, 2 + rng() % 10, 0.5, rng);
    const SetSystem s2 = random_system(ground, 2 + rng() % 10, 0.4, rng);
    const VcCalculusReport r = vc_calculus_check(s1, s2);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.vc1, oracle::vc_dimension(ground, masks(s1)));
    EXPECT_EQ(r.vc2, oracle::vc_dimension(ground, masks(s2)));
    EXPECT_EQ(r.complement_vc, r.vc1);
    EXPECT_EQ(r.intersection_vc, oracle::vc_dimension(ground, masks(intersection_family(s1, s2))));
    const SetSystem dual = s1.dual();
    EXPECT_EQ(r.dual_vc, oracle::vc_dimension(dual.ground_size, masks(dual)));
  }
}

TEST(VcCalculus, RightTranslatesOfNipSets) {
  const GroupPtr g = dihedral_group(8);
  const oracle::Table t = oracle::from_group(*g);
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::Mask m = oracle::random_mask(16, 2 + rng() % 10, rng);
    const SideReport r = translate_side_check(oracle::to_set(g, m));
    EXPECT_EQ(r.left_vc, oracle::translate_vc(t, m, true));
    EXPECT_EQ(r.right_vc, oracle::translate_vc(t, m, false));
    EXPECT_TRUE(r.ok);
  }
}

}  // namespace
}  // namespace sdl
