#include <gtest/gtest.h>

#include <cstdlib>
#include <numeric>

#include "oracles.h"
#include "sdl/errors.h"
#include "sdl/group.h"
#include "sdl/group_set.h"
#include "sdl/io.h"
#include "sdl/subgroup.h"

namespace sdl {
namespace {

GroupSet make(const GroupPtr& g, std::initializer_list<Element> xs) { return GroupSet(g, xs); }

TEST(FiniteGroup, KleinFourGroup) {
  const GroupPtr g = FiniteGroup::abelian({2, 2});
  EXPECT_EQ(g->order(), 4u);
  EXPECT_EQ(g->exponent(), 2u);
  EXPECT_TRUE(g->is_elementary_abelian_2());
}

TEST(FiniteGroup, SymmetricThreeFromCayleyTable) {
  const GroupPtr s3 = symmetric_group(3);
  const GroupPtr g = FiniteGroup::build(std::get<CayleySpec>(s3->spec()));
  EXPECT_EQ(g->order(), 6u);
  EXPECT_EQ(g->exponent(), 6u);
  EXPECT_FALSE(g->is_abelian());
}

TEST(FiniteGroup, NonAssociativeTableIsRejected) {
  // A noncommutative loop of order 5; every group of order 5 is cyclic.
  CayleySpec spec;
  spec.order = 5;
  spec.identity = 0;
  spec.table = {{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  EXPECT_THROW(FiniteGroup::build(spec), ValidationError);
}

TEST(FiniteGroup, NonLatinTableIsRejected) {
  CayleySpec spec;
  spec.order = 2;
  spec.table = {{0, 1}, {1, 1}};
  EXPECT_THROW(FiniteGroup::build(spec), ValidationError);
}

TEST(FiniteGroup, ModulusBelowTwoIsRejected) {
  EXPECT_THROW(FiniteGroup::abelian({3, 1}), InputError);
}

TEST(FiniteGroup, ElementOrders) {
  EXPECT_EQ(FiniteGroup::cyclic(12)->element_order(4), 3u);
  const GroupPtr g = FiniteGroup::abelian({2, 3});
  const std::int64_t one_one[] = {1, 1};
  EXPECT_EQ(g->element_order(g->encode(one_one)), 6u);
  EXPECT_EQ(g->element_order(g->identity()), 1u);
  EXPECT_THROW(g->check(6), InputError);
}

TEST(FiniteGroup, AbelianArithmeticMatchesDigitwiseOracle) {
  for (const auto& moduli : std::vector<std::vector<std::uint32_t>>{{12}, {2, 2, 2}, {4, 2}, {3, 5}, {2, 3, 4}}) {
    const GroupPtr g = FiniteGroup::abelian(moduli);
    const oracle::Table t = oracle::abelian(moduli);
    for (Element a = 0; a < g->order(); ++a) {
      EXPECT_EQ(g->inv(a), t.inv[a]);
      for (Element b = 0; b < g->order(); ++b) ASSERT_EQ(g->mul(a, b), t.op(a, b));
    }
  }
}

TEST(FiniteGroup, GroupLawsOnNamedGroups) {
  for (const GroupPtr& g : {symmetric_group(4), dihedral_group(5), FiniteGroup::abelian({4, 6})}) {
    for (Element a = 0; a < g->order(); ++a) {
      EXPECT_EQ(g->mul(a, g->inv(a)), g->identity());
      EXPECT_EQ(g->exponent() % g->element_order(a), 0u);
      for (Element b = 0; b < g->order(); ++b) {
        for (Element c = 0; c < g->order(); c += 3) {
          ASSERT_EQ(g->mul(g->mul(a, b), c), g->mul(a, g->mul(b, c)));
        }
      }
    }
  }
}

TEST(FiniteGroup, OrderCapHonoursEnvironment) {
  ::setenv("SDL_MAX_ORDER", "16", 1);
  EXPECT_THROW(FiniteGroup::cyclic(17), CapacityError);
  ::unsetenv("SDL_MAX_ORDER");
  EXPECT_NO_THROW(FiniteGroup::cyclic(17));
}

TEST(GroupSet, BasicOperations) {
  const GroupPtr g = FiniteGroup::cyclic(10);
  GroupSet a = make(g, {1, 3, 5});
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.left_translate(2), make(g, {3, 5, 7}));
  EXPECT_EQ(a.inverse(), make(g, {9, 7, 5}));
  EXPECT_EQ(a.complement().size(), 7u);
  EXPECT_EQ(GroupSet::from_hex(g, a.to_hex()), a);
  EXPECT_EQ(a.symmetric_difference_size(make(g, {3, 4})), 3u);
  EXPECT_THROW(a.require_same_group(GroupSet(FiniteGroup::cyclic(5)), "test"), InputError);
}

TEST(Subgroup, ClosureExamples) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  const Element four[] = {4};
  EXPECT_EQ(generate_closure(z12, four).set, make(z12, {0, 4, 8}));
  EXPECT_EQ(generate_closure(z12, std::span<const Element>{}).set, make(z12, {0}));

  const GroupPtr s3 = symmetric_group(3);
  Element transposition = 0, three_cycle = 0;
  for (Element x = 0; x < 6; ++x) {
    if (s3->element_order(x) == 2) transposition = x;
    if (s3->element_order(x) == 3) three_cycle = x;
  }
  const Element gens[] = {transposition, three_cycle};
  EXPECT_EQ(generate_closure(s3, gens).set.size(), 6u);
}

TEST(Subgroup, EnumerationCounts) {
  EXPECT_EQ(enumerate_subgroups(FiniteGroup::cyclic(4)).size(), 3u);
  EXPECT_EQ(enumerate_subgroups(FiniteGroup::abelian({2, 2})).size(), 5u);
  EXPECT_EQ(enumerate_subgroups(FiniteGroup::abelian({2, 2, 2})).size(), 16u);
  for (std::uint32_t n = 2; n <= 60; ++n) {
    std::size_t divisors = 0;
    for (std::uint32_t d = 1; d <= n; ++d) divisors += n % d == 0;
    EXPECT_EQ(enumerate_subgroups(FiniteGroup::cyclic(n)).size(), divisors) << "Z_" << n;
  }
}

TEST(Subgroup, EnumerationMatchesOracle) {
  for (const GroupPtr& g : {symmetric_group(4), dihedral_group(6), FiniteGroup::abelian({4, 4}),
                            FiniteGroup::abelian({2, 2, 2, 2})}) {
    const oracle::Table t = oracle::from_group(*g);
    const auto expected = oracle::all_subgroups(t);
    const auto got = enumerate_subgroups(g);
    ASSERT_EQ(got.size(), expected.size()) << g->describe();
    std::set<oracle::Mask> got_masks;
    for (const Subgroup& s : got) {
      EXPECT_TRUE(oracle::is_subgroup(t, oracle::to_mask(s.set)));
      EXPECT_EQ(generate_closure(g, s.generators).set, s.set);
      got_masks.insert(oracle::to_mask(s.set));
    }
    EXPECT_EQ(got_masks, std::set<oracle::Mask>(expected.begin(), expected.end()));
  }
}

TEST(Subgroup, EnumerationCapacity) {
  EXPECT_THROW(enumerate_subgroups(FiniteGroup::abelian(std::vector<std::uint32_t>(12, 2))), CapacityError);
}

TEST(Subgroup, NormalityInSymmetricGroup) {
  const GroupPtr s3 = symmetric_group(3);
  GroupSet a3(s3), order_two(s3);
  for (Element x = 0; x < 6; ++x) {
    if (s3->element_order(x) != 2) a3.insert(x);
  }
  for (Element x = 0; x < 6; ++x) {
    if (s3->element_order(x) == 2) {
      order_two = make(s3, {s3->identity(), x});
      break;
    }
  }
  EXPECT_TRUE(is_normal(a3));
  EXPECT_FALSE(is_normal(order_two));
}

TEST(Coset, Examples) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  const auto w = is_coset(make(z12, {3, 7, 11}));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->subgroup.set, make(z12, {0, 4, 8}));
  EXPECT_EQ(w->representative, 3u);
  EXPECT_FALSE(is_coset(make(z12, {0, 1, 3})).has_value());
  const auto zero = is_coset(make(z12, {0}));
  ASSERT_TRUE(zero.has_value());
  EXPECT_EQ(zero->subgroup.set, make(z12, {0}));
  EXPECT_THROW(is_coset(GroupSet(z12)), InputError);
}

TEST(Coset, AgreesWithOracleOnDihedralGroup) {
  const GroupPtr g = dihedral_group(4);
  const oracle::Table t = oracle::from_group(*g);
  for (std::uint32_t mask = 1; mask < (1u << g->order()); ++mask) {
    oracle::Mask m(g->order(), 0);
    for (Element i = 0; i < g->order(); ++i) m[i] = (mask >> i) & 1;
    const GroupSet a = oracle::to_set(g, m);
    const auto w = is_coset(a);
    ASSERT_EQ(w.has_value(), oracle::is_left_coset(t, m)) << a.to_hex();
    if (w) EXPECT_EQ(w->subgroup.set.left_translate(w->representative), a);
  }
}

}  // namespace
}  // namespace sdl
