#pragma once

#include <optional>
#include <vector>

#include "sdl/group_set.h"

namespace sdl {

struct Subgroup {
  GroupSet set;
  std::vector<Element> generators;  // closure(generators) == set
  bool normal_in_group = false;
};

// Smallest subgroup containing gens; empty gens gives {identity}.
Subgroup generate_closure(const GroupPtr& group, std::span<const Element> gens);
Subgroup generate_closure(const GroupSet& gens);

// Contains the identity and is closed under the operation (finite, so
// inverses follow).
bool is_subgroup(const GroupSet& s);
// Wraps a subgroup with a greedy generating set. Throws InputError otherwise.
Subgroup subgroup_from_set(GroupSet h);
bool is_normal(const GroupSet& h);
// gHg^{-1} == H for every g in `by`.
bool is_normalized_by(const GroupSet& h, const GroupSet& by);

inline constexpr std::size_t kDefaultSubgroupCap = 512;
inline constexpr std::size_t kMaxElementaryDimension = 10;
inline constexpr std::size_t kMaxSubgroupCount = std::size_t{1} << 21;

// Every subgroup, sorted by order and then lexicographically. Elementary
// abelian 2-groups use a row-echelon subspace enumerator capped by dimension.
// Throws CapacityError beyond the caps.
std::vector<Subgroup> enumerate_subgroups(const GroupPtr& group, std::size_t cap = kDefaultSubgroupCap);

// Whether enumerate_subgroups would accept this group.
bool subgroup_enumeration_feasible(const FiniteGroup& group, std::size_t cap = kDefaultSubgroupCap);

struct CosetWitness {
  Subgroup subgroup;
  Element representative;  // A == representative * subgroup
};

// Left-coset test. Throws InputError on empty A.
std::optional<CosetWitness> is_coset(const GroupSet& a);

}  // namespace sdl
