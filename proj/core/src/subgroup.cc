#include "sdl/subgroup.h"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "sdl/errors.h"

namespace sdl {

namespace {

// Closes `seed` (which must contain the identity) under right
// multiplication by gens.
GroupSet close_under(GroupSet seed, std::span<const Element> gens) {
  const FiniteGroup& G = seed.group();
  std::vector<Element> frontier = seed.elements();
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (Element x : frontier) {
      for (Element g : gens) {
        const Element y = G.mul(x, g);
        if (!seed.contains(y)) {
          seed.insert(y);
          next.push_back(y);
        }
      }
    }
    frontier = std::move(next);
  }
  return seed;
}

// Greedy generating set: keep an element when it is outside the closure so far.
std::vector<Element> greedy_generators(const GroupSet& h) {
  std::vector<Element> gens;
  GroupSet current = GroupSet::singleton(h.group_ptr(), h.group().identity());
  h.for_each([&](Element x) {
    if (!current.contains(x)) {
      gens.push_back(x);
      current = close_under(current, gens);
    }
  });
  return gens;
}

Subgroup make_subgroup(GroupSet set, std::vector<Element> gens) {
  Subgroup s{std::move(set), std::move(gens), false};
  s.normal_in_group = s.set.group().is_abelian() || is_normal(s.set);
  return s;
}

std::uint64_t gaussian_total(unsigned n) {
  // Number of subspaces of F_2^n: sum over k of the Gaussian binomial [n k]_2.
  std::vector<std::uint64_t> row{1};
  std::uint64_t total = 0;
  // [n k] via recurrence [n k] = [n-1 k-1] + 2^k [n-1 k].
  for (unsigned m = 1; m <= n; ++m) {
    std::vector<std::uint64_t> next(m + 1, 0);
    for (unsigned k = 0; k <= m; ++k) {
      std::uint64_t v = 0;
      if (k >= 1) v += row[k - 1];
      if (k < m) v += (std::uint64_t{1} << k) * row[k];
      next[k] = v;
    }
    row = std::move(next);
  }
  for (std::uint64_t v : row) total += v;
  return total;
}

std::vector<Subgroup> enumerate_f2_subspaces(const GroupPtr& group) {
  const unsigned n = static_cast<unsigned>(group->moduli().size());
  std::vector<Subgroup> out;
  out.reserve(gaussian_total(n));
  std::vector<Element> basis;

  // Rows in reduced echelon form: pivot = lowest set bit, pivots strictly
  // increasing, each row zero on the other rows' pivot columns.
  auto emit = [&](const std::vector<Element>& rows) {
    GroupSet span(group);
    std::vector<Element> elems{0};
    for (Element r : rows) {
      const std::size_t m = elems.size();
      for (std::size_t i = 0; i < m; ++i) elems.push_back(elems[i] ^ r);
    }
    for (Element e : elems) span.insert(e);
    out.push_back(Subgroup{std::move(span), rows, true});
  };

  for (unsigned k = 0; k <= n; ++k) {
    // Iterate over pivot sets of size k.
    std::vector<unsigned> piv(k);
    std::iota(piv.begin(), piv.end(), 0u);
    while (true) {
      std::uint32_t pivot_mask = 0;
      for (unsigned p : piv) pivot_mask |= 1u << p;
      // Free positions per row: non-pivot bits above the row's pivot.
      std::vector<std::vector<unsigned>> free(k);
      std::size_t total_free = 0;
      for (unsigned i = 0; i < k; ++i) {
        for (unsigned b = piv[i] + 1; b < n; ++b) {
          if (!(pivot_mask & (1u << b))) free[i].push_back(b);
        }
        total_free += free[i].size();
      }
      for (std::uint64_t assign = 0; assign < (std::uint64_t{1} << total_free); ++assign) {
        std::vector<Element> rows(k);
        std::size_t bit = 0;
        for (unsigned i = 0; i < k; ++i) {
          Element r = 1u << piv[i];
          for (unsigned b : free[i]) {
            if ((assign >> bit) & 1u) r |= 1u << b;
            ++bit;
          }
          rows[i] = r;
        }
        emit(rows);
      }
      // Next combination.
      int i = static_cast<int>(k) - 1;
      while (i >= 0 && piv[i] == n - k + static_cast<unsigned>(i)) --i;
      if (i < 0) break;
      ++piv[i];
      for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
  }
  return out;
}

std::vector<Subgroup> enumerate_by_joins(const GroupPtr& group) {
  const FiniteGroup& G = *group;
  std::unordered_set<GroupSet, GroupSetHash> seen;
  std::vector<Subgroup> all;

  std::vector<std::pair<Element, GroupSet>> cyclic;
  for (Element g = 0; g < G.order(); ++g) {
    const Element gens[] = {g};
    GroupSet c = close_under(GroupSet::singleton(group, G.identity()), gens);
    if (seen.insert(c).second) {
      cyclic.emplace_back(g, c);
      all.push_back(Subgroup{c, g == G.identity() ? std::vector<Element>{} : std::vector<Element>{g}, false});
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (const auto& [c, cset] : cyclic) {
      if (all[i].set.contains(c)) continue;
      std::vector<Element> gens = all[i].generators;
      gens.push_back(c);
      GroupSet joined = close_under(all[i].set, gens);
      if (seen.insert(joined).second) {
        if (all.size() >= kMaxSubgroupCount) throw CapacityError("subgroup count exceeds enumeration cap");
        all.push_back(Subgroup{std::move(joined), std::move(gens), false});
      }
    }
  }
  for (auto& s : all) s.normal_in_group = G.is_abelian() || is_normal(s.set);
  return all;
}

}  // namespace

Subgroup generate_closure(const GroupPtr& group, std::span<const Element> gens) {
  for (Element g : gens) group->check(g);
  GroupSet set = close_under(GroupSet::singleton(group, group->identity()), gens);
  return make_subgroup(std::move(set), std::vector<Element>(gens.begin(), gens.end()));
}

Subgroup generate_closure(const GroupSet& gens) {
  const std::vector<Element> e = gens.elements();
  return generate_closure(gens.group_ptr(), e);
}

bool is_subgroup(const GroupSet& s) {
  const FiniteGroup& G = s.group();
  if (!s.contains(G.identity())) return false;
  bool closed = true;
  s.for_each([&](Element x) {
    if (closed && !s.left_translate(x).subset_of(s)) closed = false;
  });
  return closed;
}

Subgroup subgroup_from_set(GroupSet h) {
  if (!is_subgroup(h)) throw InputError("set is not a subgroup");
  std::vector<Element> gens = greedy_generators(h);
  return make_subgroup(std::move(h), std::move(gens));
}

bool is_normalized_by(const GroupSet& h, const GroupSet& by) {
  const FiniteGroup& G = h.group();
  bool ok = true;
  by.for_each([&](Element g) {
    if (!ok) return;
    const Element gi = G.inv(g);
    h.for_each([&](Element x) {
      if (ok && !h.contains(G.mul(G.mul(g, x), gi))) ok = false;
    });
  });
  return ok;
}

bool is_normal(const GroupSet& h) {
  if (h.group().is_abelian()) return true;
  return is_normalized_by(h, GroupSet::full(h.group_ptr()));
}

bool subgroup_enumeration_feasible(const FiniteGroup& group, std::size_t cap) {
  if (group.is_elementary_abelian_2()) return group.moduli().size() <= kMaxElementaryDimension &&
                                              gaussian_total(static_cast<unsigned>(group.moduli().size())) <= kMaxSubgroupCount;
  return group.order() <= cap;
}

std::vector<Subgroup> enumerate_subgroups(const GroupPtr& group, std::size_t cap) {
  std::vector<Subgroup> subs;
  if (group->is_elementary_abelian_2()) {
    const std::size_t n = group->moduli().size();
    if (n > kMaxElementaryDimension) {
      throw CapacityError("F_2^" + std::to_string(n) + " exceeds the subspace enumeration cap; use a constructive route");
    }
    if (gaussian_total(static_cast<unsigned>(n)) > kMaxSubgroupCount) {
      throw CapacityError("F_2^" + std::to_string(n) + " has too many subspaces to materialize; use a constructive route");
    }
    subs = enumerate_f2_subspaces(group);
  } else {
    if (group->order() > cap) {
      throw CapacityError("group order " + std::to_string(group->order()) + " exceeds subgroup enumeration cap " +
                          std::to_string(cap) + "; use a constructive route");
    }
    subs = enumerate_by_joins(group);
  }
  std::vector<std::vector<Element>> keys(subs.size());
  for (std::size_t i = 0; i < subs.size(); ++i) keys[i] = subs[i].set.elements();
  std::vector<std::size_t> idx(subs.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a].size() != keys[b].size()) return keys[a].size() < keys[b].size();
    return keys[a] < keys[b];
  });
  std::vector<Subgroup> sorted;
  sorted.reserve(subs.size());
  for (std::size_t i : idx) sorted.push_back(std::move(subs[i]));
  return sorted;
}

std::optional<CosetWitness> is_coset(const GroupSet& a) {
  if (a.empty()) throw InputError("is_coset: empty set");
  const FiniteGroup& G = a.group();
  const Element rep = a.min();
  GroupSet h = a.left_translate(G.inv(rep));
  if (!is_subgroup(h)) return std::nullopt;
  std::vector<Element> gens = greedy_generators(h);
  return CosetWitness{make_subgroup(std::move(h), std::move(gens)), rep};
}

}  // namespace sdl
