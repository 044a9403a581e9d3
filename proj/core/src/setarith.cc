#include "sdl/setarith.h"

#include <algorithm>

#include "sdl/errors.h"

namespace sdl {

GroupSet product_set(const GroupSet& a, const GroupSet& b) {
  a.require_same_group(b, "product_set");
  GroupSet out(a.group_ptr());
  if (a.empty() || b.empty()) return out;
  // Iterate over the smaller side and OR translates of the larger one.
  if (a.size() <= b.size()) {
    a.for_each([&](Element x) { out |= b.left_translate(x); });
  } else {
    b.for_each([&](Element y) { out |= a.right_translate(y); });
  }
  return out;
}

GroupSet power_set(const GroupSet& a, unsigned n) {
  GroupSet out = GroupSet::singleton(a.group_ptr(), a.group().identity());
  for (unsigned i = 0; i < n; ++i) out = product_set(out, a);
  return out;
}

GroupSet symmetric_power(const GroupSet& a, unsigned n) {
  const GroupSet base = a | a.inverse();
  GroupSet out = power_set(base, n);
  out.insert(a.group().identity());
  return out;
}

GroupSet signed_sumset(const GroupSet& a, unsigned n, unsigned m) {
  return product_set(power_set(a, n), power_set(a.inverse(), m));
}

GrowthReport growth_report(const GroupSet& a, unsigned n_max) {
  if (a.empty()) throw InputError("growth_report: empty set");
  if (n_max < 1) throw InputError("growth_report: n_max must be >= 1");
  GrowthReport r;
  r.size = a.size();
  const GroupSet sq = product_set(a, a);
  const GroupSet cube = product_set(sq, a);
  r.square_size = sq.size();
  r.cube_size = cube.size();
  r.doubling = Rational(r.square_size, r.size);
  r.tripling = Rational(r.cube_size, r.size);
  const GroupSet base = a | a.inverse();
  GroupSet acc = base;
  for (unsigned i = 1; i <= n_max; ++i) {
    if (i > 1) acc = product_set(acc, base);
    GroupSet hull = acc;
    hull.insert(a.group().identity());
    r.symmetric_sizes.push_back(hull.size());
  }
  std::size_t best = 0;
  a.for_each([&](Element x) {
    best = std::max(best, product_set(a.right_translate(x), a).size());
  });
  r.max_aaa_ratio = Rational(best, r.size);
  return r;
}

namespace {

struct CoverSearch {
  std::vector<GroupSet> candidates;  // translates gA restricted to X
  std::vector<Element> candidate_g;
  std::vector<std::vector<std::size_t>> covering;  // per element of X: candidate ids
  std::size_t max_gain = 0;
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> best;

  bool dfs(const GroupSet& uncovered, std::size_t budget) {
    if (uncovered.empty()) {
      best = chosen;
      return true;
    }
    if (budget == 0) return false;
    if (uncovered.size() > budget * max_gain) return false;
    // Branch on the uncovered point with the fewest covering candidates.
    std::size_t pick_count = SIZE_MAX;
    Element pick = 0;
    uncovered.for_each([&](Element x) {
      const std::size_t c = covering[x].size();
      if (c < pick_count) {
        pick_count = c;
        pick = x;
      }
    });
    for (std::size_t id : covering[pick]) {
      chosen.push_back(id);
      if (dfs(uncovered - candidates[id], budget - 1)) return true;
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace

CoverResult covering_number(const GroupSet& x, const GroupSet& a, std::size_t exact_limit) {
  x.require_same_group(a, "covering_number");
  if (a.empty()) throw InputError("covering_number: empty translate set");
  const FiniteGroup& G = x.group();
  CoverResult result;
  result.translates = GroupSet(x.group_ptr());
  result.volume_bound = (x.size() + a.size() - 1) / a.size();
  if (x.empty()) {
    result.exact = true;
    return result;
  }

  CoverSearch s;
  s.covering.resize(G.order());
  // Only g with gA ∩ X nonempty matter: g ∈ X A^{-1}.
  const GroupSet useful = product_set(x, a.inverse());
  useful.for_each([&](Element g) {
    GroupSet t = a.left_translate(g) & x;
    if (t.empty()) return;
    const std::size_t id = s.candidates.size();
    t.for_each([&](Element p) { s.covering[p].push_back(id); });
    s.max_gain = std::max(s.max_gain, t.size());
    s.candidates.push_back(std::move(t));
    s.candidate_g.push_back(g);
  });

  // Greedy: largest new coverage, smallest g on ties.
  GroupSet uncovered = x;
  std::vector<std::size_t> greedy;
  while (!uncovered.empty()) {
    std::size_t best_id = 0, best_gain = 0;
    for (std::size_t id = 0; id < s.candidates.size(); ++id) {
      const std::size_t gain = s.candidates[id].intersection_size(uncovered);
      if (gain > best_gain) {
        best_gain = gain;
        best_id = id;
      }
    }
    greedy.push_back(best_id);
    uncovered -= s.candidates[best_id];
  }
  std::vector<std::size_t> solution = greedy;
  result.exact = greedy.size() <= result.volume_bound;

  if (!result.exact && greedy.size() <= exact_limit) {
    // Iterative deepening from the volume bound; the first success is optimal.
    for (std::size_t k = result.volume_bound; k < greedy.size(); ++k) {
      s.chosen.clear();
      if (s.dfs(x, k)) {
        solution = s.best;
        break;
      }
    }
    result.exact = true;
  }

  for (std::size_t id : solution) result.translates.insert(s.candidate_g[id]);
  result.value = result.translates.size();
  if (!x.subset_of(product_set(result.translates, a))) throw InternalError("covering_number: cover check failed");
  return result;
}

GroupSet ruzsa_cover(const GroupSet& x, const GroupSet& y) {
  x.require_same_group(y, "ruzsa_cover");
  if (x.empty() || y.empty()) throw InputError("ruzsa_cover: empty input");
  GroupSet f(x.group_ptr());
  GroupSet used(x.group_ptr());
  x.for_each([&](Element e) {
    GroupSet t = y.left_translate(e);
    if (!t.intersects(used)) {
      f.insert(e);
      used |= t;
    }
  });
  const std::size_t xy = product_set(x, y).size();
  if (f.size() > xy / y.size()) throw InternalError("ruzsa_cover: size bound violated");
  if (!x.subset_of(product_set(f, product_set(y, y.inverse())))) {
    throw InternalError("ruzsa_cover: inclusion X ⊆ FYY^{-1} violated");
  }
  return f;
}

PlunneckeReport plunnecke_check(const GroupSet& a, const std::vector<std::pair<unsigned, unsigned>>& pairs) {
  if (a.empty()) throw InputError("plunnecke_check: empty set");
  PlunneckeReport rep;
  rep.abelian = a.group().is_abelian();
  const GroupSet sq = product_set(a, a);
  rep.k = rep.abelian ? Rational(sq.size(), a.size()) : Rational(product_set(sq, a).size(), a.size());
  for (auto [n, m] : pairs) {
    PlunneckeRow row;
    row.n = n;
    row.m = m;
    row.size = signed_sumset(a, n, m).size();
    const unsigned e = rep.abelian ? (n + m) : 2 * (n + m);
    row.bound = pow(rep.k, e) * Rational(a.size());
    row.violated = Rational(row.size) > row.bound;
    rep.any_violation = rep.any_violation || row.violated;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace sdl
