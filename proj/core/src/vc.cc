#include "sdl/vc.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "sdl/errors.h"
#include "sdl/setarith.h"

namespace sdl {

namespace {

std::vector<Bits> columns(const SetSystem& s) {
  std::vector<Bits> cols(s.ground_size, Bits(s.members.size()));
  for (std::size_t m = 0; m < s.members.size(); ++m) {
    for (std::size_t p = s.members[m].find_first(); p != Bits::npos; p = s.members[m].find_next(p)) cols[p].set(m);
  }
  return cols;
}

class ShatterSearch {
 public:
  ShatterSearch(const std::vector<Bits>& cols, std::size_t members, std::size_t cap)
      : cols_(cols), members_(members), cap_(cap) {}

  void run(std::vector<std::size_t> order, std::optional<std::size_t> anchor) {
    Bits all(members_);
    all.set();
    std::vector<Bits> root{all};
    record(root);
    if (members_ < 2 || cap_ == 0) return;
    if (anchor) {
      order.erase(std::remove(order.begin(), order.end(), *anchor), order.end());
      order_ = std::move(order);
      std::vector<Bits> next;
      if (!split(root, *anchor, next)) return;
      current_.push_back(*anchor);
      dfs(next, 0);
    } else {
      order_ = std::move(order);
      dfs(root, 0);
    }
  }

  std::size_t best() const { return best_points_.size(); }
  const std::vector<std::size_t>& best_points() const { return best_points_; }
  const std::vector<std::size_t>& best_witnesses() const { return best_witnesses_; }

 private:
  bool split(const std::vector<Bits>& classes, std::size_t p, std::vector<Bits>& out) const {
    const std::size_t n = classes.size();
    out.assign(2 * n, Bits());
    for (std::size_t t = 0; t < n; ++t) {
      out[t] = classes[t] - cols_[p];
      if (out[t].none()) return false;
      out[t + n] = classes[t] & cols_[p];
      if (out[t + n].none()) return false;
    }
    return true;
  }

  void record(const std::vector<Bits>& classes) {
    best_points_ = current_;
    best_witnesses_.clear();
    for (const Bits& c : classes) best_witnesses_.push_back(c.find_first());
  }

  void dfs(const std::vector<Bits>& classes, std::size_t start) {
    if (current_.size() > best()) record(classes);
    if (best() >= cap_) return;
    if (2 * classes.size() > members_) return;  // 2^(k+1) traces need that many members
    std::vector<Bits> next;
    for (std::size_t i = start; i < order_.size(); ++i) {
      if (current_.size() + (order_.size() - i) <= best()) return;
      if (!split(classes, order_[i], next)) continue;
      current_.push_back(order_[i]);
      dfs(next, i + 1);
      current_.pop_back();
      if (best() >= cap_) return;
    }
  }

  const std::vector<Bits>& cols_;
  std::size_t members_;
  std::size_t cap_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_points_;
  std::vector<std::size_t> best_witnesses_;
};

// Members traced on the ground, deduplicated, with the first g producing each.
struct MaterializedFamily {
  SetSystem system;
  std::vector<Element> points;  // ground index -> element
  std::vector<Element> origin;  // member index -> g
};

MaterializedFamily materialize(const TranslateFamily& f) {
  const GroupSet ground = f.ground_set();
  if (ground.size() > kMaxVcGround) throw CapacityError("vc: ground set exceeds " + std::to_string(kMaxVcGround));
  MaterializedFamily out;
  out.points = ground.elements();
  std::vector<std::int64_t> index(f.base.universe(), -1);
  for (std::size_t i = 0; i < out.points.size(); ++i) index[out.points[i]] = static_cast<std::int64_t>(i);
  out.system.ground_size = out.points.size();
  std::set<std::vector<Element>> seen;
  const std::size_t n = f.base.universe();
  for (Element g = 0; g < n; ++g) {
    const GroupSet m = f.member(g) & ground;
    std::vector<Element> key = m.elements();
    if (!seen.insert(key).second) continue;
    Bits b(out.points.size());
    for (Element x : key) b.set(static_cast<std::size_t>(index[x]));
    out.system.members.push_back(std::move(b));
    out.origin.push_back(g);
  }
  return out;
}

std::vector<std::size_t> balance_order(const std::vector<Bits>& cols, std::size_t members) {
  std::vector<std::size_t> order;
  for (std::size_t p = 0; p < cols.size(); ++p) {
    const std::size_t c = cols[p].count();
    if (c > 0 && c < members) order.push_back(p);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::size_t ca = cols[a].count(), cb = cols[b].count();
    return std::min(ca, members - ca) > std::min(cb, members - cb);
  });
  return order;
}

}  // namespace

SetSystem SetSystem::deduplicated() const {
  std::set<Bits> seen;
  SetSystem out{ground_size, {}};
  for (const Bits& m : members) {
    if (m.size() != ground_size) throw InputError("set system member has wrong ground size");
    if (seen.insert(m).second) out.members.push_back(m);
  }
  return out;
}

SetSystem SetSystem::complements() const {
  SetSystem out{ground_size, {}};
  for (const Bits& m : members) out.members.push_back(~m);
  return out;
}

SetSystem SetSystem::dual() const {
  const SetSystem d = deduplicated();
  SetSystem out{d.members.size(), columns(d)};
  return out;
}

SetSystem intersection_family(const SetSystem& a, const SetSystem& b) {
  if (a.ground_size != b.ground_size) throw InputError("intersection_family: ground sizes differ");
  SetSystem out{a.ground_size, {}};
  for (const Bits& x : a.members) {
    for (const Bits& y : b.members) out.members.push_back(x & y);
  }
  return out.deduplicated();
}

VcResult vc_dimension(const SetSystem& system, std::size_t cap, std::optional<std::size_t> anchor) {
  const SetSystem s = system.deduplicated();
  if (anchor && *anchor >= s.ground_size) throw InputError("vc_dimension: anchor out of range");
  const std::vector<Bits> cols = columns(s);
  ShatterSearch search(cols, s.members.size(), cap);
  search.run(balance_order(cols, s.members.size()), anchor);
  VcResult r;
  r.dimension = search.best();
  r.reached_cap = r.dimension >= cap;
  r.shattered = search.best_points();
  r.witnesses = search.best_witnesses();
  // Map witnesses back to member indices of the original (non-deduplicated) system.
  for (std::size_t& w : r.witnesses) {
    const Bits& target = s.members[w];
    for (std::size_t i = 0; i < system.members.size(); ++i) {
      if (system.members[i] == target) {
        w = i;
        break;
      }
    }
  }
  return r;
}

GroupSet TranslateFamily::member(Element g) const {
  base.group().check(g);
  return side == Side::kLeft ? base.left_translate(g) : base.right_translate(g);
}

GroupSet TranslateFamily::ground_set() const {
  if (!ground) return GroupSet::full(base.group_ptr());
  base.require_same_group(*ground, "TranslateFamily");
  return *ground;
}

SetSystem TranslateFamily::to_set_system() const { return materialize(*this).system; }

TranslateVc vc_dimension(const TranslateFamily& family, std::size_t cap) {
  const MaterializedFamily mf = materialize(family);
  const std::vector<Bits> cols = columns(mf.system);
  ShatterSearch search(cols, mf.system.members.size(), cap);
  // Translation symmetry: with the whole group as ground, some shattered set
  // of maximum size contains the identity.
  std::optional<std::size_t> anchor;
  if (!family.ground) anchor = family.base.group().identity();
  search.run(balance_order(cols, mf.system.members.size()), anchor);
  TranslateVc r;
  r.dimension = search.best();
  r.reached_cap = r.dimension >= cap;
  for (std::size_t p : search.best_points()) r.shattered.push_back(mf.points[p]);
  for (std::size_t w : search.best_witnesses()) r.translates.push_back(mf.origin[w]);
  return r;
}

NipResult is_d_nip(const GroupSet& a, std::size_t d) {
  if (d < 1) throw InputError("is_d_nip: d must be >= 1");
  const TranslateVc vc = vc_dimension(TranslateFamily{a, Side::kLeft, std::nullopt}, d);
  NipResult r;
  r.nip = vc.dimension < d;
  if (!r.nip) {
    r.points = vc.shattered;
    r.translates = vc.translates;
  }
  return r;
}

namespace {

class LadderSearch {
 public:
  LadderSearch(const GroupSet& a, std::size_t d) : a_(a), d_(d), G_(a.group()) {
    const std::size_t n = G_.order();
    shifted_.reserve(n);
    for (Element g = 0; g < n; ++g) shifted_.push_back(a.left_translate(G_.inv(g)));
  }

  bool run() {
    // (a_i g^{-1}, g b_j) is again a ladder, so a_1 = identity.
    const Element e = G_.identity();
    chosen_.push_back(e);
    prefix_.push_back(shifted_[e]);
    if (prefix_.back().empty()) return false;
    return extend();
  }

  const std::vector<Element>& a_side() const { return chosen_; }
  std::vector<Element> b_side() const {
    std::vector<Element> b;
    for (std::size_t j = 0; j < d_; ++j) b.push_back(candidate(j).min());
    return b;
  }

 private:
  // R_j = ∩_{i<=j} a_i^{-1}A minus ∪_{i>j} a_i^{-1}A over the chosen prefix.
  GroupSet candidate(std::size_t j) const {
    GroupSet r = prefix_[j];
    for (std::size_t i = j + 1; i < chosen_.size(); ++i) r -= shifted_[chosen_[i]];
    return r;
  }

  bool extend() {
    const std::size_t m = chosen_.size();
    if (m == d_) return true;
    const std::size_t n = G_.order();
    for (Element g = 0; g < n; ++g) {
      const GroupSet& t = shifted_[g];
      GroupSet next_prefix = prefix_.back() & t;
      if (next_prefix.empty()) continue;
      bool ok = true;
      for (std::size_t j = 0; j < m && ok; ++j) {
        if (!(candidate(j) - t).empty()) continue;
        ok = false;
      }
      if (!ok) continue;
      chosen_.push_back(g);
      prefix_.push_back(std::move(next_prefix));
      if (extend()) return true;
      chosen_.pop_back();
      prefix_.pop_back();
    }
    return false;
  }

  const GroupSet& a_;
  std::size_t d_;
  const FiniteGroup& G_;
  std::vector<GroupSet> shifted_;  // shifted_[g] = g^{-1}A
  std::vector<Element> chosen_;
  std::vector<GroupSet> prefix_;   // prefix_[j] = ∩_{i<=j} a_i^{-1}A
};

}  // namespace

StabilityResult is_d_stable(const GroupSet& a, std::size_t d) {
  if (d < 1) throw InputError("is_d_stable: d must be >= 1");
  StabilityResult r;
  if (a.empty()) return r;
  LadderSearch search(a, d);
  if (search.run()) {
    r.stable = false;
    r.a = search.a_side();
    r.b = search.b_side();
  }
  return r;
}

bool BipartiteGraphSpec::has_edge(std::size_t v, std::size_t w) const {
  return std::find(edges.begin(), edges.end(), std::make_pair(v, w)) != edges.end();
}

void BipartiteGraphSpec::validate() const {
  for (auto [v, w] : edges) {
    if (v >= left || w >= right) throw InputError("bipartite graph edge out of range");
  }
}

BipartiteGraphSpec BipartiteGraphSpec::half_graph(std::size_t d) {
  BipartiteGraphSpec g{d, d, {}};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) g.edges.emplace_back(i, j);
  }
  return g;
}

BipartiteGraphSpec BipartiteGraphSpec::power_set(std::size_t d) {
  if (d >= 16) throw CapacityError("power_set graph: d too large");
  BipartiteGraphSpec g{d, std::size_t{1} << d, {}};
  for (std::size_t s = 0; s < g.right; ++s) {
    for (std::size_t i = 0; i < d; ++i) {
      if ((s >> i) & 1u) g.edges.emplace_back(i, s);
    }
  }
  return g;
}

OmissionResult omits_bipartite(const GroupSet& a, const BipartiteGraphSpec& graph) {
  graph.validate();
  const FiniteGroup& G = a.group();
  if (graph.left > kMaxOmissionSide || graph.right > (std::size_t{1} << kMaxOmissionSide) ||
      G.order() > kMaxOmissionOrder) {
    throw CapacityError("omits_bipartite: search exceeds caps (|V| <= 3, |W| <= 8, |G| <= 256)");
  }
  OmissionResult r;
  if (graph.left == 0 || graph.right == 0) {
    // An empty side embeds whenever the other side fits injectively.
    r.omits = false;
    for (std::size_t v = 0; v < graph.left; ++v) r.left.push_back(static_cast<Element>(v));
    for (std::size_t w = 0; w < graph.right; ++w) r.right.push_back(static_cast<Element>(w));
    if (std::max(graph.left, graph.right) > G.order()) r.omits = true;
    if (r.omits) r.left.clear(), r.right.clear();
    return r;
  }
  // Right vertices grouped by neighbourhood; distinct neighbourhoods have
  // disjoint candidate sets, equal ones need distinct representatives.
  std::map<std::vector<bool>, std::vector<std::size_t>> classes;
  for (std::size_t w = 0; w < graph.right; ++w) {
    std::vector<bool> nb(graph.left);
    for (std::size_t v = 0; v < graph.left; ++v) nb[v] = graph.has_edge(v, w);
    classes[nb].push_back(w);
  }
  // y x_v in A  <=>  y in A x_v^{-1}.
  std::vector<GroupSet> slots(G.order());
  for (Element g = 0; g < G.order(); ++g) slots[g] = a.right_translate(G.inv(g));

  std::vector<Element> x{G.identity()};  // x_1 = identity after translating
  auto try_right = [&]() -> bool {
    std::vector<Element> y(graph.right);
    for (const auto& [nb, ws] : classes) {
      GroupSet cand = GroupSet::full(a.group_ptr());
      for (std::size_t v = 0; v < graph.left; ++v) {
        if (nb[v]) cand &= slots[x[v]];
        else cand -= slots[x[v]];
      }
      if (cand.size() < ws.size()) return false;
      const std::vector<Element> elems = cand.elements();
      for (std::size_t i = 0; i < ws.size(); ++i) y[ws[i]] = elems[i];
    }
    r.right = y;
    return true;
  };
  std::function<bool()> dfs = [&]() -> bool {
    if (x.size() == graph.left) return try_right();
    for (Element g = 0; g < G.order(); ++g) {
      if (std::find(x.begin(), x.end(), g) != x.end()) continue;
      x.push_back(g);
      if (dfs()) return true;
      x.pop_back();
    }
    return false;
  };
  if (dfs()) {
    r.omits = false;
    r.left = x;
  }
  return r;
}

std::size_t nip_bound_from_omission(const BipartiteGraphSpec& graph) {
  std::size_t lg = 0;
  while ((std::size_t{1} << lg) < graph.right) ++lg;
  return graph.left + lg;
}

namespace {

struct Traces {
  std::vector<Bits> members;  // over ground indices
  std::vector<Element> points;
  std::vector<std::int64_t> index;
};

Traces traces_of(const TranslateFamily& f) {
  MaterializedFamily mf = materialize(f);
  Traces t;
  t.members = std::move(mf.system.members);
  t.points = std::move(mf.points);
  t.index.assign(f.base.universe(), -1);
  for (std::size_t i = 0; i < t.points.size(); ++i) t.index[t.points[i]] = static_cast<std::int64_t>(i);
  return t;
}

bool verify_counts(const Traces& t, const std::vector<std::size_t>& sample_idx, const Rational& eps) {
  const std::size_t ground = t.points.size();
  const std::size_t n = sample_idx.size();
  for (const Bits& m : t.members) {
    const Rational mu(m.count(), ground);
    Rational frac = 0;
    if (n > 0) {
      std::size_t hits = 0;
      for (std::size_t i : sample_idx) hits += m.test(i);
      frac = Rational(hits, n);
    }
    if (abs(mu - frac) > eps) return false;
  }
  return true;
}

}  // namespace

bool verify_eps_approximation(const TranslateFamily& family, const std::vector<Element>& sample, const Rational& eps) {
  const Traces t = traces_of(family);
  std::vector<std::size_t> idx;
  for (Element x : sample) {
    if (x >= t.index.size() || t.index[x] < 0) return false;
    idx.push_back(static_cast<std::size_t>(t.index[x]));
  }
  return verify_counts(t, idx, eps);
}

EpsApproximation eps_approximation(const TranslateFamily& family, const Rational& eps, std::uint64_t seed) {
  if (eps <= 0) throw InputError("eps_approximation: eps must be positive");
  EpsApproximation out;
  const Traces t = traces_of(family);
  const std::size_t ground = t.points.size();
  if (ground == 0) throw InputError("eps_approximation: empty ground set");
  if (eps >= 1) return out;

  auto to_elements = [&](const std::vector<std::size_t>& idx) {
    std::vector<Element> s;
    for (std::size_t i : idx) s.push_back(t.points[i]);
    return s;
  };

  // Hoeffding plus a union bound over the distinct members gives failure
  // probability at most 1/2 per attempt at this size.
  const double e = static_cast<double>(eps);
  const double want = std::log(4.0 * static_cast<double>(t.members.size())) / (2.0 * e * e);
  const std::size_t n = static_cast<std::size_t>(std::ceil(want));
  constexpr std::size_t kAttempts = 8;
  if (n < ground) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, ground - 1);
    for (std::size_t attempt = 1; attempt <= kAttempts; ++attempt) {
      out.attempts = attempt;
      std::vector<std::size_t> idx(n);
      for (auto& i : idx) i = pick(rng);
      if (verify_counts(t, idx, eps)) {
        out.sample = to_elements(idx);
        return out;
      }
    }
  }

  // Discrepancy halving from the whole ground set (error 0). Each round pairs
  // up the sample and keeps one point per pair, steering the running
  // discrepancy of every member towards zero.
  out.used_fallback = true;
  std::vector<std::size_t> current(ground);
  std::iota(current.begin(), current.end(), 0);
  if (!verify_counts(t, current, eps)) throw InternalError("eps_approximation: full ground set failed verification");
  while (current.size() > 1) {
    std::vector<std::int64_t> disc(t.members.size(), 0);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i + 1 < current.size(); i += 2) {
      const std::size_t p = current[i], q = current[i + 1];
      std::int64_t dot = 0;
      for (std::size_t m = 0; m < t.members.size(); ++m) {
        dot += disc[m] * (static_cast<std::int64_t>(t.members[m].test(p)) - static_cast<std::int64_t>(t.members[m].test(q)));
      }
      const bool keep_p = dot <= 0;
      for (std::size_t m = 0; m < t.members.size(); ++m) {
        const std::int64_t delta =
            static_cast<std::int64_t>(t.members[m].test(p)) - static_cast<std::int64_t>(t.members[m].test(q));
        disc[m] += keep_p ? delta : -delta;
      }
      kept.push_back(keep_p ? p : q);
    }
    if (current.size() % 2 == 1) kept.push_back(current.back());
    if (!verify_counts(t, kept, eps)) break;
    current = std::move(kept);
  }
  out.sample = to_elements(current);
  return out;
}

HittingSet greedy_hitting_set(const std::vector<GroupSet>& members) {
  HittingSet out;
  if (members.empty()) return out;
  const GroupPtr& group = members.front().group_ptr();
  for (const GroupSet& m : members) {
    members.front().require_same_group(m, "greedy_hitting_set");
    if (m.empty()) throw InputError("greedy_hitting_set: empty member");
  }
  const std::size_t n = group->order();
  out.points = GroupSet(group);

  std::vector<std::size_t> degree(n, 0);
  for (const GroupSet& m : members) m.for_each([&](Element x) { ++degree[x]; });
  const std::size_t max_degree = *std::max_element(degree.begin(), degree.end());
  out.fractional_lower_bound = (members.size() + max_degree - 1) / max_degree;

  std::vector<bool> hit(members.size(), false);
  std::size_t remaining = members.size();
  while (remaining > 0) {
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (!hit[i]) members[i].for_each([&](Element x) { ++count[x]; });
    }
    const Element best = static_cast<Element>(std::max_element(count.begin(), count.end()) - count.begin());
    out.points.insert(best);
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (!hit[i] && members[i].contains(best)) {
        hit[i] = true;
        --remaining;
      }
    }
  }
  for (const GroupSet& m : members) {
    if (!m.intersects(out.points)) throw InternalError("greedy_hitting_set: member missed");
  }
  return out;
}

Sandwich nip_sandwich(const GroupSet& a) {
  if (a.empty()) throw InputError("nip_sandwich: empty set");
  const FiniteGroup& G = a.group();
  Sandwich s;
  s.sym2 = symmetric_power(a, 2);
  s.sym3 = symmetric_power(a, 3);
  // g in eA  <=>  e^{-1} in Ag^{-1}: hit {Ag^{-1}} with E0 and invert.
  // g in Af  <=>  f in A^{-1}g: hit {A^{-1}g} directly.
  std::vector<GroupSet> left_family, right_family;
  const GroupSet a_inv = a.inverse();
  s.sym2.for_each([&](Element g) {
    left_family.push_back(a.right_translate(G.inv(g)));
    right_family.push_back(a_inv.right_translate(g));
  });
  s.e = greedy_hitting_set(left_family).points.inverse();
  s.f = greedy_hitting_set(right_family).points;
  if (!s.e.subset_of(s.sym3) || !s.f.subset_of(s.sym3)) throw InternalError("nip_sandwich: E or F outside A^{±3}");
  if (!s.sym2.subset_of(product_set(s.e, a)) || !s.sym2.subset_of(product_set(a, s.f))) {
    throw InternalError("nip_sandwich: inclusion check failed");
  }
  return s;
}

VcCalculusReport vc_calculus_check(const SetSystem& s1, const SetSystem& s2) {
  if (s1.ground_size > kMaxCalculusGround || s2.ground_size > kMaxCalculusGround) {
    throw CapacityError("vc_calculus_check: ground sets are limited to 64 points");
  }
  constexpr std::size_t kNoCap = 1024;
  VcCalculusReport r;
  r.vc1 = vc_dimension(s1, kNoCap).dimension;
  r.vc2 = vc_dimension(s2, kNoCap).dimension;
  r.complement_vc = vc_dimension(s1.complements(), kNoCap).dimension;
  r.complement_ok = r.complement_vc == r.vc1;
  const std::size_t d = std::max<std::size_t>({r.vc1, r.vc2, 1});
  r.intersection_vc = vc_dimension(intersection_family(s1, s2), kNoCap).dimension;
  r.intersection_ok = r.intersection_vc < 10 * d;
  r.dual_vc = vc_dimension(s1.dual(), kNoCap).dimension;
  r.dual_ok = r.dual_vc < (std::size_t{1} << (r.vc1 + 1));
  return r;
}

SideReport translate_side_check(const GroupSet& a) {
  SideReport r;
  r.left_vc = vc_dimension(TranslateFamily{a, Side::kLeft, std::nullopt}).dimension;
  r.right_vc = vc_dimension(TranslateFamily{a, Side::kRight, std::nullopt}).dimension;
  r.ok = r.right_vc <= (std::size_t{1} << (r.left_vc + 1));
  return r;
}

}  // namespace sdl
