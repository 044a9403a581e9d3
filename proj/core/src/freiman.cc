#include "sdl/freiman.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "sdl/setarith.h"
#include "sdl/subgroup.h"

namespace sdl {

namespace {

// Index tuples 0 <= i_1 <= ... <= i_s < n in lexicographic order.
template <typename Fn>
void for_each_multiset(std::size_t n, unsigned s, Fn&& fn) {
  if (s == 0) {
    std::vector<std::uint32_t> none;
    fn(none);
    return;
  }
  if (n == 0) return;
  std::vector<std::uint32_t> idx(s, 0);
  while (true) {
    fn(idx);
    int j = static_cast<int>(s) - 1;
    while (j >= 0 && idx[j] + 1 == n) --j;
    if (j < 0) return;
    ++idx[j];
    for (unsigned t = j + 1; t < s; ++t) idx[t] = idx[j];
  }
}

BigInt multiset_count(std::size_t n, unsigned s) {
  // C(n + s - 1, s)
  if (s == 0) return 1;
  if (n == 0) return 0;
  BigInt c = 1;
  for (unsigned i = 1; i <= s; ++i) c = c * (n - 1 + i) / i;
  return c;
}

Element sum_of(const FiniteGroup& g, const std::vector<Element>& xs, const std::vector<std::uint32_t>& idx) {
  Element acc = g.identity();
  for (std::uint32_t i : idx) acc = g.mul(acc, xs[i]);
  return acc;
}

std::vector<Element> pick(const std::vector<Element>& xs, const std::vector<std::uint32_t>& idx) {
  std::vector<Element> out;
  out.reserve(idx.size());
  for (std::uint32_t i : idx) out.push_back(xs[i]);
  return out;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Cyclic subgroup generated by x.
GroupSet cyclic(const GroupPtr& group, Element x) {
  GroupSet out(group);
  Element y = group->identity();
  do {
    out.insert(y);
    y = group->mul(y, x);
  } while (y != group->identity());
  return out;
}

struct PrimaryBasis {
  const GroupPtr& group;
  std::vector<Element> candidates;  // the p-part, ascending
  std::uint32_t p;
  std::vector<unsigned> exps;       // descending
  std::vector<Element> basis;

  std::uint32_t order_for(unsigned e) const {
    std::uint32_t o = 1;
    for (unsigned i = 0; i < e; ++i) o *= p;
    return o;
  }

  bool dfs(std::size_t i, const GroupSet& span) {
    if (i == exps.size()) return true;
    const std::uint32_t want = order_for(exps[i]);
    for (Element x : candidates) {
      if (group->element_order(x) != want) continue;
      const GroupSet c = cyclic(group, x);
      if (c.intersection_size(span) != 1) continue;
      basis.push_back(x);
      if (dfs(i + 1, product_set(span, c))) return true;
      basis.pop_back();
    }
    return false;
  }
};

struct InvariantFactors {
  std::vector<std::uint32_t> moduli;  // ascending, each divides the next
  std::vector<Element> generators;    // generators[i] has order moduli[i]
};

// Invariant-factor decomposition of a subgroup of an abelian group.
InvariantFactors decompose(const GroupSet& k) {
  const GroupPtr& group = k.group_ptr();
  const FiniteGroup& G = *group;
  InvariantFactors out;
  if (k.size() == 1) return out;

  struct Part {
    std::uint32_t p;
    std::vector<unsigned> exps;
    std::vector<Element> basis;
  };
  std::vector<Part> parts;
  for (std::uint64_t p64 : prime_factors(k.size())) {
    const auto p = static_cast<std::uint32_t>(p64);
    std::vector<Element> kp;
    k.for_each([&](Element x) {
      std::uint32_t o = G.element_order(x);
      while (o % p == 0) o /= p;
      if (o == 1) kp.push_back(x);
    });
    // n_j = #{x : x^{p^j} = 1}; the number of cyclic factors of exponent
    // >= j is log_p(n_j / n_{j-1}).
    std::vector<unsigned> at_least;
    std::size_t prev = 1;
    for (std::uint64_t pj = p; prev < kp.size(); pj *= p) {
      std::size_t n = 0;
      for (Element x : kp) n += (pj % G.element_order(x) == 0);
      unsigned cnt = 0;
      for (std::size_t q = n / prev; q > 1; q /= p) ++cnt;
      at_least.push_back(cnt);
      prev = n;
    }
    std::vector<unsigned> exps;
    for (std::size_t j = at_least.size(); j-- > 0;) {
      const unsigned next = j + 1 < at_least.size() ? at_least[j + 1] : 0;
      for (unsigned t = next; t < at_least[j]; ++t) exps.push_back(static_cast<unsigned>(j + 1));
    }
    PrimaryBasis search{group, kp, p, exps, {}};
    if (!search.dfs(0, GroupSet::singleton(group, G.identity()))) {
      throw InternalError("invariant factors: no basis for the " + std::to_string(p) + "-part");
    }
    parts.push_back(Part{p, exps, search.basis});
  }

  std::size_t m = 0;
  for (const Part& part : parts) m = std::max(m, part.exps.size());
  for (std::size_t i = m; i-- > 0;) {
    std::uint32_t d = 1;
    Element g = G.identity();
    for (const Part& part : parts) {
      if (i >= part.exps.size()) continue;
      for (unsigned t = 0; t < part.exps[i]; ++t) d *= part.p;
      g = G.mul(g, part.basis[i]);
    }
    out.moduli.push_back(d);
    out.generators.push_back(g);
  }
  return out;
}

std::optional<Rational> power_constant(std::uint64_t r, const BigInt& exponent, const Rational& k) {
  constexpr double kMaxBits = 65536;
  if (static_cast<double>(exponent) * std::log2(static_cast<double>(r)) > kMaxBits) return std::nullopt;
  BigInt rp = 1;
  const auto e = static_cast<unsigned>(exponent);
  for (unsigned i = 0; i < e; ++i) rp *= r;
  return k * k * Rational(rp);
}

BigInt general_exponent(const Rational& k) {
  BigInt e = ceil(2 * k * k - 2);
  return e < 0 ? BigInt(0) : e;
}

}  // namespace

GroupSet FreimanMap::domain() const {
  GroupSet out(source);
  for (const auto& [x, y] : pairs) out.insert(x);
  return out;
}

GroupSet FreimanMap::image() const {
  GroupSet out(target);
  for (const auto& [x, y] : pairs) out.insert(y);
  return out;
}

void FreimanMap::validate() const {
  if (!source || !target) throw InputError("Freiman map: missing group");
  if (!source->is_abelian() || !target->is_abelian()) throw InputError("Freiman map: groups must be abelian");
  GroupSet dom(source), img(target);
  for (const auto& [x, y] : pairs) {
    source->check(x);
    target->check(y);
    if (dom.contains(x)) throw InputError("Freiman map: repeated source element " + std::to_string(x));
    if (img.contains(y)) throw InputError("Freiman map: repeated target element " + std::to_string(y));
    dom.insert(x);
    img.insert(y);
  }
}

std::optional<Element> FreimanMap::apply(Element x) const {
  for (const auto& [a, b] : pairs) {
    if (a == x) return b;
  }
  return std::nullopt;
}

FreimanCheck is_freiman_s_iso(const FreimanMap& phi, unsigned s) {
  phi.validate();
  if (s < 1) throw InputError("is_freiman_s_iso: s must be >= 1");
  const std::size_t n = phi.pairs.size();
  if (multiset_count(n, s) > kMaxFreimanTuples) {
    throw CapacityError("is_freiman_s_iso: too many " + std::to_string(s) + "-multisets of a " + std::to_string(n) +
                        "-element set");
  }
  std::vector<Element> xs, ys;
  for (const auto& [x, y] : phi.pairs) {
    xs.push_back(x);
    ys.push_back(y);
  }
  struct Entry {
    Element other;
    std::vector<std::uint32_t> idx;
  };
  std::unordered_map<Element, Entry> by_source, by_target;
  FreimanCheck out;
  for_each_multiset(n, s, [&](const std::vector<std::uint32_t>& idx) {
    if (!out.iso) return;
    const Element ss = sum_of(*phi.source, xs, idx);
    const Element ts = sum_of(*phi.target, ys, idx);
    auto [it, fresh] = by_source.try_emplace(ss, Entry{ts, idx});
    if (!fresh && it->second.other != ts) {
      out = FreimanCheck{false, pick(xs, it->second.idx), pick(xs, idx)};
      return;
    }
    auto [jt, fresh2] = by_target.try_emplace(ts, Entry{ss, idx});
    if (!fresh2 && jt->second.other != ss) out = FreimanCheck{false, pick(xs, jt->second.idx), pick(xs, idx)};
  });
  return out;
}

InducedMap induced_difference_map(const FreimanMap& phi, unsigned s, unsigned p, unsigned q) {
  phi.validate();
  if (p + q == 0) throw InputError("induced_difference_map: p + q must be >= 1");
  const FreimanCheck check = is_freiman_s_iso(phi, s);
  if (!check.iso) throw InputError("induced_difference_map: phi is not a Freiman " + std::to_string(s) + "-isomorphism");
  const std::size_t n = phi.pairs.size();
  if (multiset_count(n, p) * multiset_count(n, q) > kMaxFreimanTuples) {
    throw CapacityError("induced_difference_map: too many representations");
  }
  std::vector<Element> xs, ys;
  for (const auto& [x, y] : phi.pairs) {
    xs.push_back(x);
    ys.push_back(y);
  }
  const FiniteGroup& S = *phi.source;
  const FiniteGroup& T = *phi.target;
  struct Sums {
    Element src, tgt;
    std::vector<std::uint32_t> idx;
  };
  auto collect = [&](unsigned m) {
    std::vector<Sums> out;
    for_each_multiset(n, m, [&](const std::vector<std::uint32_t>& idx) {
      out.push_back(Sums{sum_of(S, xs, idx), sum_of(T, ys, idx), idx});
    });
    return out;
  };
  const std::vector<Sums> plus = collect(p);
  const std::vector<Sums> minus = collect(q);

  struct Seen {
    Element other;
    std::size_t i, j;
  };
  std::map<Element, Seen> forward, backward;
  auto rep = [&](std::size_t i, std::size_t j) { return Representation{pick(xs, plus[i].idx), pick(xs, minus[j].idx)}; };
  for (std::size_t i = 0; i < plus.size(); ++i) {
    for (std::size_t j = 0; j < minus.size(); ++j) {
      const Element x = S.mul(plus[i].src, S.inv(minus[j].src));
      const Element y = T.mul(plus[i].tgt, T.inv(minus[j].tgt));
      auto [it, fresh] = forward.try_emplace(x, Seen{y, i, j});
      if (!fresh && it->second.other != y) {
        throw FreimanConflictError("induced map not well defined at source element " + std::to_string(x),
                                   rep(it->second.i, it->second.j), rep(i, j));
      }
      auto [jt, fresh2] = backward.try_emplace(y, Seen{x, i, j});
      if (!fresh2 && jt->second.other != x) {
        throw FreimanConflictError("induced map not injective at target element " + std::to_string(y),
                                   rep(jt->second.i, jt->second.j), rep(i, j));
      }
    }
  }
  InducedMap out;
  out.map.source = phi.source;
  out.map.target = phi.target;
  for (const auto& [x, seen] : forward) out.map.pairs.emplace_back(x, seen.other);
  out.level = s / (p + q);
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Rational exponent_constant(std::uint64_t r, const Rational& k) {
  if (r < 1) throw InputError("exponent_constant: r must be >= 1");
  if (k < 1) throw InputError("exponent_constant: k must be >= 1");
  if (is_prime(r)) return Rational(r - 1) * pow(k, 12);
  auto c = power_constant(r, general_exponent(k), k);
  if (!c) throw CapacityError("exponent_constant: k^2 r^(2k^2-2) is too large to evaluate");
  return *c;
}

Element Model::pull_back(Element x) const { return map.source->mul(embedding[x], base); }

GroupSet Model::pull_back(const GroupSet& x) const {
  GroupSet out(map.source);
  x.for_each([&](Element e) { out.insert(pull_back(e)); });
  return out;
}

GroupSet Model::embed(const GroupSet& x) const {
  GroupSet out(map.source);
  x.for_each([&](Element e) { out.insert(embedding[e]); });
  return out;
}

Model model_bounded_exponent(const GroupSet& a) {
  if (a.empty()) throw InputError("model_bounded_exponent: empty set");
  const FiniteGroup& G = a.group();
  if (!G.is_abelian()) throw InputError("model_bounded_exponent: group must be abelian");
  Model m;
  m.base = a.min();
  const GroupSet shifted = a.right_translate(G.inv(m.base));
  const Subgroup k = generate_closure(shifted);
  const InvariantFactors f = decompose(k.set);
  m.group = FiniteGroup::abelian(f.moduli);
  const FiniteGroup& M = *m.group;

  m.embedding.resize(M.order());
  std::vector<std::int64_t> back(G.order(), -1);
  for (Element x = 0; x < M.order(); ++x) {
    const std::vector<std::uint32_t> c = M.decode(x);
    Element y = G.identity();
    for (std::size_t i = 0; i < c.size(); ++i) y = G.mul(y, G.pow(f.generators[i], c[i]));
    if (!k.set.contains(y) || back[y] >= 0) throw InternalError("model_bounded_exponent: embedding is not a bijection");
    m.embedding[x] = y;
    back[y] = x;
  }

  m.set = GroupSet(m.group);
  m.map.source = a.group_ptr();
  m.map.target = m.group;
  a.for_each([&](Element x) {
    const auto y = static_cast<Element>(back[G.mul(x, G.inv(m.base))]);
    m.set.insert(y);
    m.map.pairs.emplace_back(x, y);
  });

  ModelSizeReport& rep = m.report;
  rep.k = Rational(product_set(a, a).size(), a.size());
  rep.r = G.exponent();
  rep.ratio = Rational(M.order(), a.size());
  if (auto c = power_constant(rep.r, general_exponent(rep.k), rep.k)) rep.general_bound = *c;
  if (is_prime(rep.r)) rep.prime_bound = Rational(rep.r - 1) * pow(rep.k, 12);
  rep.within_bounds = !rep.general_bound || rep.ratio <= *rep.general_bound;
  return m;
}

std::optional<CutWitness> cuts_out(const GroupSet& a, std::size_t d,
                                   const std::vector<std::vector<std::size_t>>& family) {
  const GroupPtr& group = a.group_ptr();
  const FiniteGroup& G = *group;
  if (d > kMaxCutsOutD) throw CapacityError("cuts_out: d > " + std::to_string(kMaxCutsOutD));
  if (G.order() > kMaxCutsOutOrder) throw CapacityError("cuts_out: group order > " + std::to_string(kMaxCutsOutOrder));
  std::vector<std::vector<bool>> in(family.size(), std::vector<bool>(d, false));
  for (std::size_t f = 0; f < family.size(); ++f) {
    for (std::size_t i : family[f]) {
      if (i >= d) throw InputError("cuts_out: index " + std::to_string(i) + " outside [d]");
      in[f][i] = true;
    }
  }
  // x in gA iff g in x A^{-1}.
  const GroupSet a_inv = a.inverse();
  std::vector<Element> xs(d, G.identity());
  std::vector<GroupSet> hit(d);
  if (d > 0) hit[0] = a_inv;

  std::optional<CutWitness> found;
  auto attempt = [&]() {
    CutWitness w;
    w.points = xs;
    for (std::size_t f = 0; f < family.size(); ++f) {
      GroupSet cand = GroupSet::full(group);
      for (std::size_t i = 0; i < d; ++i) {
        if (in[f][i]) cand &= hit[i];
        else cand -= hit[i];
      }
      if (cand.empty()) return false;
      w.translates.push_back(cand.min());
    }
    found = std::move(w);
    return true;
  };
  auto dfs = [&](auto&& self, std::size_t i) -> bool {
    if (i == d) return attempt();
    for (Element x = 0; x < G.order(); ++x) {
      xs[i] = x;
      hit[i] = a_inv.left_translate(x);
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  dfs(dfs, d > 0 ? 1 : 0);
  return found;
}

Pushforward pushforward_progression(const FreimanMap& phi, const CosetProgressionSpec& p) {
  phi.validate();
  p.validate();
  if (!same_group(p.group, phi.source)) throw InputError("pushforward: progression is not in the source group");
  if (p.kind != ProgressionKind::kArithmetic) throw InputError("pushforward: arithmetic progressions only");
  const FiniteGroup& T = *phi.target;
  const auto zero = phi.apply(phi.source->identity());
  if (!zero || *zero != T.identity()) throw InputError("pushforward: phi must map the identity to the identity");

  std::unordered_map<Element, Element> f;
  for (const auto& [x, y] : phi.pairs) f.emplace(x, y);
  const GroupSet source_set = expand(p);
  if (!source_set.subset_of(phi.domain())) throw InputError("pushforward: expand(P) is not inside the domain of phi");

  std::vector<Element> gens;
  for (Element u : p.progression.generators) {
    auto it = f.find(u);
    if (it == f.end()) throw InputError("pushforward: generator " + std::to_string(u) + " outside the domain");
    gens.push_back(it->second);
  }
  GroupSet h(phi.target);
  p.subgroup.for_each([&](Element x) { h.insert(f.at(x)); });
  for (Element x : h.elements()) {
    for (Element y : h.elements()) {
      if (!h.contains(T.mul(x, y))) throw PushforwardError("pushforward: phi(H) is not a subgroup", T.mul(x, y));
    }
  }

  Pushforward out;
  out.image = CosetProgressionSpec::arithmetic(phi.target, gens, p.progression.lengths, h);
  GroupSet mapped(phi.target);
  source_set.for_each([&](Element x) { mapped.insert(f.at(x)); });
  const GroupSet image_set = expand(out.image);
  if (!(mapped == image_set)) {
    const GroupSet diff = mapped ^ image_set;
    throw PushforwardError("pushforward: phi(P) differs from the image progression", diff.min());
  }
  if (!is_freiman_s_iso(phi, 2).iso) throw InputError("pushforward: phi is not a Freiman 2-isomorphism");
  out.source_proper = is_proper(p);
  out.image_proper = is_proper(out.image);
  if (out.source_proper && !out.image_proper) {
    throw PushforwardError("pushforward: image of a proper progression is improper", T.identity());
  }
  return out;
}

}  // namespace sdl
