#include "sdl/progressions.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_set>

#include "sdl/errors.h"
#include "sdl/setarith.h"
#include "sdl/subgroup.h"

namespace sdl {

namespace {

// floor(L) clamped to [0, cap].
std::int64_t clamp_floor(const Rational& len, std::int64_t cap) {
  const BigInt f = floor(len);
  if (f < 0) return 0;
  if (f > cap) return cap;
  return static_cast<std::int64_t>(f);
}

GroupSet line(const GroupPtr& group, Element u, std::int64_t lim) {
  const FiniteGroup& G = *group;
  GroupSet out = GroupSet::singleton(group, G.identity());
  Element p = G.identity();
  for (std::int64_t n = 1; n <= lim; ++n) {
    p = G.mul(p, u);
    out.insert(p);
    out.insert(G.inv(p));
  }
  return out;
}

GroupSet expand_arithmetic(const GroupPtr& group, const ProgressionSpec& spec) {
  GroupSet out = GroupSet::singleton(group, group->identity());
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const Element u = spec.generators[i];
    const std::int64_t ord = group->element_order(u);
    out = product_set(out, line(group, u, clamp_floor(spec.lengths[i], ord)));
  }
  return out;
}

GroupSet expand_generalized(const GroupPtr& group, const ProgressionSpec& spec) {
  const std::size_t r = spec.rank();
  if (r > kMaxWordRank) throw CapacityError("generalized progression rank exceeds " + std::to_string(kMaxWordRank));
  std::vector<std::int64_t> lim(r);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < r; ++i) {
    lim[i] = clamp_floor(spec.lengths[i], kMaxWordBudget + 1);
    total += lim[i];
  }
  if (total > static_cast<std::int64_t>(kMaxWordBudget)) {
    throw CapacityError("generalized progression word budget exceeds " + std::to_string(kMaxWordBudget));
  }
  const FiniteGroup& G = *group;
  // One reachable set per usage vector, mixed-radix indexed; appending a
  // letter only increases the index, so a single forward pass suffices.
  std::vector<std::size_t> radix(r);
  std::size_t states = 1;
  for (std::size_t i = 0; i < r; ++i) {
    radix[i] = states;
    states *= static_cast<std::size_t>(lim[i] + 1);
  }
  std::vector<GroupSet> reach(states, GroupSet(group));
  reach[0].insert(G.identity());
  GroupSet out(group);
  for (std::size_t v = 0; v < states; ++v) {
    if (reach[v].empty()) continue;
    out |= reach[v];
    for (std::size_t i = 0; i < r; ++i) {
      const std::int64_t used = static_cast<std::int64_t>((v / radix[i]) % static_cast<std::size_t>(lim[i] + 1));
      if (used >= lim[i]) continue;
      const Element u = spec.generators[i];
      reach[v + radix[i]] |= reach[v].right_translate(u);
      reach[v + radix[i]] |= reach[v].right_translate(G.inv(u));
    }
  }
  return out;
}

Element commutator(const FiniteGroup& G, Element g, Element h) {
  return G.mul(G.mul(G.inv(g), G.inv(h)), G.mul(g, h));
}

// Canonical representative of xH: the least element of the coset.
class CosetIndex {
 public:
  explicit CosetIndex(const GroupSet& h) : h_(h), rep_(h.universe(), kUnset) {}
  Element rep(Element x) {
    if (rep_[x] == kUnset) {
      Element best = x;
      h_.for_each([&](Element y) { best = std::min(best, h_.group().mul(x, y)); });
      rep_[x] = best;
    }
    return rep_[x];
  }

 private:
  static constexpr Element kUnset = ~Element{0};
  const GroupSet& h_;
  std::vector<Element> rep_;
};

}  // namespace

ProgressionSpec ProgressionSpec::scaled(const Rational& eps) const {
  if (eps <= 0) throw InputError("scale: eps must be positive");
  ProgressionSpec out = *this;
  for (Rational& l : out.lengths) l *= eps;
  return out;
}

CosetProgressionSpec CosetProgressionSpec::arithmetic(GroupPtr group, std::vector<Element> gens,
                                                      std::vector<Rational> lengths) {
  GroupSet h = GroupSet::singleton(group, group->identity());
  return arithmetic(std::move(group), std::move(gens), std::move(lengths), std::move(h));
}

CosetProgressionSpec CosetProgressionSpec::arithmetic(GroupPtr group, std::vector<Element> gens,
                                                      std::vector<Rational> lengths, GroupSet subgroup) {
  CosetProgressionSpec s;
  s.group = std::move(group);
  s.kind = ProgressionKind::kArithmetic;
  s.progression = ProgressionSpec{std::move(gens), std::move(lengths)};
  s.subgroup = std::move(subgroup);
  return s;
}

CosetProgressionSpec CosetProgressionSpec::generalized(GroupPtr group, std::vector<Element> gens,
                                                       std::vector<Rational> lengths) {
  CosetProgressionSpec s;
  s.subgroup = GroupSet::singleton(group, group->identity());
  s.group = std::move(group);
  s.kind = ProgressionKind::kGeneralized;
  s.progression = ProgressionSpec{std::move(gens), std::move(lengths)};
  return s;
}

void CosetProgressionSpec::validate() const {
  if (!group) throw InputError("progression: missing group");
  if (progression.generators.size() != progression.lengths.size()) {
    throw InputError("progression: generators and lengths differ in count");
  }
  for (Element u : progression.generators) group->check(u);
  for (const Rational& l : progression.lengths) {
    if (l < 0) throw InputError("progression: negative length " + to_string(l));
  }
  if (!subgroup.group_ptr() || !same_group(subgroup.group_ptr(), group)) {
    throw InputError("progression: subgroup lives in a different group");
  }
  if (!is_subgroup(subgroup)) throw InputError("progression: H is not a subgroup");
  if (kind == ProgressionKind::kArithmetic && !group->is_abelian()) {
    throw InputError("progression: arithmetic progressions need an abelian group");
  }
  if (!group->is_abelian()) {
    for (Element u : progression.generators) {
      if (!is_normalized_by(subgroup, GroupSet::singleton(group, u))) {
        throw InputError("progression: H is not normalized by generator " + std::to_string(u));
      }
    }
  }
}

GroupSet expand_progression(const GroupPtr& group, const ProgressionSpec& spec, ProgressionKind kind) {
  if (kind == ProgressionKind::kArithmetic) {
    if (!group->is_abelian()) throw InputError("expand: arithmetic progression in a nonabelian group");
    return expand_arithmetic(group, spec);
  }
  return expand_generalized(group, spec);
}

GroupSet expand(const CosetProgressionSpec& spec) {
  spec.validate();
  const GroupSet p0 = expand_progression(spec.group, spec.progression, spec.kind);
  GroupSet p = product_set(p0, spec.subgroup);
  if (!(p.inverse() == p) || !p.contains(spec.group->identity())) {
    throw InternalError("expand: coset progression is not symmetric");
  }
  return p;
}

BigInt nominal_size(const ProgressionSpec& spec) {
  BigInt n = 1;
  for (const Rational& l : spec.lengths) n *= 2 * floor(l) + 1;
  return n;
}

bool is_proper(const CosetProgressionSpec& spec) {
  spec.validate();
  if (!spec.group->is_abelian()) throw InputError("is_proper: abelian groups only");
  const BigInt n = nominal_size(spec.progression);
  if (n > BigInt(spec.group->order())) return false;
  return BigInt(expand_arithmetic(spec.group, spec.progression).size()) == n;
}

std::optional<std::size_t> nilpotence_step(const GroupPtr& group, std::span<const Element> gens, std::size_t cap) {
  const FiniteGroup& G = *group;
  for (Element g : gens) G.check(g);
  const GroupSet trivial = GroupSet::singleton(group, G.identity());
  std::vector<GroupSet> c{GroupSet(group)};  // c[0] unused
  GroupSet c1(group);
  for (Element g : gens) {
    c1.insert(g);
    c1.insert(G.inv(g));
  }
  c.push_back(c1);
  for (std::size_t n = 1; n <= cap + 1; ++n) {
    if (c[n].subset_of(trivial)) return n - 1;
    if (n == cap + 1) break;
    GroupSet next(group);
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t k = n + 1 - j;
      c[j].for_each([&](Element g) { c[k].for_each([&](Element h) { next.insert(commutator(G, g, h)); }); });
    }
    c.push_back(std::move(next));
  }
  return std::nullopt;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kUndefined: return "undefined";
  }
  return "?";
}

NormalFormReport check_c_normal_form(const CosetProgressionSpec& spec, unsigned c) {
  if (c < 1) throw InputError("normal form: c must be >= 1");
  spec.validate();
  const FiniteGroup& G = *spec.group;
  const ProgressionSpec& p = spec.progression;
  const std::size_t r = p.rank();
  const Rational cq(c);
  NormalFormReport rep;
  CosetIndex cosets(spec.subgroup);

  // (i) [u_i^{±1}, u_j^{±1}] ∈ P(u_{j+1..r}; c L_k / (L_i L_j)) H.
  for (std::size_t i = 0; i < r && rep.commutators != Verdict::kFail; ++i) {
    for (std::size_t j = i + 1; j < r && rep.commutators != Verdict::kFail; ++j) {
      if (p.lengths[i] == 0 || p.lengths[j] == 0) {
        rep.commutators = Verdict::kUndefined;
        rep.commutator_detail = "zero length at pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
        continue;
      }
      ProgressionSpec tail;
      for (std::size_t k = j + 1; k < r; ++k) {
        tail.generators.push_back(p.generators[k]);
        tail.lengths.push_back(cq * p.lengths[k] / (p.lengths[i] * p.lengths[j]));
      }
      const GroupSet target = product_set(expand_progression(spec.group, tail, spec.kind), spec.subgroup);
      for (int a : {1, -1}) {
        for (int b : {1, -1}) {
          const Element ui = a > 0 ? p.generators[i] : G.inv(p.generators[i]);
          const Element uj = b > 0 ? p.generators[j] : G.inv(p.generators[j]);
          if (!target.contains(commutator(G, ui, uj))) {
            rep.commutators = Verdict::kFail;
            rep.commutator_detail = "commutator of u_" + std::to_string(i + 1) + "^" + std::to_string(a) + " and u_" +
                                    std::to_string(j + 1) + "^" + std::to_string(b) + " escapes";
          }
        }
      }
    }
  }

  // (ii) u_1^{n_1}...u_r^{n_r} distinct modulo H for |n_i| <= L_i / c.
  std::vector<std::int64_t> lim(r);
  BigInt count = 1;
  for (std::size_t i = 0; i < r; ++i) {
    lim[i] = clamp_floor(p.lengths[i] / cq, static_cast<std::int64_t>(G.order()));
    count *= 2 * lim[i] + 1;
  }
  const std::size_t quotient_order = G.order() / spec.subgroup.size();
  if (count > BigInt(quotient_order)) {
    rep.distinctness = Verdict::kFail;
    rep.distinctness_detail = "more tuples than cosets of H";
  } else {
    std::map<Element, std::vector<std::int64_t>> seen;
    std::vector<std::int64_t> n(r);
    for (std::size_t i = 0; i < r; ++i) n[i] = -lim[i];
    bool done = false;
    while (!done && rep.distinctness == Verdict::kPass) {
      Element x = G.identity();
      for (std::size_t i = 0; i < r; ++i) x = G.mul(x, G.pow(p.generators[i], n[i]));
      const Element key = cosets.rep(x);
      auto [it, fresh] = seen.emplace(key, n);
      if (!fresh) {
        rep.distinctness = Verdict::kFail;
        auto fmt = [](const std::vector<std::int64_t>& v) {
          std::string s = "(";
          for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
          return s + ")";
        };
        rep.distinctness_detail = "exponents " + fmt(it->second) + " and " + fmt(n) + " collide";
      }
      std::size_t i = 0;
      while (i < r && n[i] == lim[i]) n[i++] = 0;
      if (i == r) {
        done = true;
      } else {
        ++n[i];
        for (std::size_t k = 0; k < i; ++k) n[k] = -lim[k];
      }
    }
  }

  // (iii) c^{-1} N <= |P/H| <= c N.
  rep.nominal = nominal_size(p);
  rep.quotient_size = expand(spec).size() / spec.subgroup.size();
  const BigInt q(rep.quotient_size);
  rep.size = (rep.nominal <= c * q && q <= c * rep.nominal) ? Verdict::kPass : Verdict::kFail;
  return rep;
}

CosetProgressionSpec scale(const CosetProgressionSpec& spec, const Rational& eps) {
  CosetProgressionSpec out = spec;
  out.progression = spec.progression.scaled(eps);
  return out;
}

namespace {

struct IntCharacter {
  std::vector<std::int64_t> num;
  std::int64_t den = 1;
};

std::vector<IntCharacter> integral_characters(const BohrSpec& spec) {
  std::vector<IntCharacter> out;
  for (const auto& ch : spec.characters) {
    IntCharacter ic;
    for (const Rational& v : ch) ic.den = std::lcm(ic.den, static_cast<std::int64_t>(denominator(v)));
    for (const Rational& v : ch) {
      const BigInt scaled = numerator(v) * (ic.den / static_cast<std::int64_t>(denominator(v)));
      BigInt m = scaled % ic.den;
      if (m < 0) m += ic.den;
      ic.num.push_back(static_cast<std::int64_t>(m));
    }
    out.push_back(std::move(ic));
  }
  return out;
}

// Arclength of tau_i(x) as t/den with t in [0, den/2].
std::int64_t arc(const IntCharacter& ch, const std::vector<std::uint32_t>& coords) {
  std::int64_t t = 0;
  for (std::size_t j = 0; j < coords.size(); ++j) t = (t + static_cast<std::int64_t>(coords[j]) * ch.num[j]) % ch.den;
  return std::min(t, ch.den - t);
}

}  // namespace

void BohrSpec::validate() const {
  if (!group) throw InputError("bohr: missing group");
  if (!group->has_coordinates()) throw InputError("bohr: needs the product-of-cyclic group variant");
  if (delta <= 0) throw InputError("bohr: delta must be positive");
  const auto& moduli = group->moduli();
  for (std::size_t i = 0; i < characters.size(); ++i) {
    if (characters[i].size() != moduli.size()) {
      throw InputError("bohr: character " + std::to_string(i) + " has the wrong number of coordinates");
    }
    for (std::size_t j = 0; j < moduli.size(); ++j) {
      const Rational v = characters[i][j] * moduli[j];
      if (denominator(v) != 1) {
        throw InputError("bohr: character " + std::to_string(i) + " is not well defined on coordinate " +
                         std::to_string(j));
      }
    }
  }
}

BohrSpec BohrSpec::with_radius(const Rational& radius) const {
  BohrSpec out = *this;
  out.delta = radius;
  return out;
}

Rational BohrSpec::distance(Element x) const {
  validate();
  group->check(x);
  const auto coords = group->decode(x);
  Rational best = 0;
  for (const IntCharacter& ch : integral_characters(*this)) best = std::max(best, Rational(arc(ch, coords), ch.den));
  return best;
}

GroupSet expand(const BohrSpec& spec) {
  spec.validate();
  const std::vector<IntCharacter> chars = integral_characters(spec);
  const BigInt dn = numerator(spec.delta), dd = denominator(spec.delta);
  GroupSet out(spec.group);
  for (Element x = 0; x < spec.group->order(); ++x) {
    const auto coords = spec.group->decode(x);
    bool inside = true;
    for (const IntCharacter& ch : chars) {
      // t/den < delta  <=>  t * dd < dn * den
      if (!(BigInt(arc(ch, coords)) * dd < dn * ch.den)) {
        inside = false;
        break;
      }
    }
    if (inside) out.insert(x);
  }
  return out;
}

namespace {

// P_0 H for integer lengths when P_0 is proper and P_0 H ⊆ b.
std::optional<GroupSet> fitting_progression(const GroupPtr& group, const std::vector<Element>& gens,
                                            const std::vector<std::int64_t>& lens, const GroupSet& h,
                                            const GroupSet& b) {
  ProgressionSpec p;
  BigInt nominal = 1;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    p.generators.push_back(gens[i]);
    p.lengths.emplace_back(lens[i]);
    nominal *= 2 * lens[i] + 1;
  }
  if (nominal > BigInt(group->order())) return std::nullopt;
  const GroupSet p0 = expand_arithmetic(group, p);
  if (BigInt(p0.size()) != nominal) return std::nullopt;
  GroupSet full = product_set(p0, h);
  if (!full.subset_of(b)) return std::nullopt;
  return full;
}

}  // namespace

BohrSearch bohr_to_proper_progression(const BohrSpec& spec) {
  spec.validate();
  if (spec.rank() > kMaxBohrSearchRank) {
    throw CapacityError("bohr_to_proper_progression: rank above " + std::to_string(kMaxBohrSearchRank));
  }
  const GroupPtr& group = spec.group;
  const FiniteGroup& G = *group;
  BohrSearch out;
  const GroupSet b = expand(spec);

  auto finish = [&](CosetProgressionSpec p, std::size_t s, GroupSet inner) {
    GroupSet expanded = expand(p);
    BohrProgression w{std::move(p), s, std::move(expanded), std::move(inner)};
    if (!is_proper(w.progression) || !w.inner.subset_of(w.expanded) || !w.expanded.subset_of(b)) {
      throw InternalError("bohr_to_proper_progression: witness failed verification");
    }
    out.witness = std::move(w);
    return out;
  };

  if (is_subgroup(b)) {
    out.candidates_tried = 1;
    return finish(CosetProgressionSpec::arithmetic(group, {}, {}, b), 0, b);
  }

  // Subgroups inside B: the common kernel, plus every enumerable subgroup.
  std::vector<GroupSet> hs;
  {
    GroupSet kernel(group);
    for (Element x = 0; x < G.order(); ++x) {
      if (spec.distance(x) == 0) kernel.insert(x);
    }
    std::unordered_set<GroupSet, GroupSetHash> seen{kernel};
    hs.push_back(kernel);
    if (subgroup_enumeration_feasible(G)) {
      for (const Subgroup& s : enumerate_subgroups(group)) {
        if (s.set.subset_of(b) && seen.insert(s.set).second) hs.push_back(s.set);
      }
    }
    std::stable_sort(hs.begin(), hs.end(), [](const GroupSet& x, const GroupSet& y) { return x.size() > y.size(); });
    constexpr std::size_t kMaxSubgroups = 8;
    if (hs.size() > kMaxSubgroups) hs.resize(kMaxSubgroups);
  }

  // Generator candidates: B by Bohr distance, one of each ±u pair.
  std::vector<Element> gens;
  {
    std::vector<std::pair<Rational, Element>> ranked;
    b.for_each([&](Element x) {
      if (x != G.identity() && G.inv(x) >= x) ranked.emplace_back(spec.distance(x), x);
    });
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    constexpr std::size_t kMaxGenerators = 24;
    for (std::size_t i = 0; i < ranked.size() && i < kMaxGenerators; ++i) gens.push_back(ranked[i].second);
  }

  auto max_length = [&](std::vector<Element> g, std::vector<std::int64_t> lens, std::size_t slot,
                        const GroupSet& h) -> std::pair<std::int64_t, GroupSet> {
    lens[slot] = 0;
    auto cur = fitting_progression(group, g, lens, h, b);
    if (!cur) return {-1, GroupSet()};
    while (true) {
      ++lens[slot];
      auto next = fitting_progression(group, g, lens, h, b);
      if (!next) return {lens[slot] - 1, *cur};
      cur = std::move(next);
    }
  };

  const std::size_t max_s = std::min<std::size_t>(spec.rank(), kMaxBohrSearchRank);
  for (std::size_t s = 1; s <= max_s; ++s) {
    Rational shrink = 1;
    for (std::size_t i = 0; i < 2 * s; ++i) shrink *= s;
    const GroupSet inner = expand(spec.with_radius(spec.delta / shrink));
    for (const GroupSet& h : hs) {
      if (s == 1) {
        for (Element u : gens) {
          if (h.contains(u)) continue;
          ++out.candidates_tried;
          auto [len, p] = max_length({u}, {0}, 0, h);
          if (len < 0 || !inner.subset_of(p)) continue;
          return finish(CosetProgressionSpec::arithmetic(group, {u}, {Rational(len)}, h), 1, inner);
        }
      } else {
        for (std::size_t i = 0; i < gens.size(); ++i) {
          auto [len1max, p1] = max_length({gens[i]}, {0}, 0, h);
          if (len1max < 0) continue;
          for (std::size_t j = i + 1; j < gens.size(); ++j) {
            const Element pair[] = {gens[i], gens[j]};
            GroupSet span = generate_closure(group, pair).set;
            if (!inner.subset_of(product_set(span, h))) continue;
            for (std::int64_t len1 = len1max; len1 >= 0; --len1) {
              ++out.candidates_tried;
              auto [len2, p] = max_length({gens[i], gens[j]}, {len1, 0}, 1, h);
              if (len2 < 0 || !inner.subset_of(p)) continue;
              return finish(CosetProgressionSpec::arithmetic(group, {gens[i], gens[j]},
                                                             {Rational(len1), Rational(len2)}, h),
                            2, inner);
            }
          }
        }
      }
    }
  }
  out.diagnostics = "no witness: |B|=" + std::to_string(b.size()) + ", subgroup candidates=" +
                    std::to_string(hs.size()) + ", generator candidates=" + std::to_string(gens.size()) +
                    ", tried=" + std::to_string(out.candidates_tried);
  return out;
}

BohrCover bohr_cover(const GroupSet& a, const BohrSpec& spec) {
  if (a.empty()) throw InputError("bohr_cover: empty set");
  spec.validate();
  if (!same_group(a.group_ptr(), spec.group)) throw InputError("bohr_cover: set and Bohr spec use different groups");
  const GroupSet b = expand(spec);
  BohrCover out;
  out.bound = pow(Rational(2) / spec.delta, static_cast<unsigned>(spec.rank()));

  GroupSet x(a.group_ptr());
  a.for_each([&](Element p) {
    if (x.empty() && a.subset_of(b.left_translate(p))) x.insert(p);
  });
  if (x.empty()) {
    // B(δ/2) + B(δ/2) ⊆ B(δ), so the Ruzsa cover by B(δ/2) works for B(δ).
    const GroupSet half = expand(spec.with_radius(spec.delta / 2));
    x = ruzsa_cover(a, half);
    for (Element p : x.elements()) {
      GroupSet trial = x;
      trial.erase(p);
      if (!trial.empty() && a.subset_of(product_set(trial, b))) x = std::move(trial);
    }
  }
  if (!a.subset_of(product_set(x, b))) throw InternalError("bohr_cover: inclusion A ⊆ X + B failed");
  out.points = std::move(x);
  out.within_bound = Rational(out.points.size()) <= out.bound;
  return out;
}

}  // namespace sdl
