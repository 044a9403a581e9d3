#include "sdl/regularity.h"

#include <algorithm>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "sdl/errors.h"
#include "sdl/setarith.h"

namespace sdl {

namespace {

std::string describe(const FiniteGroup& g, Element x) {
  if (!g.has_coordinates() || g.moduli().size() < 2) return std::to_string(x);
  std::ostringstream os;
  os << x << " (";
  const std::vector<std::uint32_t> c = g.decode(x);
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ")";
  return os.str();
}

GroupSet conjugate(const GroupSet& s, Element g) { return s.left_translate(g).right_translate(s.group().inv(g)); }

Subgroup closure_with(const GroupPtr& group, const std::vector<Element>& gens, Element s) {
  std::vector<Element> all = gens;
  all.push_back(s);
  return generate_closure(group, all);
}

// Largest divisor of n that is at most m.
std::size_t largest_divisor_at_most(std::size_t n, std::size_t m) {
  for (std::size_t d = std::min(n, m); d > 1; --d) {
    if (n % d == 0) return d;
  }
  return 1;
}

bool better_subgroup(const GroupSet& a, const GroupSet& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a.lex_less(b);
}

ConditionResult make(std::string name, Rational measured, Rational bound, bool strict, std::string detail = {}) {
  ConditionResult c;
  c.name = std::move(name);
  c.pass = strict ? measured < bound : measured <= bound;
  c.measured = std::move(measured);
  c.bound = std::move(bound);
  c.strict = strict;
  c.detail = std::move(detail);
  return c;
}

ConditionResult flag(std::string name, bool ok, std::string detail = {}) {
  return make(std::move(name), Rational(ok ? 0 : 1), Rational(0), false, std::move(detail));
}

bool is_abelian_variant(CertificateVariant v) {
  return v == CertificateVariant::kAbelianProgression || v == CertificateVariant::kAbelianExponent;
}

}  // namespace

GroupSet stabilizer(const StabilizerQuery& q) {
  if (q.measure.empty()) throw InputError("stabilizer: empty measure set");
  q.measure.require_same_group(q.target, "stabilizer");
  if (q.eps < 0) throw InputError("stabilizer: eps must be >= 0");
  const GroupPtr& group = q.measure.group_ptr();
  const FiniteGroup& G = *group;
  const Rational budget = q.eps * q.measure.size();
  const GroupSet& x = q.target;
  GroupSet out(group);
  for (Element g = 0; g < G.order(); ++g) {
    const GroupSet moved = q.side == Side::kLeft ? x.left_translate(g) : x.right_translate(g);
    if (Rational(moved.symmetric_difference_size(x)) <= budget) out.insert(g);
  }
  if (!out.contains(G.identity())) throw InternalError("stabilizer: identity missing");
  if (!(out == out.inverse())) throw InternalError("stabilizer: result is not symmetric");
  if (q.eps == 0 && !is_subgroup(out)) throw InternalError("stabilizer: exact stabilizer is not a subgroup");
  if (q.eps < Rational(x.size(), q.measure.size())) {
    const GroupSet bound = q.side == Side::kLeft ? product_set(x, x.inverse()) : product_set(x.inverse(), x);
    if (!out.subset_of(bound)) throw InternalError("stabilizer: result escapes XX^{-1}");
  }
  return out;
}

Subgroup gamma_abelian(const GroupSet& a) {
  if (a.empty()) throw InputError("gamma_abelian: empty set");
  if (!a.group().is_abelian()) {
    throw InputError("gamma_abelian: nonabelian group; use conjugation_core on the left stabilizer");
  }
  const GroupSet left = stabilizer({a, a, Rational(0), Side::kLeft});
  const GroupSet right = stabilizer({a, a, Rational(0), Side::kRight});
  if (!(left == right)) throw InternalError("gamma_abelian: left and right stabilizers differ");
  return subgroup_from_set(left);
}

Subgroup conjugation_core(const GroupSet& a, const Subgroup& s) {
  a.require_same_group(s.set, "conjugation_core");
  if (!is_subgroup(s.set)) throw InputError("conjugation_core: S is not a subgroup");
  const GroupSet movers = a | a.inverse();
  GroupSet core = s.set;
  bool changed = true;
  while (changed) {
    changed = false;
    movers.for_each([&](Element g) {
      GroupSet next = core & conjugate(core, g);
      if (next.size() != core.size()) {
        core = std::move(next);
        changed = true;
      }
    });
  }
  const Subgroup span = generate_closure(a);
  if (!is_normalized_by(core, span.set)) throw InternalError("conjugation_core: result is not normal in <A>");
  return subgroup_from_set(core);
}

SubgroupExtraction max_subgroup_within(const GroupSet& s, std::size_t budget) {
  const GroupPtr& group = s.group_ptr();
  const FiniteGroup& G = *group;
  if (!s.contains(G.identity())) throw InputError("max_subgroup_within: identity not in S");
  if (is_subgroup(s)) return {subgroup_from_set(s), true};

  // Only elements whose cyclic subgroup stays inside S can ever be adjoined.
  std::vector<Element> usable;
  s.for_each([&](Element x) {
    if (x == G.identity()) return;
    Element y = x;
    while (y != G.identity()) {
      if (!s.contains(y)) return;
      y = G.mul(y, x);
    }
    usable.push_back(x);
  });

  // Greedy chain.
  Subgroup greedy = generate_closure(group, std::span<const Element>());
  while (true) {
    std::optional<Subgroup> step;
    for (Element x : usable) {
      if (greedy.set.contains(x)) continue;
      Subgroup j = closure_with(group, greedy.generators, x);
      if (!j.set.subset_of(s)) continue;
      if (!step || j.set.size() > step->set.size()) step = std::move(j);
    }
    if (!step) break;
    greedy = std::move(*step);
  }

  // Bounded exhaustive search over the subgroups inside S.
  const std::size_t ceiling = largest_divisor_at_most(G.order(), s.size());
  Subgroup best = greedy;
  std::unordered_set<GroupSet, GroupSetHash> seen;
  std::vector<Subgroup> stack{generate_closure(group, std::span<const Element>())};
  seen.insert(stack.back().set);
  bool complete = true;
  while (!stack.empty() && best.set.size() < ceiling) {
    if (seen.size() > budget) {
      complete = false;
      break;
    }
    Subgroup h = std::move(stack.back());
    stack.pop_back();
    if (better_subgroup(h.set, best.set)) best = h;
    for (Element x : usable) {
      if (h.set.contains(x)) continue;
      Subgroup j = closure_with(group, h.generators, x);
      if (!j.set.subset_of(s) || !seen.insert(j.set).second) continue;
      stack.push_back(std::move(j));
    }
  }
  if (best.set.size() == ceiling) complete = true;
  best.normal_in_group = is_normal(best.set);
  return {std::move(best), complete};
}

const char* to_string(CertificateVariant v) {
  switch (v) {
    case CertificateVariant::kNilprogression:
      return "nilprogression";
    case CertificateVariant::kSubgroupExponent:
      return "subgroup-exponent";
    case CertificateVariant::kStable:
      return "stable";
    case CertificateVariant::kAbelianProgression:
      return "abelian-progression";
    case CertificateVariant::kAbelianExponent:
      return "abelian-exponent";
  }
  return "?";
}

CertificateVariant parse_variant(const std::string& name) {
  for (auto v : {CertificateVariant::kNilprogression, CertificateVariant::kSubgroupExponent, CertificateVariant::kStable,
                 CertificateVariant::kAbelianProgression, CertificateVariant::kAbelianExponent}) {
    if (name == to_string(v)) return v;
  }
  throw InputError("unknown certificate variant '" + name + "'");
}

bool ConditionReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.pass; });
}

const ConditionResult* ConditionReport::find(const std::string& name) const {
  for (const ConditionResult& c : conditions) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

bool RegularityCertificate::uses_subgroup() const {
  return variant == CertificateVariant::kSubgroupExponent || variant == CertificateVariant::kStable ||
         variant == CertificateVariant::kAbelianExponent;
}

GroupSet RegularityCertificate::structure() const {
  if (uses_subgroup()) {
    if (!subgroup) throw InputError("certificate: missing subgroup");
    return *subgroup;
  }
  if (!progression) throw InputError("certificate: missing progression");
  return expand(*progression);
}

ConditionReport verify_certificate(const RegularityCertificate& cert) {
  ConditionReport rep;
  const GroupSet& a = cert.a;
  if (a.empty()) throw InputError("verify_certificate: empty A");
  for (const GroupSet* s : {&cert.cover, &cert.selector, &cert.error}) a.require_same_group(*s, "verify_certificate");
  const FiniteGroup& G = a.group();
  const CertificateVariant v = cert.variant;

  // Structure.
  GroupSet t(a.group_ptr());
  {
    std::string why;
    bool ok = true;
    try {
      if (cert.uses_subgroup()) {
        if (!cert.subgroup) throw InputError("missing subgroup");
        a.require_same_group(*cert.subgroup, "verify_certificate");
        t = *cert.subgroup;
        if (!is_subgroup(t)) throw InputError("H is not a subgroup");
      } else {
        if (!cert.progression) throw InputError("missing progression");
        if (!same_group(cert.progression->group, a.group_ptr())) throw InputError("P lives in another group");
        cert.progression->validate();
        t = expand(*cert.progression);
        if (v == CertificateVariant::kAbelianProgression && !is_proper(*cert.progression)) {
          throw InputError("P is not proper");
        }
        if (v == CertificateVariant::kNilprogression &&
            !nilpotence_step(a.group_ptr(), cert.progression->progression.generators)) {
          throw InputError("generators are not nilpotent within the step cap");
        }
      }
      if (is_abelian_variant(v) && !G.is_abelian()) throw InputError("abelian variant on a nonabelian group");
    } catch (const InputError& e) {
      ok = false;
      why = e.what();
    }
    rep.conditions.push_back(flag("structure", ok, why));
    if (!ok) return rep;
  }
  const std::size_t na = a.size();
  const std::size_t nt = t.size();
  rep.size_ratio = Rational(nt, na);

  // Parameters.
  Rational iii_eps = cert.eps;
  if (v == CertificateVariant::kAbelianExponent) {
    const Rational k(product_set(a, a).size(), na);
    const std::uint64_t r = G.exponent();
    std::string why;
    bool ok = cert.delta > 0 && cert.delta <= 1;
    if (!ok) why = "delta outside (0,1]";
    if (ok && (k != cert.k || r != cert.r)) {
      ok = false;
      why = "recorded k or r does not match A (k = " + to_string(k) + ", r = " + std::to_string(r) + ")";
    }
    if (ok) {
      iii_eps = cert.delta / exponent_constant(r, k);
      if (iii_eps != cert.eps) {
        ok = false;
        why = "recorded eps differs from delta / c_r(k) = " + to_string(iii_eps);
      }
    }
    rep.conditions.push_back(flag("parameters", ok, why));
  } else {
    rep.conditions.push_back(flag("parameters", cert.eps > 0, cert.eps > 0 ? "" : "eps must be positive"));
  }

  // (i)
  const GroupSet allowed = product_set(a, a.inverse()) & product_set(a.inverse(), a);
  rep.conditions.push_back(make("i.containment", Rational((t - allowed).size()), 0, false,
                                "elements of the structure outside AA^{-1} ∩ A^{-1}A"));
  rep.conditions.push_back(make("i.cover_in_a", Rational((cert.cover - a).size()), 0, false, "C \\ A"));
  const GroupSet ct = product_set(cert.cover, t);
  rep.conditions.push_back(make("i.cover", Rational((a - ct).size()), 0, false, "A \\ C*structure"));
  rep.conditions.push_back(make("selector", Rational((cert.selector - cert.cover).size()), 0, false, "D \\ C"));

  // Z.
  const GroupSet& z = cert.error;
  rep.conditions.push_back(make("z.inside", Rational((z - product_set(a, t)).size()), 0, false, "Z \\ A*structure"));
  if (v == CertificateVariant::kSubgroupExponent || v == CertificateVariant::kAbelianExponent) {
    rep.conditions.push_back(
        make("z.saturated", Rational((product_set(z, t) - z).size()), 0, false, "ZH \\ Z, Z must be a union of cosets"));
  }
  switch (v) {
    case CertificateVariant::kStable:
      rep.conditions.push_back(make("z.size", Rational(z.size()), 0, false, "Z must be empty"));
      break;
    case CertificateVariant::kAbelianExponent:
      rep.conditions.push_back(make("z.size", Rational(z.size() * z.size()), cert.delta * na * na, true,
                                    "|Z|^2 against delta |A|^2"));
      break;
    default:
      rep.conditions.push_back(make("z.size", Rational(z.size()), cert.eps * na, true, "|Z| against eps |A|"));
  }

  // (ii)
  const GroupSet dt = product_set(cert.selector, t);
  switch (v) {
    case CertificateVariant::kNilprogression:
    case CertificateVariant::kAbelianProgression:
      rep.conditions.push_back(
          make("ii", Rational(((a ^ dt) - z).size()), cert.eps * nt, true, "|(A △ DP) \\ Z| against eps |P|"));
      break;
    case CertificateVariant::kSubgroupExponent:
      rep.conditions.push_back(
          make("ii", Rational(((a - z) ^ dt).size()), cert.eps * nt, true, "|(A \\ Z) △ DH| against eps |H|"));
      break;
    case CertificateVariant::kStable:
      rep.conditions.push_back(make("ii", Rational((a ^ dt).size()), cert.eps * nt, true, "|A △ DH| against eps |H|"));
      break;
    case CertificateVariant::kAbelianExponent:
      rep.conditions.push_back(make("ii", Rational((a ^ dt).size()), cert.delta * na, true, "|A △ (D+H)| against delta |A|"));
      break;
  }

  // (iii): m(g) = min(|gT ∩ A|, |gT \ A|) must be small for every g outside Z.
  {
    const bool fourth = v == CertificateVariant::kAbelianExponent;
    Rational worst = 0;
    std::string where;
    const Rational bound = fourth ? iii_eps * pow(Rational(nt), 4) : cert.eps * nt;
    for (Element g = 0; g < G.order(); ++g) {
      if (z.contains(g)) continue;
      const std::size_t in = t.left_translate(g).intersection_size(a);
      const std::size_t m = std::min(in, nt - in);
      const Rational measured = fourth ? pow(Rational(m), 4) : Rational(m);
      if (measured > worst) worst = measured;
      if (where.empty() && !(measured < bound)) {
        where = "violated at g = " + describe(G, g) + " with |gT ∩ A| = " + std::to_string(in) + " of " +
                std::to_string(nt);
      }
    }
    if (where.empty()) where = fourth ? "fourth powers against eps |H|^4" : "against eps |T|";
    rep.conditions.push_back(make("iii", worst, bound, true, where));
  }

  if (v == CertificateVariant::kNilprogression || v == CertificateVariant::kSubgroupExponent ||
      v == CertificateVariant::kAbelianProgression) {
    rep.conditions.push_back(
        make("derived", Rational((a ^ dt).size()), cert.eps * (nt + na), true, "|A △ DT| against eps (|T| + |A|)"));
  }
  return rep;
}

namespace {

struct CosetSplit {
  GroupSet cover, selector, error;
};

// Cosets gH meeting A, represented by their least element of A.
CosetSplit split_cosets(const GroupSet& a, const GroupSet& h, const Rational& eps, bool with_error) {
  CosetSplit out{GroupSet(a.group_ptr()), GroupSet(a.group_ptr()), GroupSet(a.group_ptr())};
  GroupSet done(a.group_ptr());
  const std::size_t nh = h.size();
  a.for_each([&](Element x) {
    if (done.contains(x)) return;
    const GroupSet coset = h.left_translate(x);
    done |= coset;
    out.cover.insert(x);
    const std::size_t in = coset.intersection_size(a);
    const bool small = Rational(in) < eps * nh;
    const bool large = Rational(nh - in) < eps * nh;
    if (with_error && !small && !large) {
      out.error |= coset;
      return;
    }
    if (2 * in > nh) out.selector.insert(x);
  });
  return out;
}

RegularityCertificate subgroup_certificate(const GroupSet& a, const GroupSet& h, const Rational& eps, SearchVariant sv,
                                           const Rational& k) {
  RegularityCertificate c;
  c.variant = sv == SearchVariant::kStable ? CertificateVariant::kStable : CertificateVariant::kSubgroupExponent;
  c.a = a;
  c.subgroup = h;
  CosetSplit s = split_cosets(a, h, eps, sv == SearchVariant::kSearch);
  c.cover = std::move(s.cover);
  c.selector = std::move(s.selector);
  c.error = std::move(s.error);
  c.eps = eps;
  c.k = k;
  c.report = verify_certificate(c);
  c.satisfied = c.report.all_pass();
  return c;
}

bool ranks_before(const RegularityCertificate& x, const RegularityCertificate& y) {
  if (x.satisfied != y.satisfied) return x.satisfied;
  if (x.error.size() != y.error.size()) return x.error.size() < y.error.size();
  return x.cover.size() < y.cover.size();
}

}  // namespace

RegularityCertificate regularize_exponent(const GroupSet& a, const Rational& delta) {
  if (a.empty()) throw InputError("regularize_exponent: empty set");
  const FiniteGroup& G = a.group();
  if (!G.is_abelian()) throw InputError("regularize_exponent: group must be abelian");
  if (delta <= 0 || delta > 1) throw InputError("regularize_exponent: delta must lie in (0,1]");

  const Rational k(product_set(a, a).size(), a.size());
  const std::uint64_t r = G.exponent();
  const Rational eps = delta / exponent_constant(r, k);

  const Model model = model_bounded_exponent(a);
  const FiniteGroup& M = *model.group;
  const GroupSet& am = model.set;
  const Rational threshold = eps * M.order();

  GroupSet s(model.group);
  for (Element x = 0; x < M.order(); ++x) {
    if (Rational(am.left_translate(x).symmetric_difference_size(am)) < threshold) s.insert(x);
  }
  const GroupSet h = max_subgroup_within(s).subgroup.set;
  const std::size_t nh = h.size();

  GroupSet cover(model.group), selector(model.group), error(model.group), done(model.group);
  const Rational fourth = eps * pow(Rational(nh), 4);
  am.for_each([&](Element x) {
    if (done.contains(x)) return;
    const GroupSet coset = h.left_translate(x);
    done |= coset;
    cover.insert(x);
    const std::size_t in = coset.intersection_size(am);
    if (2 * in > nh) selector.insert(x);
    if (pow(Rational(std::min(in, nh - in)), 4) >= fourth) error |= coset;
  });
  if (!selector.empty() && !h.subset_of(product_set(am, am.inverse()))) {
    throw InternalError("regularize_exponent: H escapes A' - A'");
  }

  RegularityCertificate c;
  c.variant = CertificateVariant::kAbelianExponent;
  c.a = a;
  c.subgroup = model.embed(h);
  c.cover = model.pull_back(cover);
  c.selector = model.pull_back(selector);
  c.error = model.pull_back(error);
  c.eps = eps;
  c.delta = delta;
  c.k = k;
  c.r = r;
  c.report = verify_certificate(c);
  c.satisfied = c.report.all_pass();
  return c;
}

RegularityCertificate regularize_search(const GroupSet& a, const Rational& eps, SearchVariant variant,
                                        unsigned workers) {
  if (a.empty()) throw InputError("regularize_search: empty set");
  if (eps <= 0) throw InputError("regularize_search: eps must be positive");
  const GroupPtr& group = a.group_ptr();
  const GroupSet allowed = product_set(a, a.inverse()) & product_set(a.inverse(), a);
  std::vector<GroupSet> candidates;
  for (Subgroup& h : enumerate_subgroups(group)) {
    if (h.set.subset_of(allowed)) candidates.push_back(std::move(h.set));
  }
  const Rational k = group->is_abelian() ? Rational(product_set(a, a).size(), a.size())
                                         : Rational(product_set(product_set(a, a), a).size(), a.size());

  std::vector<std::optional<RegularityCertificate>> results(candidates.size());
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(candidates.size())));
  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < candidates.size(); i += n) {
      results[i] = subgroup_certificate(a, candidates[i], eps, variant, k);
    }
  };
  if (n == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(run, w);
    for (std::thread& t : pool) t.join();
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (ranks_before(*results[i], *results[best])) best = i;
  }
  return std::move(*results[best]);
}

}  // namespace sdl
