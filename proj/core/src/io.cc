#include "sdl/io.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>

#include "sdl/errors.h"

namespace sdl {

namespace {

const Json& require(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string(what) + ": missing field '" + key + "'");
  return j.at(key);
}

std::uint64_t to_uint(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw InputError(std::string(what) + ": expected a nonnegative integer, got " + j.dump());
  }
  return j.get<std::uint64_t>();
}

Element element_from_json(const FiniteGroup& g, const Json& j) {
  if (j.is_number_integer()) {
    const std::int64_t v = j.get<std::int64_t>();
    if (v < 0 || static_cast<std::uint64_t>(v) >= g.order()) {
      throw InputError("element " + std::to_string(v) + " outside a group of order " + std::to_string(g.order()));
    }
    return static_cast<Element>(v);
  }
  if (j.is_array()) {
    if (!g.has_coordinates()) throw InputError("coordinate elements need a product-of-cyclic group");
    std::vector<std::int64_t> c;
    for (const Json& x : j) {
      if (!x.is_number_integer()) throw InputError("coordinate must be an integer: " + x.dump());
      c.push_back(x.get<std::int64_t>());
    }
    return g.encode(c);
  }
  throw InputError("element must be an integer or coordinate array: " + j.dump());
}

std::vector<Element> elements_from_json(const FiniteGroup& g, const Json& j) {
  const Json& list = j.is_object() ? require(j, "elements", "set") : j;
  if (!list.is_array()) throw InputError("set must be an array of elements");
  std::vector<Element> out;
  for (const Json& x : list) out.push_back(element_from_json(g, x));
  return out;
}

GroupPtr cayley_from_permutations(const std::vector<std::vector<unsigned>>& elems,
                                  const std::function<std::vector<unsigned>(const std::vector<unsigned>&,
                                                                            const std::vector<unsigned>&)>& compose) {
  std::map<std::vector<unsigned>, Element> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<Element>(i);
  CayleySpec spec;
  spec.order = static_cast<std::uint32_t>(elems.size());
  spec.identity = 0;
  spec.table.assign(elems.size(), std::vector<Element>(elems.size()));
  for (std::size_t a = 0; a < elems.size(); ++a) {
    for (std::size_t b = 0; b < elems.size(); ++b) spec.table[a][b] = index.at(compose(elems[a], elems[b]));
  }
  spec.trusted = elems.size() > kCayleyValidationLimit;
  return FiniteGroup::build(spec);
}

}  // namespace

GroupPtr symmetric_group(unsigned n) {
  if (n < 1 || n > 6) throw InputError("symmetric group degree must lie in [1,6]");
  std::vector<unsigned> p(n);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<std::vector<unsigned>> elems;
  do {
    elems.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return cayley_from_permutations(elems, [](const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
    std::vector<unsigned> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
    return c;
  });
}

GroupPtr dihedral_group(unsigned n) {
  if (n < 1) throw InputError("dihedral group needs n >= 1");
  if (2ull * n > max_group_order()) throw CapacityError("dihedral group exceeds the order cap");
  CayleySpec spec;
  spec.order = 2 * n;
  spec.identity = 0;
  spec.table.assign(spec.order, std::vector<Element>(spec.order));
  for (unsigned x = 0; x < spec.order; ++x) {
    for (unsigned y = 0; y < spec.order; ++y) {
      const unsigned i = x % n, a = x / n, j = y % n, b = y / n;
      const unsigned k = a ? (i + n - j) % n : (i + j) % n;
      spec.table[x][y] = k + n * ((a + b) % 2);
    }
  }
  spec.trusted = spec.order > kCayleyValidationLimit;
  return FiniteGroup::build(spec);
}

GroupPtr group_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("group must be a JSON object");
  if (j.contains("type")) {
    // {"type": "abelian", "moduli": [...]}, {"type": "cayley", "order", ...},
    // {"type": "cyclic" | "symmetric" | "dihedral", "n": n}.
    const Json& t = j.at("type");
    if (!t.is_string()) throw InputError("group: 'type' must be a string");
    const std::string type = t.get<std::string>();
    if (type == "abelian") return group_from_json(Json{{"abelian", require(j, "moduli", "group")}});
    if (type == "cayley") {
      Json c = j;
      c.erase("type");
      return group_from_json(Json{{"cayley", c}});
    }
    if (type == "cyclic" || type == "symmetric" || type == "dihedral") {
      return group_from_json(Json{{type, require(j, "n", "group")}});
    }
    throw InputError("group: unknown type '" + type + "'");
  }
  if (j.contains("abelian")) {
    AbelianSpec spec;
    const Json& m = j.at("abelian");
    if (!m.is_array()) throw InputError("group: 'abelian' must be an array of moduli");
    for (const Json& x : m) spec.moduli.push_back(static_cast<std::uint32_t>(to_uint(x, "modulus")));
    return FiniteGroup::build(spec);
  }
  if (j.contains("cyclic")) return FiniteGroup::cyclic(static_cast<std::uint32_t>(to_uint(j.at("cyclic"), "cyclic")));
  if (j.contains("symmetric")) return symmetric_group(static_cast<unsigned>(to_uint(j.at("symmetric"), "symmetric")));
  if (j.contains("dihedral")) return dihedral_group(static_cast<unsigned>(to_uint(j.at("dihedral"), "dihedral")));
  if (j.contains("cayley")) {
    const Json& c = j.at("cayley");
    CayleySpec spec;
    spec.order = static_cast<std::uint32_t>(to_uint(require(c, "order", "cayley"), "order"));
    spec.identity = c.contains("identity") ? static_cast<Element>(to_uint(c.at("identity"), "identity")) : 0;
    spec.trusted = c.value("trusted", false);
    const Json& t = require(c, "table", "cayley");
    if (!t.is_array()) throw InputError("cayley: table must be an array of rows");
    for (const Json& row : t) {
      if (!row.is_array()) throw InputError("cayley: table rows must be arrays");
      std::vector<Element> r;
      for (const Json& x : row) r.push_back(static_cast<Element>(to_uint(x, "table entry")));
      spec.table.push_back(std::move(r));
    }
    return FiniteGroup::build(spec);
  }
  throw InputError("group: expected one of abelian, cyclic, symmetric, dihedral, cayley");
}

Json group_to_json(const FiniteGroup& g) {
  const GroupSpec spec = g.spec();
  if (const auto* ab = std::get_if<AbelianSpec>(&spec)) return Json{{"abelian", ab->moduli}};
  const auto& cy = std::get<CayleySpec>(spec);
  return Json{{"cayley", {{"order", cy.order}, {"identity", cy.identity}, {"table", cy.table}, {"trusted", true}}}};
}

GroupPtr parse_group_arg(const std::string& text) {
  if (text.empty()) throw InputError("empty group description");
  if (text.front() == '{') return group_from_json(parse_json_text(text, "--group"));
  if (std::filesystem::exists(text)) return group_from_json(read_json_file(text));
  static const std::regex factor(R"(([ZF])(\d+)(?:\^(\d+))?)");
  static const std::regex named(R"(([SD])(\d+))");
  std::smatch m;
  if (std::regex_match(text, m, named)) {
    const unsigned n = static_cast<unsigned>(std::stoul(m[2]));
    return m[1] == "S" ? symmetric_group(n) : dihedral_group(n);
  }
  AbelianSpec spec;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    if (!std::regex_match(part, m, factor)) throw InputError("cannot parse group '" + text + "'");
    const auto mod = static_cast<std::uint32_t>(std::stoul(m[2]));
    const unsigned reps = m[3].matched ? static_cast<unsigned>(std::stoul(m[3])) : 1;
    if (m[1] == "F" && !is_prime(mod)) throw InputError("F" + std::to_string(mod) + ": field size must be prime");
    for (unsigned i = 0; i < reps; ++i) spec.moduli.push_back(mod);
  }
  return FiniteGroup::build(spec);
}

GroupSet set_from_json(const GroupPtr& group, const Json& j) {
  if (j.is_object() && j.contains("bitset_hex")) {
    const Json& h = j.at("bitset_hex");
    if (!h.is_string()) throw InputError("set: 'bitset_hex' must be a string");
    return GroupSet::from_hex(group, h.get<std::string>());
  }
  const std::vector<Element> xs = elements_from_json(*group, j);
  return GroupSet(group, xs);
}

Json elements_to_json(const std::vector<Element>& xs) {
  Json out = Json::array();
  for (Element x : xs) out.push_back(x);
  return out;
}

Json set_to_json(const GroupSet& s) { return elements_to_json(s.elements()); }

GroupSet parse_set_arg(const GroupPtr& group, const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    return set_from_json(group, parse_json_text(text, "set argument"));
  }
  if (!text.empty() && std::filesystem::exists(text)) return set_from_json(group, read_json_file(text));
  GroupSet out(group);
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) continue;
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v < 0) throw InputError("bad element '" + tok + "' in set argument");
    out.insert(element_from_json(*group, Json(v)));
  }
  return out;
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_float()) return parse_rational(j.dump());
  if (j.is_object() && j.contains("num") && j.contains("den")) {
    const Json& n = j.at("num");
    const Json& d = j.at("den");
    if (!n.is_number_integer() || !d.is_number_integer() || d.get<std::int64_t>() == 0) {
      throw InputError("rational: num/den must be integers with den != 0, got " + j.dump());
    }
    return Rational(n.get<std::int64_t>(), d.get<std::int64_t>());
  }
  throw InputError("expected a rational, got " + j.dump());
}

Json rational_to_json(const Rational& q) { return to_string(q); }

CosetProgressionSpec progression_from_json(const GroupPtr& group, const Json& j) {
  if (!j.is_object()) throw InputError("progression must be a JSON object");
  for (const char* key : {"gap", "nil"}) {
    // {"gap": {"gens": [...], "lengths": [...]}, "subgroup": [...]}.
    if (!j.contains(key)) continue;
    const Json& g = j.at(key);
    Json flat{{"kind", std::string(key) == "gap" ? "arithmetic" : "generalized"},
              {"generators", require(g, "gens", key)},
              {"lengths", require(g, "lengths", key)}};
    if (j.contains("subgroup")) flat["subgroup"] = j.at("subgroup");
    return progression_from_json(group, flat);
  }
  const std::string kind = j.value("kind", "arithmetic");
  std::vector<Element> gens = elements_from_json(*group, require(j, "generators", "progression"));
  std::vector<Rational> lengths;
  const Json& l = require(j, "lengths", "progression");
  if (!l.is_array()) throw InputError("progression: lengths must be an array");
  for (const Json& x : l) lengths.push_back(rational_from_json(x));
  CosetProgressionSpec p;
  if (kind == "arithmetic") {
    p = CosetProgressionSpec::arithmetic(group, gens, lengths);
  } else if (kind == "generalized") {
    p = CosetProgressionSpec::generalized(group, gens, lengths);
  } else {
    throw InputError("progression: unknown kind '" + kind + "'");
  }
  if (j.contains("subgroup")) {
    p.subgroup = set_from_json(group, j.at("subgroup"));
    p.subgroup.insert(group->identity());
  }
  p.validate();
  return p;
}

Json progression_to_json(const CosetProgressionSpec& p) {
  Json lengths = Json::array();
  for (const Rational& l : p.progression.lengths) lengths.push_back(rational_to_json(l));
  return Json{{"kind", p.kind == ProgressionKind::kArithmetic ? "arithmetic" : "generalized"},
              {"generators", elements_to_json(p.progression.generators)},
              {"lengths", lengths},
              {"subgroup", set_to_json(p.subgroup)}};
}

BohrSpec bohr_from_json(const GroupPtr& group, const Json& j) {
  BohrSpec b;
  b.group = group;
  const Json& chars = require(j, "characters", "bohr");
  if (!chars.is_array()) throw InputError("bohr: characters must be an array");
  for (const Json& row : chars) {
    if (!row.is_array()) throw InputError("bohr: each character is an array of rationals");
    std::vector<Rational> r;
    for (const Json& x : row) r.push_back(rational_from_json(x));
    b.characters.push_back(std::move(r));
  }
  b.delta = rational_from_json(require(j, "delta", "bohr"));
  b.validate();
  return b;
}

Json bohr_to_json(const BohrSpec& b) {
  Json chars = Json::array();
  for (const auto& row : b.characters) {
    Json r = Json::array();
    for (const Rational& x : row) r.push_back(rational_to_json(x));
    chars.push_back(r);
  }
  return Json{{"characters", chars}, {"delta", rational_to_json(b.delta)}};
}

BipartiteGraphSpec graph_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("graph must be a JSON object");
  if (j.contains("half_graph")) return BipartiteGraphSpec::half_graph(to_uint(j.at("half_graph"), "half_graph"));
  if (j.contains("power_set")) return BipartiteGraphSpec::power_set(to_uint(j.at("power_set"), "power_set"));
  BipartiteGraphSpec g;
  g.left = to_uint(require(j, "left", "graph"), "left");
  g.right = to_uint(require(j, "right", "graph"), "right");
  for (const Json& e : require(j, "edges", "graph")) {
    if (!e.is_array() || e.size() != 2) throw InputError("graph: edges are [v, w] pairs");
    g.edges.emplace_back(to_uint(e[0], "edge"), to_uint(e[1], "edge"));
  }
  g.validate();
  return g;
}

FreimanMap map_from_json(const Json& j) {
  FreimanMap m;
  m.source = group_from_json(require(j, "source", "map"));
  m.target = group_from_json(require(j, "target", "map"));
  const Json& pairs = require(j, "pairs", "map");
  if (!pairs.is_array()) throw InputError("map: pairs must be an array");
  for (const Json& p : pairs) {
    if (!p.is_array() || p.size() != 2) throw InputError("map: pairs are [a, a'] arrays");
    m.pairs.emplace_back(element_from_json(*m.source, p[0]), element_from_json(*m.target, p[1]));
  }
  m.validate();
  return m;
}

Json map_to_json(const FreimanMap& m) {
  Json pairs = Json::array();
  for (const auto& [x, y] : m.pairs) pairs.push_back({x, y});
  return Json{{"source", group_to_json(*m.source)}, {"target", group_to_json(*m.target)}, {"pairs", pairs}};
}

Json report_to_json(const ConditionReport& r) {
  Json conds = Json::array();
  for (const ConditionResult& c : r.conditions) {
    conds.push_back(Json{{"name", c.name},
                         {"pass", c.pass},
                         {"measured", rational_to_json(c.measured)},
                         {"bound", rational_to_json(c.bound)},
                         {"strict", c.strict},
                         {"slack", rational_to_json(c.slack())},
                         {"detail", c.detail}});
  }
  return Json{{"all_pass", r.all_pass()}, {"size_ratio", rational_to_json(r.size_ratio)}, {"conditions", conds}};
}

Json certificate_to_json(const RegularityCertificate& c) {
  Json j{{"variant", to_string(c.variant)},
         {"group", group_to_json(c.a.group())},
         {"a", set_to_json(c.a)},
         {"cover", set_to_json(c.cover)},
         {"selector", set_to_json(c.selector)},
         {"error", set_to_json(c.error)},
         {"eps", rational_to_json(c.eps)},
         {"delta", rational_to_json(c.delta)},
         {"k", rational_to_json(c.k)},
         {"r", c.r},
         {"d", c.d},
         {"satisfied", c.satisfied},
         {"report", report_to_json(c.report)}};
  if (c.subgroup) j["subgroup"] = set_to_json(*c.subgroup);
  if (c.progression) j["progression"] = progression_to_json(*c.progression);
  return j;
}

RegularityCertificate certificate_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("certificate must be a JSON object");
  RegularityCertificate c;
  c.variant = parse_variant(require(j, "variant", "certificate").get<std::string>());
  const GroupPtr group = group_from_json(require(j, "group", "certificate"));
  c.a = set_from_json(group, require(j, "a", "certificate"));
  c.cover = set_from_json(group, require(j, "cover", "certificate"));
  c.selector = set_from_json(group, require(j, "selector", "certificate"));
  c.error = set_from_json(group, require(j, "error", "certificate"));
  if (j.contains("subgroup")) c.subgroup = set_from_json(group, j.at("subgroup"));
  if (j.contains("progression")) {
    const Json& p = j.at("progression");
    CosetProgressionSpec spec;
    spec.group = group;
    spec.kind = p.value("kind", "arithmetic") == "generalized" ? ProgressionKind::kGeneralized
                                                                : ProgressionKind::kArithmetic;
    spec.progression.generators = elements_from_json(*group, require(p, "generators", "progression"));
    for (const Json& x : require(p, "lengths", "progression")) spec.progression.lengths.push_back(rational_from_json(x));
    spec.subgroup = p.contains("subgroup") ? set_from_json(group, p.at("subgroup"))
                                           : GroupSet::singleton(group, group->identity());
    c.progression = std::move(spec);
  }
  c.eps = rational_from_json(require(j, "eps", "certificate"));
  c.delta = j.contains("delta") ? rational_from_json(j.at("delta")) : Rational(0);
  c.k = j.contains("k") ? rational_from_json(j.at("k")) : Rational(0);
  c.r = j.contains("r") ? to_uint(j.at("r"), "r") : 0;
  c.d = j.contains("d") ? to_uint(j.at("d"), "d") : 0;
  c.satisfied = j.value("satisfied", false);
  return c;
}

Json growth_to_json(const GrowthReport& r) {
  return Json{{"size", r.size},
              {"square_size", r.square_size},
              {"cube_size", r.cube_size},
              {"doubling", rational_to_json(r.doubling)},
              {"tripling", rational_to_json(r.tripling)},
              {"symmetric_sizes", r.symmetric_sizes},
              {"max_aaa_ratio", rational_to_json(r.max_aaa_ratio)}};
}

Json cover_to_json(const CoverResult& r) {
  return Json{{"value", r.value},
              {"exact", r.exact},
              {"volume_bound", r.volume_bound},
              {"translates", set_to_json(r.translates)}};
}

Json plunnecke_to_json(const PlunneckeReport& r) {
  Json rows = Json::array();
  for (const PlunneckeRow& row : r.rows) {
    rows.push_back(Json{{"n", row.n},
                        {"m", row.m},
                        {"size", row.size},
                        {"bound", rational_to_json(row.bound)},
                        {"violated", row.violated}});
  }
  return Json{{"abelian", r.abelian}, {"k", rational_to_json(r.k)}, {"rows", rows}, {"any_violation", r.any_violation}};
}

Json vc_to_json(const TranslateVc& r) {
  return Json{{"dimension", r.dimension},
              {"reached_cap", r.reached_cap},
              {"shattered", elements_to_json(r.shattered)},
              {"translates", elements_to_json(r.translates)}};
}

Json nip_to_json(const NipResult& r) {
  return Json{{"nip", r.nip}, {"points", elements_to_json(r.points)}, {"translates", elements_to_json(r.translates)}};
}

Json stability_to_json(const StabilityResult& r) {
  return Json{{"stable", r.stable}, {"a", elements_to_json(r.a)}, {"b", elements_to_json(r.b)}};
}

Json sandwich_to_json(const Sandwich& s) {
  return Json{{"e", set_to_json(s.e)},
              {"f", set_to_json(s.f)},
              {"sym2_size", s.sym2.size()},
              {"sym3_size", s.sym3.size()}};
}

Json normal_form_to_json(const NormalFormReport& r) {
  return Json{{"holds", r.holds()},
              {"commutators", to_string(r.commutators)},
              {"distinctness", to_string(r.distinctness)},
              {"size", to_string(r.size)},
              {"commutator_detail", r.commutator_detail},
              {"distinctness_detail", r.distinctness_detail},
              {"nominal", r.nominal.str()},
              {"quotient_size", r.quotient_size}};
}

Json bohr_search_to_json(const BohrSearch& s) {
  Json j{{"found", s.witness.has_value()}, {"candidates_tried", s.candidates_tried}, {"diagnostics", s.diagnostics}};
  if (s.witness) {
    j["rank"] = s.witness->rank;
    j["progression"] = progression_to_json(s.witness->progression);
    j["expanded"] = set_to_json(s.witness->expanded);
    j["inner_size"] = s.witness->inner.size();
  }
  return j;
}

Json bohr_cover_to_json(const BohrCover& c) {
  return Json{{"points", set_to_json(c.points)}, {"bound", rational_to_json(c.bound)}, {"within_bound", c.within_bound}};
}

Json model_to_json(const Model& m) {
  const ModelSizeReport& r = m.report;
  Json rep{{"k", rational_to_json(r.k)},
           {"r", r.r},
           {"ratio", rational_to_json(r.ratio)},
           {"within_bounds", r.within_bounds}};
  rep["general_bound"] = r.general_bound ? rational_to_json(*r.general_bound) : Json(nullptr);
  rep["prime_bound"] = r.prime_bound ? rational_to_json(*r.prime_bound) : Json(nullptr);
  return Json{{"model_group", group_to_json(*m.group)},
              {"model_order", m.group->order()},
              {"model_set", set_to_json(m.set)},
              {"base", m.base},
              {"map", map_to_json(m.map)},
              {"size_report", rep}};
}

Json freiman_check_to_json(const FreimanCheck& c) {
  return Json{{"iso", c.iso}, {"lhs", elements_to_json(c.lhs)}, {"rhs", elements_to_json(c.rhs)}};
}

Json cut_witness_to_json(const std::optional<CutWitness>& w) {
  if (!w) return Json{{"cuts_out", false}};
  return Json{{"cuts_out", true}, {"points", elements_to_json(w->points)}, {"translates", elements_to_json(w->translates)}};
}

Json parse_json_text(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON parse error: " +
                     e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

}  // namespace sdl
