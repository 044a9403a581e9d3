#include "sdl/plan.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "sdl/errors.h"
#include "sdl/setarith.h"
#include "sdl/subgroup.h"

namespace sdl {

const std::vector<std::string> kPlanOperations = {"sumstats", "plunnecke", "vcdim", "nip",   "stable",
                                                  "sandwich", "coset",     "stab",  "model", "regularize"};

namespace {

std::uint64_t require_seed(const Json& j) {
  if (!j.contains("seed") || !j.at("seed").is_number_unsigned()) {
    throw InputError("random recipes need a nonnegative integer 'seed'");
  }
  return j.at("seed").get<std::uint64_t>();
}

std::size_t get_size(const Json& j, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_unsigned()) throw InputError(std::string("'") + key + "' must be a nonnegative integer");
  return j.at(key).get<std::size_t>();
}

GroupSet resolve_set(const GroupPtr& group, const Json& recipe) {
  if (!recipe.is_object()) return set_from_json(group, recipe);
  if (recipe.contains("explicit")) return set_from_json(group, recipe.at("explicit"));
  if (recipe.contains("random")) {
    const Json& r = recipe.at("random");
    if (!r.contains("size")) throw InputError("random recipe needs 'size'");
    return random_set(group, get_size(r, "size", 0), require_seed(r));
  }
  if (recipe.contains("planted")) {
    const Json& p = recipe.at("planted");
    if (!p.contains("subgroup")) throw InputError("planted recipe needs 'subgroup' generators");
    const GroupSet gens = set_from_json(group, p.at("subgroup"));
    const Rational noise = p.contains("noise") ? rational_from_json(p.at("noise")) : Rational(0);
    return planted_set(group, gens.elements(), get_size(p, "cosets", 1), noise, require_seed(p));
  }
  if (recipe.contains("elements")) return set_from_json(group, recipe);
  throw InputError("set recipe must be explicit, random or planted");
}

Rational doubling_of(const GroupSet& a) {
  if (a.empty()) return 0;
  return Rational(product_set(a, a).size(), a.size());
}

Json evaluate(const PlanCase& c, CaseResult& out) {
  const Json& p = c.params;
  const GroupSet& a = c.set;
  const std::string& op = c.operation;
  auto uint_param = [&](const char* key, unsigned fallback) { return static_cast<unsigned>(get_size(p, key, fallback)); };

  if (op == "sumstats") {
    const GrowthReport g = growth_report(a, uint_param("n_max", 3));
    out.metric = "doubling";
    out.value = to_string(g.doubling);
    return growth_to_json(g);
  }
  if (op == "plunnecke") {
    std::vector<std::pair<unsigned, unsigned>> pairs;
    if (p.contains("pairs")) {
      for (const Json& x : p.at("pairs")) pairs.emplace_back(x.at(0).get<unsigned>(), x.at(1).get<unsigned>());
    } else {
      for (unsigned n = 0; n <= 3; ++n) {
        for (unsigned m = 0; n + m <= 3; ++m) {
          if (n + m > 0) pairs.emplace_back(n, m);
        }
      }
    }
    const PlunneckeReport r = plunnecke_check(a, pairs);
    if (r.any_violation) out.status = CaseStatus::kUnsatisfied;
    out.metric = "any_violation";
    out.value = r.any_violation ? "true" : "false";
    return plunnecke_to_json(r);
  }
  if (op == "vcdim") {
    TranslateFamily f{a, p.value("side", "left") == "right" ? Side::kRight : Side::kLeft, std::nullopt};
    const TranslateVc r = vc_dimension(f, uint_param("cap", 64));
    out.metric = "vc_dimension";
    out.value = std::to_string(r.dimension);
    return vc_to_json(r);
  }
  if (op == "nip") {
    const NipResult r = is_d_nip(a, uint_param("d", 2));
    out.metric = "nip";
    out.value = r.nip ? "true" : "false";
    return nip_to_json(r);
  }
  if (op == "stable") {
    const StabilityResult r = is_d_stable(a, uint_param("d", 2));
    out.metric = "stable";
    out.value = r.stable ? "true" : "false";
    return stability_to_json(r);
  }
  if (op == "sandwich") {
    const Sandwich s = nip_sandwich(a);
    out.metric = "e_size";
    out.value = std::to_string(s.e.size());
    return sandwich_to_json(s);
  }
  if (op == "coset") {
    const auto w = is_coset(a);
    out.metric = "coset";
    out.value = w ? "true" : "false";
    Json j{{"coset", w.has_value()}};
    if (w) {
      j["representative"] = w->representative;
      j["subgroup"] = set_to_json(w->subgroup.set);
    }
    return j;
  }
  if (op == "stab") {
    StabilizerQuery q{a, a, p.contains("eps") ? rational_from_json(p.at("eps")) : Rational(0),
                      p.value("side", "left") == "right" ? Side::kRight : Side::kLeft};
    const GroupSet s = stabilizer(q);
    out.metric = "stabilizer_size";
    out.value = std::to_string(s.size());
    return Json{{"stabilizer", set_to_json(s)}, {"size", s.size()}};
  }
  if (op == "model") {
    const Model m = model_bounded_exponent(a);
    out.metric = "ratio";
    out.value = to_string(m.report.ratio);
    return model_to_json(m);
  }
  if (op == "regularize") {
    const std::string variant = p.value("variant", "exp");
    RegularityCertificate cert;
    if (variant == "exp") {
      cert = regularize_exponent(a, p.contains("delta") ? rational_from_json(p.at("delta")) : Rational(1, 2));
    } else if (variant == "search" || variant == "stable") {
      const Rational eps = p.contains("eps") ? rational_from_json(p.at("eps")) : Rational(1, 4);
      cert = regularize_search(a, eps, variant == "stable" ? SearchVariant::kStable : SearchVariant::kSearch);
    } else {
      throw InputError("unknown regularize variant '" + variant + "'");
    }
    // The verdict comes from an independent re-verification.
    const bool ok = verify_certificate(cert).all_pass();
    if (!ok || !cert.satisfied) out.status = CaseStatus::kUnsatisfied;
    out.metric = "satisfied";
    out.value = ok && cert.satisfied ? "true" : "false";
    return certificate_to_json(cert);
  }
  throw InputError("unknown operation '" + op + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

GroupSet random_set(const GroupPtr& group, std::size_t size, std::uint64_t seed) {
  const std::size_t n = group->order();
  if (size > n) throw InputError("random set size " + std::to_string(size) + " exceeds the group order");
  std::mt19937_64 rng(seed);
  std::vector<Element> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<Element>(i);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(pool[i], pool[j]);
  }
  return GroupSet(group, std::span<const Element>(pool.data(), size));
}

GroupSet planted_set(const GroupPtr& group, const std::vector<Element>& gens, std::size_t cosets,
                     const Rational& noise, std::uint64_t seed) {
  const FiniteGroup& G = *group;
  const GroupSet h = generate_closure(group, gens).set;
  const std::size_t available = G.order() / h.size();
  if (cosets < 1 || cosets > available) {
    throw InputError("planted set: cosets must lie in [1, " + std::to_string(available) + "]");
  }
  if (noise < 0 || noise > 1) throw InputError("planted set: noise must lie in [0,1]");
  std::mt19937_64 rng(seed);
  GroupSet a(group);
  std::size_t used = 0;
  while (used < cosets) {
    const auto g = static_cast<Element>(rng() % G.order());
    if (a.contains(g)) continue;
    a |= h.left_translate(g);
    ++used;
  }
  const auto flips = static_cast<std::size_t>(floor(noise * a.size() + Rational(1, 2)));
  std::set<Element> chosen;
  while (chosen.size() < flips) chosen.insert(static_cast<Element>(rng() % G.order()));
  for (Element x : chosen) {
    if (a.contains(x)) a.erase(x);
    else a.insert(x);
  }
  return a;
}

ExperimentPlan parse_plan(const Json& j, const std::string& origin, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("cases") || !j.at("cases").is_array()) {
    throw InputError(origin + ": plan must be an object with a 'cases' array");
  }
  ExperimentPlan plan;
  plan.output = j.value("output", "");
  if (!plan.output.empty() && std::filesystem::path(plan.output).is_relative()) {
    plan.output = (base_dir / plan.output).string();
  }
  plan.workers = static_cast<unsigned>(j.value("workers", 1));
  std::set<std::string> ids;
  std::size_t index = 0;
  for (const Json& c : j.at("cases")) {
    const std::string id = c.is_object() && c.contains("id") ? c.at("id").get<std::string>()
                                                             : "case" + std::to_string(index);
    ++index;
    try {
      if (!ids.insert(id).second) throw InputError("duplicate case id");
      PlanCase pc;
      pc.id = id;
      if (c.contains("group_file")) {
        std::filesystem::path f = c.at("group_file").get<std::string>();
        if (f.is_relative()) f = base_dir / f;
        pc.group = group_from_json(read_json_file(f.string()));
      } else if (c.contains("group")) {
        const Json& g = c.at("group");
        pc.group = g.is_string() ? parse_group_arg(g.get<std::string>()) : group_from_json(g);
      } else {
        throw InputError("missing 'group' or 'group_file'");
      }
      if (!c.contains("set")) throw InputError("missing 'set'");
      pc.set = resolve_set(pc.group, c.at("set"));
      pc.operation = c.value("operation", "");
      if (std::find(kPlanOperations.begin(), kPlanOperations.end(), pc.operation) == kPlanOperations.end()) {
        throw InputError("unknown operation '" + pc.operation + "'");
      }
      if (c.contains("params")) pc.params = c.at("params");
      plan.cases.push_back(std::move(pc));
    } catch (const Json::exception& e) {
      throw InputError(origin + ": case '" + id + "': " + e.what());
    } catch (const InputError& e) {
      throw InputError(origin + ": case '" + id + "': " + e.what());
    }
  }
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  const Json j = read_json_file(path);
  return parse_plan(j, path, std::filesystem::path(path).parent_path());
}

const char* to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::kOk:
      return "ok";
    case CaseStatus::kUnsatisfied:
      return "unsatisfied";
    case CaseStatus::kInputError:
      return "input_error";
    case CaseStatus::kCapacityError:
      return "capacity_error";
    case CaseStatus::kInternalError:
      return "internal_error";
  }
  return "?";
}

CaseResult run_case(const PlanCase& c) {
  CaseResult out;
  out.id = c.id;
  out.operation = c.operation;
  out.group_order = c.group->order();
  out.set_size = c.set.size();
  out.doubling = doubling_of(c.set);
  Json record{{"id", c.id},
              {"operation", c.operation},
              {"params", c.params},
              {"group", c.group->describe()},
              {"group_order", out.group_order},
              {"set_hash", std::to_string(c.set.hash())},
              {"set_size", out.set_size},
              {"doubling", rational_to_json(out.doubling)}};
  if (c.set.size() <= 64) record["set"] = set_to_json(c.set);
  const auto start = std::chrono::steady_clock::now();
  try {
    record["outputs"] = evaluate(c, out);
  } catch (const CapacityError& e) {
    out.status = CaseStatus::kCapacityError;
    record["error"] = e.what();
  } catch (const InputError& e) {
    out.status = CaseStatus::kInputError;
    record["error"] = e.what();
  } catch (const Json::exception& e) {
    out.status = CaseStatus::kInputError;
    record["error"] = e.what();
  } catch (const InternalError& e) {
    out.status = CaseStatus::kInternalError;
    record["error"] = e.what();
  }
  out.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  record["status"] = to_string(out.status);
  out.record = std::move(record);
  return out;
}

Report run_plan(const ExperimentPlan& plan) {
  Report report;
  report.cases.resize(plan.cases.size());
  const unsigned n = std::max(1u, std::min<unsigned>(plan.workers, static_cast<unsigned>(plan.cases.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < plan.cases.size(); i = next++) report.cases[i] = run_case(plan.cases[i]);
  };
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  std::sort(report.cases.begin(), report.cases.end(),
            [](const CaseResult& x, const CaseResult& y) { return x.id < y.id; });
  return report;
}

bool Report::any_failure() const {
  return std::any_of(cases.begin(), cases.end(), [](const CaseResult& c) {
    return c.status == CaseStatus::kUnsatisfied || c.status == CaseStatus::kInternalError;
  });
}

Json Report::to_json() const {
  Json list = Json::array();
  std::map<std::string, std::size_t> counts;
  for (const CaseResult& c : cases) {
    list.push_back(c.record);
    ++counts[to_string(c.status)];
  }
  Json summary{{"total", cases.size()}, {"any_failure", any_failure()}};
  for (auto s : {CaseStatus::kOk, CaseStatus::kUnsatisfied, CaseStatus::kInputError, CaseStatus::kCapacityError,
                 CaseStatus::kInternalError}) {
    summary[to_string(s)] = counts[to_string(s)];
  }
  return Json{{"cases", list}, {"summary", summary}};
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "id,operation,status,group_order,set_size,doubling,metric,value\n";
  for (const CaseResult& c : cases) {
    os << csv_field(c.id) << ',' << c.operation << ',' << to_string(c.status) << ',' << c.group_order << ','
       << c.set_size << ',' << to_string(c.doubling) << ',' << c.metric << ',' << csv_field(c.value) << '\n';
  }
  return os.str();
}

Json Report::timing_json() const {
  Json j = Json::object();
  for (const CaseResult& c : cases) j[c.id] = c.millis;
  return j;
}

void write_report(const Report& report, const std::string& prefix) {
  const std::filesystem::path base(prefix);
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path + ": cannot write file");
    out << text;
  };
  write(prefix + ".json", report.to_json().dump(2) + "\n");
  write(prefix + ".csv", report.to_csv());
  write(prefix + ".timing.json", report.timing_json().dump(2) + "\n");
}

}  // namespace sdl
