#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sdl/errors.h"
#include "sdl/freiman.h"
#include "sdl/io.h"
#include "sdl/plan.h"
#include "sdl/progressions.h"
#include "sdl/regularity.h"
#include "sdl/setarith.h"
#include "sdl/subgroup.h"
#include "sdl/vc.h"

namespace {

using namespace sdl;

constexpr int kExitOk = 0;
constexpr int kExitUnsatisfied = 1;
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;

// Shared --group / --set handling. A set file may carry its own "group".
struct Inputs {
  std::string group;
  std::string set;

  GroupPtr load_group() const {
    if (!group.empty()) return parse_group_arg(group);
    if (const auto j = set_file_json(); j && j->is_object() && j->contains("group")) {
      const Json& g = j->at("group");
      return g.is_string() ? parse_group_arg(g.get<std::string>()) : group_from_json(g);
    }
    throw InputError("--group is required");
  }

  GroupSet load_set(const GroupPtr& g, const std::string& text) const { return parse_set_arg(g, text); }
  GroupSet load_set(const GroupPtr& g) const {
    if (set.empty()) throw InputError("--set is required");
    return parse_set_arg(g, set);
  }

 private:
  std::optional<Json> set_file_json() const {
    if (set.empty() || !std::filesystem::exists(set)) return std::nullopt;
    return read_json_file(set);
  }
};

void add_inputs(CLI::App* cmd, Inputs& in, bool with_set = true) {
  cmd->add_option("-g,--group", in.group, "Group: Z12, Z2^4, F3^2, Z4xZ2, S3, D5, JSON or a file");
  if (with_set) cmd->add_option("-s,--set", in.set, "Set: 0,1,2, JSON array/object or a file");
}

Json load_json_arg(const std::string& text, const std::string& what) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return parse_json_text(text, what);
  return read_json_file(text);
}

struct Output {
  std::string path;

  void emit(const Json& j) const {
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path + ": cannot write file");
    out << text;
  }
};

std::vector<std::pair<unsigned, unsigned>> parse_pairs(const std::string& text, unsigned total) {
  std::vector<std::pair<unsigned, unsigned>> out;
  if (text.empty()) {
    for (unsigned n = 0; n <= total; ++n) {
      for (unsigned m = 0; n + m <= total; ++m) {
        if (n + m > 0) out.emplace_back(n, m);
      }
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    unsigned n = 0, m = 0;
    char comma = 0;
    std::stringstream is(item);
    if (!(is >> n >> comma >> m) || comma != ',') throw InputError("--pairs expects 'n,m;n,m;...', got '" + item + "'");
    out.emplace_back(n, m);
  }
  return out;
}

std::vector<std::vector<std::size_t>> parse_family(const std::string& text) {
  std::vector<std::vector<std::size_t>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    std::vector<std::size_t> s;
    std::stringstream is(item);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (tok.empty()) continue;
      try {
        s.push_back(std::stoul(tok));
      } catch (const std::exception&) {
        throw InputError("--family: bad index '" + tok + "'");
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

void print_report(const ConditionReport& r) {
  for (const ConditionResult& c : r.conditions) {
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << "  measured=" << to_string(c.measured)
              << " bound=" << to_string(c.bound) << (c.strict ? " (<)" : " (<=)") << " slack=" << to_string(c.slack());
    if (!c.detail.empty()) std::cerr << "  " << c.detail;
    std::cerr << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact finite-group set arithmetic, VC calculus and regularity certificates"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::function<int()> action;
  Inputs in;
  Output out;
  auto common = [&](CLI::App* cmd, bool with_set = true) {
    add_inputs(cmd, in, with_set);
    cmd->add_option("-o,--out", out.path, "Write the JSON result to this file");
  };

  // --- setarith
  unsigned n_max = 3;
  auto* sumstats = app.add_subcommand("sumstats", "Growth statistics of A");
  common(sumstats);
  sumstats->add_option("--n-max", n_max, "Largest symmetric power")->check(CLI::PositiveNumber);
  sumstats->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      out.emit(growth_to_json(growth_report(in.load_set(g), n_max)));
      return kExitOk;
    };
  });

  std::string by;
  std::size_t exact_limit = 8;
  auto* cover = app.add_subcommand("cover", "Cover X (--set) by left translates of A (--by)");
  common(cover);
  cover->add_option("--by", by, "Covering set A")->required();
  cover->add_option("--exact-limit", exact_limit, "Refine to the exact minimum when the greedy value is at most this");
  cover->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      out.emit(cover_to_json(covering_number(in.load_set(g), in.load_set(g, by), exact_limit)));
      return kExitOk;
    };
  });

  std::string y_text;
  auto* ruzsa = app.add_subcommand("ruzsa-cover", "Ruzsa cover: F ⊆ X with X ⊆ F Y Y^-1");
  common(ruzsa);
  ruzsa->add_option("-y,--y", y_text, "Set Y")->required();
  ruzsa->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      const GroupSet x = in.load_set(g), y = in.load_set(g, y_text);
      const GroupSet f = ruzsa_cover(x, y);
      out.emit(Json{{"cover", set_to_json(f)},
                    {"size", f.size()},
                    {"bound", product_set(x, y).size() / y.size()}});
      return kExitOk;
    };
  });

  std::string pairs_text;
  unsigned total = 3;
  auto* plunnecke = app.add_subcommand("plunnecke", "Check |nA - mA| against k^(n+m)|A|");
  common(plunnecke);
  plunnecke->add_option("--pairs", pairs_text, "Pairs 'n,m;n,m'; default all n+m <= --total");
  plunnecke->add_option("--total", total, "Largest n+m when --pairs is omitted");
  plunnecke->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      const PlunneckeReport r = plunnecke_check(in.load_set(g), parse_pairs(pairs_text, total));
      out.emit(plunnecke_to_json(r));
      return r.any_violation ? kExitUnsatisfied : kExitOk;
    };
  });

  // --- vc
  std::string side = "left";
  std::size_t cap = 64;
  std::size_t d = 2;
  auto side_of = [&] {
    if (side != "left" && side != "right") throw InputError("--side must be left or right");
    return side == "left" ? Side::kLeft : Side::kRight;
  };
  auto* vcdim = app.add_subcommand("vcdim", "VC dimension of the translates of A");
  common(vcdim);
  vcdim->add_option("--side", side, "left or right translates");
  vcdim->add_option("--cap", cap, "Stop once this dimension is reached");
  vcdim->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      out.emit(vc_to_json(vc_dimension(TranslateFamily{in.load_set(g), side_of(), std::nullopt}, cap)));
      return kExitOk;
    };
  });

  auto* nip = app.add_subcommand("nip", "Is A d-NIP (VC dimension of left translates < d)");
  common(nip);
  nip->add_option("-d,--d", d, "NIP parameter")->check(CLI::PositiveNumber);
  nip->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      out.emit(nip_to_json(is_d_nip(in.load_set(g), d)));
      return kExitOk;
    };
  });

  auto* stable = app.add_subcommand("stable", "Is A d-stable (no ladder of height d)");
  common(stable);
  stable->add_option("-d,--d", d, "Ladder height")->check(CLI::PositiveNumber);
  stable->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      out.emit(stability_to_json(is_d_stable(in.load_set(g), d)));
      return kExitOk;
    };
  });

  auto* sandwich = app.add_subcommand("sandwich", "E, F ⊆ A^{±3} with A^{±2} ⊆ EA ∩ AF");
  common(sandwich);
  sandwich->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      out.emit(sandwich_to_json(nip_sandwich(in.load_set(g))));
      return kExitOk;
    };
  });

  // --- progressions
  std::string spec_text;
  std::string scale_text;
  unsigned c_param = 1;
  auto* expand_cmd = app.add_subcommand("expand", "Expand a coset progression");
  common(expand_cmd, false);
  expand_cmd->add_option("--spec", spec_text, "Progression JSON or file")->required();
  expand_cmd->add_option("--scale", scale_text, "Expand P^(eps) instead");
  expand_cmd->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      CosetProgressionSpec p = progression_from_json(g, load_json_arg(spec_text, "--spec"));
      if (!scale_text.empty()) p = scale(p, parse_rational(scale_text));
      const GroupSet e = expand(p);
      out.emit(Json{{"progression", progression_to_json(p)},
                    {"elements", set_to_json(e)},
                    {"size", e.size()},
                    {"nominal_size", nominal_size(p.progression).str()}});
      return kExitOk;
    };
  });

  auto* proper = app.add_subcommand("proper", "Is P_0 proper");
  common(proper, false);
  proper->add_option("--spec", spec_text, "Progression JSON or file")->required();
  proper->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      const CosetProgressionSpec p = progression_from_json(g, load_json_arg(spec_text, "--spec"));
      out.emit(Json{{"proper", is_proper(p)},
                    {"size", expand_progression(g, p.progression, p.kind).size()},
                    {"nominal_size", nominal_size(p.progression).str()}});
      return kExitOk;
    };
  });

  auto* normalform = app.add_subcommand("normalform", "c-normal form conditions");
  common(normalform, false);
  normalform->add_option("--spec", spec_text, "Progression JSON or file")->required();
  normalform->add_option("-c,--c", c_param, "Normal-form constant")->check(CLI::PositiveNumber);
  normalform->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      const NormalFormReport r =
          check_c_normal_form(progression_from_json(g, load_json_arg(spec_text, "--spec")), c_param);
      out.emit(normal_form_to_json(r));
      return kExitOk;
    };
  });

  auto* bohr = app.add_subcommand("bohr", "Expand a Bohr set, find a proper progression, optionally cover --set");
  common(bohr);
  bohr->add_option("--spec", spec_text, "Bohr JSON or file")->required();
  bohr->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      const BohrSpec b = bohr_from_json(g, load_json_arg(spec_text, "--spec"));
      const GroupSet e = expand(b);
      Json j{{"bohr", bohr_to_json(b)}, {"elements", set_to_json(e)}, {"size", e.size()}};
      j["progression"] = bohr_search_to_json(bohr_to_proper_progression(b));
      if (!in.set.empty()) j["cover"] = bohr_cover_to_json(bohr_cover(in.load_set(g), b));
      out.emit(j);
      return kExitOk;
    };
  });

  // --- stab-regularity
  std::string target_text;
  std::string eps_text = "0";
  auto* stab = app.add_subcommand("stab", "eps-stabilizer of X (--target, default A) measured by A");
  common(stab);
  stab->add_option("--target", target_text, "Set X");
  stab->add_option("--eps", eps_text, "Tolerance as a rational");
  stab->add_option("--side", side, "left or right");
  stab->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      const GroupSet a = in.load_set(g);
      const GroupSet x = target_text.empty() ? a : in.load_set(g, target_text);
      const GroupSet s = stabilizer(StabilizerQuery{a, x, parse_rational(eps_text), side_of()});
      out.emit(Json{{"stabilizer", set_to_json(s)}, {"size", s.size()}, {"subgroup", is_subgroup(s)}});
      return kExitOk;
    };
  });

  std::string variant = "exp";
  std::string delta_text = "1/2";
  std::string reg_eps_text = "1/4";
  unsigned workers = 1;
  auto* regularize = app.add_subcommand("regularize", "Build and verify a regularity certificate");
  common(regularize);
  regularize->add_option("--variant", variant, "exp, search or stable")
      ->check(CLI::IsMember({"exp", "search", "stable"}));
  regularize->add_option("--delta", delta_text, "delta for the exp variant");
  regularize->add_option("--eps", reg_eps_text, "eps for the search variants");
  regularize->add_option("--workers", workers, "Worker threads for the search variants")->check(CLI::PositiveNumber);
  regularize->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      const GroupSet a = in.load_set(g);
      RegularityCertificate cert =
          variant == "exp"
              ? regularize_exponent(a, parse_rational(delta_text))
              : regularize_search(a, parse_rational(reg_eps_text),
                                  variant == "stable" ? SearchVariant::kStable : SearchVariant::kSearch, workers);
      out.emit(certificate_to_json(cert));
      const ConditionReport check = verify_certificate(cert);
      print_report(check);
      return check.all_pass() && cert.satisfied ? kExitOk : kExitUnsatisfied;
    };
  });

  std::string cert_path;
  auto* verify = app.add_subcommand("verify-cert", "Re-verify a certificate file");
  verify->add_option("path", cert_path, "Certificate JSON")->required();
  verify->add_option("-o,--out", out.path, "Write the report JSON to this file");
  verify->callback([&] {
    action = [&] {
      const RegularityCertificate cert = certificate_from_json(read_json_file(cert_path));
      const ConditionReport r = verify_certificate(cert);
      print_report(r);
      out.emit(report_to_json(r));
      return r.all_pass() ? kExitOk : kExitUnsatisfied;
    };
  });

  // --- freiman
  std::string map_text;
  unsigned s_order = 2, p_order = 1, q_order = 1;
  auto* freiman = app.add_subcommand("freiman", "Freiman isomorphism tools");
  freiman->require_subcommand(1);
  auto* fcheck = freiman->add_subcommand("check", "Is the map a Freiman s-isomorphism");
  fcheck->add_option("--map", map_text, "Map JSON or file")->required();
  fcheck->add_option("--s", s_order, "Order s")->check(CLI::PositiveNumber);
  fcheck->add_option("-o,--out", out.path, "Output file");
  fcheck->callback([&] {
    action = [&] {
      out.emit(freiman_check_to_json(is_freiman_s_iso(map_from_json(load_json_arg(map_text, "--map")), s_order)));
      return kExitOk;
    };
  });
  auto* finduced = freiman->add_subcommand("induced", "Induced map on pA - qA");
  finduced->add_option("--map", map_text, "Map JSON or file")->required();
  finduced->add_option("--s", s_order, "Freiman order of the map")->check(CLI::PositiveNumber);
  finduced->add_option("--p", p_order, "p");
  finduced->add_option("--q", q_order, "q");
  finduced->add_option("-o,--out", out.path, "Output file");
  finduced->callback([&] {
    action = [&] {
      const FreimanMap phi = map_from_json(load_json_arg(map_text, "--map"));
      try {
        const InducedMap m = induced_difference_map(phi, s_order, p_order, q_order);
        out.emit(Json{{"map", map_to_json(m.map)}, {"level", m.level}});
      } catch (const FreimanConflictError& e) {
        auto rep = [](const Representation& r) {
          return Json{{"plus", elements_to_json(r.plus)}, {"minus", elements_to_json(r.minus)}};
        };
        out.emit(Json{{"error", e.what()}, {"first", rep(e.first())}, {"second", rep(e.second())}});
        throw;
      }
      return kExitOk;
    };
  });
  auto* fpush = freiman->add_subcommand("pushforward", "Image of a progression under a 2-isomorphism");
  fpush->add_option("--map", map_text, "Map JSON or file")->required();
  fpush->add_option("--spec", spec_text, "Progression JSON or file in the source group")->required();
  fpush->add_option("-o,--out", out.path, "Output file");
  fpush->callback([&] {
    action = [&] {
      const FreimanMap phi = map_from_json(load_json_arg(map_text, "--map"));
      const CosetProgressionSpec p = progression_from_json(phi.source, load_json_arg(spec_text, "--spec"));
      try {
        const Pushforward r = pushforward_progression(phi, p);
        out.emit(Json{{"image", progression_to_json(r.image)},
                      {"source_proper", r.source_proper},
                      {"image_proper", r.image_proper}});
      } catch (const PushforwardError& e) {
        out.emit(Json{{"error", e.what()}, {"witness", e.witness()}});
        return kExitUnsatisfied;
      }
      return kExitOk;
    };
  });

  auto* model = app.add_subcommand("model", "Model A in <A - a_0> for bounded exponent");
  common(model);
  model->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      out.emit(model_to_json(model_bounded_exponent(in.load_set(g))));
      return kExitOk;
    };
  });

  std::string family_text;
  auto* cutsout = app.add_subcommand("cutsout", "Does A cut out the family on d points");
  common(cutsout);
  cutsout->add_option("-d,--d", d, "Number of points")->check(CLI::PositiveNumber);
  cutsout->add_option("--family", family_text, "Subsets of {0..d-1}: '0;1;0,1' ('' is the empty set)")->required();
  cutsout->callback([&] {
    action = [&] {
      const GroupPtr g = in.load_group();
      out.emit(cut_witness_to_json(cuts_out(in.load_set(g), d, parse_family(family_text))));
      return kExitOk;
    };
  });

  // --- plans
  std::string plan_path;
  std::string prefix;
  unsigned plan_workers = 0;
  auto* run = app.add_subcommand("run-plan", "Run an experiment plan and write JSON/CSV reports");
  run->add_option("path", plan_path, "Plan JSON")->required();
  run->add_option("--out", prefix, "Report prefix (overrides the plan's output)");
  run->add_option("--workers", plan_workers, "Worker threads (overrides the plan)");
  run->callback([&] {
    action = [&] {
      ExperimentPlan plan = load_plan(plan_path);
      if (!prefix.empty()) plan.output = prefix;
      if (plan_workers > 0) plan.workers = plan_workers;
      const Report report = run_plan(plan);
      if (plan.output.empty()) {
        std::cout << report.to_json().dump(2) << "\n";
      } else {
        write_report(report, plan.output);
      }
      bool capacity = false;
      for (const CaseResult& c : report.cases) {
        std::cerr << c.id << ": " << to_string(c.status) << "\n";
        capacity = capacity || c.status == CaseStatus::kCapacityError;
      }
      if (report.any_failure()) return kExitUnsatisfied;
      return capacity ? kExitCapacity : kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    return action ? action() : kExitInput;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InternalError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitUnsatisfied;
  }
}
