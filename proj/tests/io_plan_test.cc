#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include "sdl/errors.h"
#include "sdl/io.h"
#include "sdl/plan.h"
#include "sdl/regularity.h"
#include "sdl/setarith.h"
#include "sdl/subgroup.h"

namespace sdl {
namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(Json, GroupForms) {
  EXPECT_EQ(group_from_json(Json::parse(R"({"cyclic": 12})"))->order(), 12u);
  EXPECT_EQ(group_from_json(Json::parse(R"({"abelian": [2, 3]})"))->moduli().size(), 2u);
  EXPECT_EQ(group_from_json(Json::parse(R"({"type": "abelian", "moduli": [4, 4]})"))->order(), 16u);
  EXPECT_FALSE(group_from_json(Json::parse(R"({"symmetric": 3})"))->is_abelian());
  EXPECT_EQ(group_from_json(Json::parse(R"({"dihedral": 5})"))->order(), 10u);
  const GroupPtr z3 = group_from_json(
      Json::parse(R"({"type": "cayley", "order": 3, "identity": 0, "table": [[0,1,2],[1,2,0],[2,0,1]]})"));
  EXPECT_EQ(z3->mul(2, 2), 1u);
  EXPECT_EQ(parse_group_arg("Z2^3")->order(), 8u);
  EXPECT_EQ(parse_group_arg("Z4xZ2")->order(), 8u);
  EXPECT_THROW(group_from_json(Json::parse(R"({"cyclic": 0})")), InputError);
  EXPECT_THROW(group_from_json(Json::parse(R"({"torus": 3})")), InputError);
  EXPECT_THROW(parse_group_arg("Q8"), InputError);

  const GroupPtr s4 = symmetric_group(4);
  EXPECT_EQ(group_from_json(group_to_json(*s4))->order(), 24u);
}

TEST(Json, SetForms) {
  const GroupPtr g = FiniteGroup::abelian({4, 2});
  const GroupSet s(g, {0, 3, 5});
  EXPECT_EQ(set_from_json(g, Json::parse("[0, 3, 5]")), s);
  EXPECT_EQ(set_from_json(g, Json::parse(R"({"elements": [[0,0],[3,0],[1,1]]})")), s);
  EXPECT_EQ(set_from_json(g, Json{{"bitset_hex", s.to_hex()}}), s);
  EXPECT_EQ(set_from_json(g, set_to_json(s)), s);
  EXPECT_EQ(parse_set_arg(g, "0,3,5"), s);
  EXPECT_THROW(set_from_json(g, Json::parse("[8]")), InputError);
  EXPECT_EQ(set_from_json(g, Json::parse("[[4,3]]")), GroupSet(g, {4}));
  EXPECT_THROW(set_from_json(g, Json::parse("[[0,1,1]]")), InputError);
}

TEST(Json, Rationals) {
  EXPECT_EQ(rational_from_json(Json("3/10")), Rational(3, 10));
  EXPECT_EQ(rational_from_json(Json(2)), Rational(2));
  EXPECT_EQ(rational_from_json(Json::parse(R"({"num": 6, "den": 4})")), Rational(3, 2));
  EXPECT_EQ(rational_from_json(rational_to_json(Rational(-7, 9))), Rational(-7, 9));
  EXPECT_THROW(rational_from_json(Json::parse(R"({"num": 1, "den": 0})")), InputError);
  EXPECT_THROW(rational_from_json(Json("x/2")), InputError);
}

TEST(Json, ProgressionForms) {
  const GroupPtr z12 = FiniteGroup::cyclic(12);
  const auto p = progression_from_json(z12, Json::parse(R"({"gap": {"gens": [3], "lengths": ["3/2"]}})"));
  EXPECT_EQ(expand(p), GroupSet(z12, {0, 3, 9}));
  const auto q = progression_from_json(z12, progression_to_json(p));
  EXPECT_EQ(expand(q), expand(p));
  const auto h = progression_from_json(
      z12, Json::parse(R"({"kind": "arithmetic", "generators": [1], "lengths": [1], "subgroup": [0, 6]})"));
  EXPECT_EQ(expand(h), GroupSet(z12, {0, 1, 5, 6, 7, 11}));
  EXPECT_THROW(progression_from_json(z12, Json::parse(R"({"kind": "odd", "generators": [], "lengths": []})")),
               InputError);
}

TEST(Json, ParseErrorsNameThePosition) {
  const std::string msg = error_of([] { parse_json_text("{\n  \"a\": [1, 2\n", "plan.json"); });
  EXPECT_NE(msg.find("plan.json:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("JSON parse error"), std::string::npos) << msg;
  EXPECT_THROW(read_json_file("/nonexistent/file.json"), InputError);
}

TEST(Json, CertificateRoundTrip) {
  const GroupPtr g = FiniteGroup::abelian({2, 2, 2, 2});
  const GroupSet a(g, {0, 1, 2, 3, 4, 5, 6, 7, 9, 10, 11});
  const RegularityCertificate c = regularize_exponent(a, Rational(1, 2));
  const RegularityCertificate back = certificate_from_json(Json::parse(certificate_to_json(c).dump()));
  EXPECT_EQ(back.a, c.a);
  EXPECT_EQ(back.error, c.error);
  ASSERT_TRUE(back.subgroup.has_value());
  EXPECT_EQ(*back.subgroup, *c.subgroup);
  EXPECT_EQ(back.eps, c.eps);
  EXPECT_EQ(verify_certificate(back).all_pass(), verify_certificate(c).all_pass());
  Json lhs = certificate_to_json(back), rhs = certificate_to_json(c);
  lhs.erase("report");
  rhs.erase("report");
  EXPECT_EQ(lhs, rhs);
}

TEST(Recipes, RandomAndPlanted) {
  const GroupPtr g = FiniteGroup::abelian({2, 2, 2, 2, 2, 2});
  EXPECT_EQ(random_set(g, 10, 1).size(), 10u);
  EXPECT_EQ(random_set(g, 10, 1), random_set(g, 10, 1));
  EXPECT_NE(random_set(g, 10, 1), random_set(g, 10, 2));
  EXPECT_THROW(random_set(g, 65, 1), InputError);

  const GroupSet clean = planted_set(g, {1, 2}, 3, Rational(0), 5);
  EXPECT_EQ(clean.size(), 12u);
  EXPECT_TRUE(generate_closure(GroupSet(g, {1, 2})).set.subset_of(product_set(clean, clean.inverse())));
  const GroupSet noisy = planted_set(g, {1, 2}, 3, Rational(1, 4), 5);
  EXPECT_EQ(clean.symmetric_difference_size(noisy), 3u);
  EXPECT_THROW(planted_set(g, {1, 2}, 17, Rational(0), 5), InputError);
  EXPECT_THROW(planted_set(g, {1, 2}, 1, Rational(2), 5), InputError);
}

TEST(Plan, ErrorsNameFileAndCase) {
  const Json plan = Json::parse(R"({"cases": [
      {"id": "ok", "group": "Z8", "set": [0, 1], "operation": "sumstats"},
      {"id": "broken", "group": "Z8", "set": [0, 9], "operation": "sumstats"}]})");
  const std::string msg = error_of([&] { parse_plan(plan, "p.json", "."); });
  EXPECT_NE(msg.find("p.json"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'broken'"), std::string::npos) << msg;

  const Json unknown = Json::parse(R"({"cases": [{"id": "x", "group": "Z8", "set": [0], "operation": "fly"}]})");
  EXPECT_NE(error_of([&] { parse_plan(unknown, "q.json", "."); }).find("unknown operation"), std::string::npos);
  const Json dup = Json::parse(R"({"cases": [{"id": "x", "group": "Z8", "set": [0], "operation": "sumstats"},
                                             {"id": "x", "group": "Z8", "set": [0], "operation": "sumstats"}]})");
  EXPECT_NE(error_of([&] { parse_plan(dup, "d.json", "."); }).find("duplicate"), std::string::npos);
  EXPECT_THROW(parse_plan(Json::parse("[]"), "e.json", "."), InputError);
}

TEST(Plan, RunIsDeterministicAndSorted) {
  const Json j = Json::parse(R"({"workers": 2, "cases": [
      {"id": "b-trivial", "group": "Z12", "set": [0, 4, 8], "operation": "sumstats"},
      {"id": "a-planted", "group": {"abelian": [2,2,2,2,2]},
       "set": {"planted": {"subgroup": [1, 2], "cosets": 2, "noise": "1/8", "seed": 3}},
       "operation": "regularize", "params": {"variant": "exp", "delta": "1/2"}},
      {"id": "c-random", "group": "Z16", "set": {"random": {"size": 5, "seed": 9}}, "operation": "nip",
       "params": {"d": 2}},
      {"id": "d-capacity", "group": "Z2^12", "set": [0, 1], "operation": "regularize",
       "params": {"variant": "search"}}]})");
  ExperimentPlan plan = parse_plan(j, "inline", ".");
  const Report first = run_plan(plan);
  plan.workers = 1;
  const Report second = run_plan(plan);
  EXPECT_EQ(first.to_json(), second.to_json());
  EXPECT_EQ(first.to_csv(), second.to_csv());
  ASSERT_EQ(first.cases.size(), 4u);
  EXPECT_EQ(first.cases[0].id, "a-planted");
  EXPECT_EQ(first.cases[1].id, "b-trivial");
  EXPECT_EQ(first.cases[1].doubling, Rational(1));
  EXPECT_EQ(first.cases[1].status, CaseStatus::kOk);
  EXPECT_EQ(first.cases[3].status, CaseStatus::kCapacityError);
  EXPECT_EQ(first.to_csv().substr(0, first.to_csv().find('\n')),
            "id,operation,status,group_order,set_size,doubling,metric,value");
}

TEST(Plan, WriteReportFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "sdl_io_plan_test";
  std::filesystem::remove_all(dir);
  const Json j = Json::parse(R"({"cases": [{"id": "t", "group": "Z6", "set": [0, 3], "operation": "coset"}]})");
  write_report(run_plan(parse_plan(j, "inline", ".")), (dir / "out" / "r").string());
  for (const char* ext : {".json", ".csv", ".timing.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / (std::string("r") + ext))) << ext;
  }
  const Json report = read_json_file((dir / "out" / "r.json").string());
  EXPECT_EQ(report.at("cases").at(0).at("outputs").at("coset"), true);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace sdl
