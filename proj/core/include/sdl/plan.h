#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sdl/io.h"

namespace sdl {

struct PlanCase {
  std::string id;
  GroupPtr group;
  GroupSet set;
  std::string operation;
  Json params = Json::object();
};

struct ExperimentPlan {
  std::vector<PlanCase> cases;
  std::string output;  // path prefix for .json, .csv and .timing.json
  unsigned workers = 1;
};

// Uniform subset of the given size (partial Fisher-Yates on mt19937_64).
GroupSet random_set(const GroupPtr& group, std::size_t size, std::uint64_t seed);

// Union of `cosets` distinct cosets of <gens>, then round(noise |A|) distinct
// random elements of G toggled.
GroupSet planted_set(const GroupPtr& group, const std::vector<Element>& gens, std::size_t cosets,
                     const Rational& noise, std::uint64_t seed);

// Resolves groups and set recipes. Errors name the origin and the case id.
ExperimentPlan parse_plan(const Json& j, const std::string& origin, const std::filesystem::path& base_dir);
ExperimentPlan load_plan(const std::string& path);

extern const std::vector<std::string> kPlanOperations;

enum class CaseStatus { kOk, kUnsatisfied, kInputError, kCapacityError, kInternalError };
const char* to_string(CaseStatus s);

struct CaseResult {
  std::string id;
  std::string operation;
  CaseStatus status = CaseStatus::kOk;
  std::size_t group_order = 0;
  std::size_t set_size = 0;
  Rational doubling;
  std::string metric;  // name of the headline statistic
  std::string value;   // its value, exact
  Json record;         // full per-case record, timing excluded
  double millis = 0;
};

struct Report {
  std::vector<CaseResult> cases;  // sorted by id

  // Some certificate or self-check failed.
  bool any_failure() const;
  Json to_json() const;
  std::string to_csv() const;
  Json timing_json() const;
};

// Runs one case; never throws for per-case errors.
CaseResult run_case(const PlanCase& c);
Report run_plan(const ExperimentPlan& plan);
// Writes <prefix>.json, <prefix>.csv and <prefix>.timing.json.
void write_report(const Report& report, const std::string& prefix);

}  // namespace sdl
