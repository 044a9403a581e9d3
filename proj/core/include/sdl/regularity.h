#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdl/freiman.h"
#include "sdl/group_set.h"
#include "sdl/progressions.h"
#include "sdl/rational.h"
#include "sdl/subgroup.h"
#include "sdl/vc.h"

namespace sdl {

// {g : |gX △ X| <= eps |A|} (left) or {g : |Xg △ X| <= eps |A|} (right).
struct StabilizerQuery {
  GroupSet measure;  // A
  GroupSet target;   // X
  Rational eps;
  Side side = Side::kLeft;
};

// Asserts symmetry, the identity, the subgroup property at eps = 0 and
// containment in XX^{-1} (X^{-1}X on the right) when eps < |X|/|A|.
GroupSet stabilizer(const StabilizerQuery& q);

// Stab_{A,0}(A) in an abelian group, checked equal on both sides.
Subgroup gamma_abelian(const GroupSet& a);

// Intersection of g S g^{-1} over g in <A>, normal in <A>.
Subgroup conjugation_core(const GroupSet& a, const Subgroup& s);

struct SubgroupExtraction {
  Subgroup subgroup;
  bool exact = false;  // maximum order among subgroups inside S
};

inline constexpr std::size_t kMaxSubgroupSearchNodes = 20000;

// Largest subgroup inside S by a bounded search over subgroups of S, falling
// back to a greedy chain when the budget runs out.
SubgroupExtraction max_subgroup_within(const GroupSet& s, std::size_t budget = kMaxSubgroupSearchNodes);

enum class CertificateVariant {
  kNilprogression,
  kSubgroupExponent,
  kStable,
  kAbelianProgression,
  kAbelianExponent,
};

const char* to_string(CertificateVariant v);
// Throws InputError on unknown names.
CertificateVariant parse_variant(const std::string& name);

struct ConditionResult {
  std::string name;
  bool pass = false;
  Rational measured;
  Rational bound;
  bool strict = true;  // measured < bound, otherwise measured <= bound
  std::string detail;

  Rational slack() const { return bound - measured; }
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;
  Rational size_ratio;  // |H| / |A| or |P| / |A|

  bool all_pass() const;
  const ConditionResult* find(const std::string& name) const;
};

struct RegularityCertificate {
  CertificateVariant variant = CertificateVariant::kSubgroupExponent;
  GroupSet a;
  std::optional<GroupSet> subgroup;                  // H
  std::optional<CosetProgressionSpec> progression;  // P
  GroupSet cover;     // C
  GroupSet selector;  // D
  GroupSet error;     // Z
  Rational eps;
  Rational delta;      // abelian-exponent only
  std::size_t d = 0;   // NIP parameter, informational
  Rational k;          // doubling (abelian) or tripling
  std::uint64_t r = 0; // exponent of G, abelian-exponent only
  bool satisfied = false;
  ConditionReport report;

  bool uses_subgroup() const;
  // H or expand(P).
  GroupSet structure() const;
};

// Exact re-evaluation of every condition of the certificate's variant.
ConditionReport verify_certificate(const RegularityCertificate& cert);

RegularityCertificate regularize_exponent(const GroupSet& a, const Rational& delta);

enum class SearchVariant { kSearch, kStable };

// Exhaustive over subgroups H ⊆ AA^{-1} ∩ A^{-1}A. Ranked by satisfied, then
// |Z|, then |C|; ties keep the earlier subgroup in enumeration order.
RegularityCertificate regularize_search(const GroupSet& a, const Rational& eps, SearchVariant variant,
                                        unsigned workers = 1);

}  // namespace sdl
