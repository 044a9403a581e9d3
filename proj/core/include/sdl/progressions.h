#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdl/group_set.h"
#include "sdl/rational.h"

namespace sdl {

// How P(u_1..u_r; L_1..L_r) is read. kArithmetic is {sum n_i u_i : |n_i| <= L_i}
// and needs an abelian group; kGeneralized is the set of words in which x_i and
// x_i^{-1} together occur at most L_i times.
enum class ProgressionKind { kArithmetic, kGeneralized };

struct ProgressionSpec {
  std::vector<Element> generators;
  std::vector<Rational> lengths;  // nonnegative

  std::size_t rank() const { return generators.size(); }
  ProgressionSpec scaled(const Rational& eps) const;
};

// P_0 H with H a finite subgroup normalized by P_0. Rank 0 with H = {1} is {1}.
struct CosetProgressionSpec {
  GroupPtr group;
  ProgressionKind kind = ProgressionKind::kArithmetic;
  ProgressionSpec progression;
  GroupSet subgroup;  // H; must contain the identity

  static CosetProgressionSpec arithmetic(GroupPtr group, std::vector<Element> gens, std::vector<Rational> lengths);
  static CosetProgressionSpec arithmetic(GroupPtr group, std::vector<Element> gens, std::vector<Rational> lengths,
                                         GroupSet subgroup);
  static CosetProgressionSpec generalized(GroupPtr group, std::vector<Element> gens, std::vector<Rational> lengths);

  std::size_t rank() const { return progression.rank(); }
  // Throws InputError: bad indices, negative lengths, H not a subgroup,
  // arithmetic kind on a nonabelian group, or H not normalized by some u_i.
  void validate() const;
};

inline constexpr std::size_t kMaxWordRank = 3;
inline constexpr std::size_t kMaxWordBudget = 12;

// P_0 alone. Generalized expansion enforces rank <= 3 and sum floor(L_i) <= 12
// (CapacityError).
GroupSet expand_progression(const GroupPtr& group, const ProgressionSpec& spec, ProgressionKind kind);

// P_0 H, checked to be symmetric.
GroupSet expand(const CosetProgressionSpec& spec);

// prod (2 floor(L_i) + 1).
BigInt nominal_size(const ProgressionSpec& spec);

// P_0 is proper: the map (n_1..n_r) -> sum n_i u_i is injective. Abelian only.
bool is_proper(const CosetProgressionSpec& spec);

inline constexpr std::size_t kDefaultStepCap = 6;

// Least s with c_{s+1}(u) ⊆ {1}, or nullopt when none exists up to cap.
std::optional<std::size_t> nilpotence_step(const GroupPtr& group, std::span<const Element> gens,
                                           std::size_t cap = kDefaultStepCap);

enum class Verdict { kPass, kFail, kUndefined };
const char* to_string(Verdict v);

struct NormalFormReport {
  Verdict commutators = Verdict::kPass;   // (i)
  Verdict distinctness = Verdict::kPass;  // (ii)
  Verdict size = Verdict::kPass;          // (iii)
  std::string commutator_detail;
  std::string distinctness_detail;
  BigInt nominal;                 // prod (2 floor(L_i) + 1)
  std::size_t quotient_size = 0;  // |P| / |H|
  // No condition fails; undefined (zero-length) commutator budgets do not count.
  bool holds() const {
    return commutators != Verdict::kFail && distinctness != Verdict::kFail && size != Verdict::kFail;
  }
};

// Conditions evaluated on cosets of H, i.e. for the image of P in <P>/H.
NormalFormReport check_c_normal_form(const CosetProgressionSpec& spec, unsigned c);

// P^(eps): lengths multiplied by eps, same generators and H.
CosetProgressionSpec scale(const CosetProgressionSpec& spec, const Rational& eps);

// tau: G -> (R/Z)^r given by characters[i][j] = value on the j-th coordinate
// generator. d is the max of the coordinate arclengths; B = {x : d(tau x, 0) < delta}.
struct BohrSpec {
  GroupPtr group;
  std::vector<std::vector<Rational>> characters;
  Rational delta;

  std::size_t rank() const { return characters.size(); }
  // Requires the coordinate (product of cyclic) variant, m_j * c_j integral,
  // and delta > 0.
  void validate() const;
  BohrSpec with_radius(const Rational& radius) const;
  Rational distance(Element x) const;
};

GroupSet expand(const BohrSpec& spec);

struct BohrProgression {
  CosetProgressionSpec progression;
  std::size_t rank = 0;  // s
  GroupSet expanded;     // P
  GroupSet inner;        // B(s^{-2s} delta)
};

struct BohrSearch {
  std::optional<BohrProgression> witness;
  std::size_t candidates_tried = 0;
  std::string diagnostics;
};

inline constexpr std::size_t kMaxBohrSearchRank = 2;

// Proper coset progression P of rank s <= r with B(s^{-2s} delta) ⊆ P ⊆ B(delta),
// by exhaustive search; the witness is re-verified before return.
BohrSearch bohr_to_proper_progression(const BohrSpec& spec);

struct BohrCover {
  GroupSet points;  // X ⊆ A with A ⊆ X + B
  Rational bound;   // (2/delta)^r
  bool within_bound = true;
};

BohrCover bohr_cover(const GroupSet& a, const BohrSpec& spec);

}  // namespace sdl
