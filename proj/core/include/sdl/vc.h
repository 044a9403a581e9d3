#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "sdl/group_set.h"
#include "sdl/rational.h"

namespace sdl {

using Bits = boost::dynamic_bitset<std::uint64_t>;

// A finite set system on the ground set {0, ..., ground_size-1}.
struct SetSystem {
  std::size_t ground_size = 0;
  std::vector<Bits> members;

  SetSystem deduplicated() const;
  SetSystem complements() const;
  // S* = {S_x : x in ground} on the ground set of (deduplicated) members.
  SetSystem dual() const;
};

// {S1 ∩ S2 : S1 in a, S2 in b}, deduplicated.
SetSystem intersection_family(const SetSystem& a, const SetSystem& b);

struct VcResult {
  std::size_t dimension = 0;
  bool reached_cap = false;             // dimension is a lower bound equal to cap
  std::vector<std::size_t> shattered;   // points of a largest shattered set found
  std::vector<std::size_t> witnesses;   // witnesses[mask] = member whose trace is mask
};

// Exact VC dimension by shatter search. `anchor`, when set, restricts the
// search to shattered sets containing that point (valid for families
// invariant under a transitive symmetry). Stops once `cap` is reached.
VcResult vc_dimension(const SetSystem& system, std::size_t cap, std::optional<std::size_t> anchor = std::nullopt);

enum class Side { kLeft, kRight };

// {gA : g in G} (left) or {Ag : g in G} (right), traced on `ground`
// (the whole group when unset).
struct TranslateFamily {
  GroupSet base;
  Side side = Side::kLeft;
  std::optional<GroupSet> ground;

  GroupSet member(Element g) const;
  GroupSet ground_set() const;
  // Points are the ground elements in increasing order.
  SetSystem to_set_system() const;
};

struct TranslateVc {
  std::size_t dimension = 0;
  bool reached_cap = false;
  std::vector<Element> shattered;
  std::vector<Element> translates;  // translates[mask] = g whose member traces mask
};

inline constexpr std::size_t kMaxVcGround = 4096;

TranslateVc vc_dimension(const TranslateFamily& family, std::size_t cap = 64);

struct NipResult {
  bool nip = true;
  std::vector<Element> points;      // d shattered points when !nip
  std::vector<Element> translates;  // 2^d translating elements, indexed by trace mask
};

// True iff the left translates of A have VC dimension < d.
NipResult is_d_nip(const GroupSet& a, std::size_t d);

struct StabilityResult {
  bool stable = true;
  std::vector<Element> a;  // ladder a_1..a_d when !stable
  std::vector<Element> b;  // ladder b_1..b_d: a_i b_j in A iff i <= j
};

StabilityResult is_d_stable(const GroupSet& a, std::size_t d);

// Bipartite graph (V, W; E) with V = {0..left-1}, W = {0..right-1}.
struct BipartiteGraphSpec {
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  bool has_edge(std::size_t v, std::size_t w) const;
  void validate() const;
  static BipartiteGraphSpec half_graph(std::size_t d);   // ([d],[d]; <=)
  static BipartiteGraphSpec power_set(std::size_t d);    // ([d], P([d]); ∈)
};

struct OmissionResult {
  bool omits = true;
  std::vector<Element> left;   // x_v when a copy exists
  std::vector<Element> right;  // y_w; edge (v,w) iff y_w x_v in A
};

inline constexpr std::size_t kMaxOmissionSide = 3;
inline constexpr std::size_t kMaxOmissionOrder = 256;

// Induced-copy search in Γ_G(A) = (G, G; yx in A).
OmissionResult omits_bipartite(const GroupSet& a, const BipartiteGraphSpec& graph);
// |V| + ceil(log2 |W|).
std::size_t nip_bound_from_omission(const BipartiteGraphSpec& graph);

struct EpsApproximation {
  std::vector<Element> sample;  // with repetition
  std::size_t attempts = 0;
  bool used_fallback = false;
};

// Exhaustive check: |mu(S) - fraction of sample in S| <= eps for every member.
bool verify_eps_approximation(const TranslateFamily& family, const std::vector<Element>& sample, const Rational& eps);

// Randomized sample with verification, falling back to discrepancy halving
// from the whole ground set. Deterministic for a fixed seed.
EpsApproximation eps_approximation(const TranslateFamily& family, const Rational& eps, std::uint64_t seed);

struct HittingSet {
  GroupSet points;
  std::size_t fractional_lower_bound = 0;  // ceil(#members / max point degree)
};

// Greedy: the point hitting most remaining members, smallest index on ties.
HittingSet greedy_hitting_set(const std::vector<GroupSet>& members);

struct Sandwich {
  GroupSet e;  // A^{±2} ⊆ EA
  GroupSet f;  // A^{±2} ⊆ AF
  GroupSet sym2;
  GroupSet sym3;
};

// E, F ⊆ A^{±3} with A^{±2} ⊆ EA ∩ AF, verified before return.
Sandwich nip_sandwich(const GroupSet& a);

struct VcCalculusReport {
  std::size_t vc1 = 0;
  std::size_t vc2 = 0;
  std::size_t complement_vc = 0;
  std::size_t intersection_vc = 0;
  std::size_t dual_vc = 0;
  bool complement_ok = true;    // VC(complements of S1) == VC(S1)
  bool intersection_ok = true;  // VC(S1 ∩ S2) < 10 d, d = max(vc1, vc2, 1)
  bool dual_ok = true;          // VC(S1*) < 2^(vc1+1)
  bool ok() const { return complement_ok && intersection_ok && dual_ok; }
};

inline constexpr std::size_t kMaxCalculusGround = 64;

VcCalculusReport vc_calculus_check(const SetSystem& s1, const SetSystem& s2);

struct SideReport {
  std::size_t left_vc = 0;
  std::size_t right_vc = 0;
  bool ok = true;  // right_vc <= 2^(left_vc + 1)
};

// Right translates of a d-NIP set have VC dimension at most 2^d.
SideReport translate_side_check(const GroupSet& a);

}  // namespace sdl
