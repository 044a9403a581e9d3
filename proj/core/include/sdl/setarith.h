#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sdl/group_set.h"
#include "sdl/rational.h"

namespace sdl {

// AB = {ab : a in A, b in B}. Throws InputError on a group mismatch.
GroupSet product_set(const GroupSet& a, const GroupSet& b);

// A^n, with A^0 = {1}.
GroupSet power_set(const GroupSet& a, unsigned n);

// A^{±n} = (A ∪ A^{-1})^n ∪ {1}.
GroupSet symmetric_power(const GroupSet& a, unsigned n);

// nA - mA in additive notation; A^n (A^{-1})^m in general.
GroupSet signed_sumset(const GroupSet& a, unsigned n, unsigned m);

struct GrowthReport {
  std::size_t size = 0;
  std::size_t square_size = 0;  // |AA|
  std::size_t cube_size = 0;    // |A^3|
  Rational doubling;
  Rational tripling;
  // symmetric_sizes[i] = |A^{±(i+1)}|.
  std::vector<std::size_t> symmetric_sizes;
  // max over a in A of |AaA| / |A|; informational, never used in bounds.
  Rational max_aaa_ratio;
};

// Throws InputError for empty A or n_max < 1.
GrowthReport growth_report(const GroupSet& a, unsigned n_max);

struct CoverResult {
  std::size_t value = 0;
  GroupSet translates;  // F with X ⊆ FA
  bool exact = false;   // value is the minimum
  std::size_t volume_bound = 0;  // ceil(|X|/|A|)
};

// Covering of X by left translates of A: greedy, refined to the exact
// minimum by branch and bound when the greedy value is at most exact_limit.
CoverResult covering_number(const GroupSet& x, const GroupSet& a, std::size_t exact_limit = 0);

// Maximal F ⊆ X with pairwise disjoint translates fY. Guarantees
// |F| <= floor(|XY|/|Y|) and X ⊆ F Y Y^{-1}; both are re-checked and an
// InternalError is thrown if either fails.
GroupSet ruzsa_cover(const GroupSet& x, const GroupSet& y);

struct PlunneckeRow {
  unsigned n = 0;
  unsigned m = 0;
  std::size_t size = 0;  // |nA - mA| or |A^n A^{-m}|
  Rational bound;        // k^(n+m)|A| (abelian) or k^(2(n+m))|A|
  bool violated = false;
};

struct PlunneckeReport {
  bool abelian = true;
  Rational k;  // doubling (abelian) or tripling
  std::vector<PlunneckeRow> rows;
  bool any_violation = false;
};

PlunneckeReport plunnecke_check(const GroupSet& a, const std::vector<std::pair<unsigned, unsigned>>& pairs);

}  // namespace sdl
