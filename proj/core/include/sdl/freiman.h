#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdl/errors.h"
#include "sdl/group_set.h"
#include "sdl/progressions.h"
#include "sdl/rational.h"

namespace sdl {

// Explicit bijection A -> A' between subsets of two abelian groups.
struct FreimanMap {
  GroupPtr source;
  GroupPtr target;
  std::vector<std::pair<Element, Element>> pairs;

  GroupSet domain() const;
  GroupSet image() const;
  // Throws InputError: nonabelian side, bad element, or not a bijection.
  void validate() const;
  std::optional<Element> apply(Element x) const;
};

struct FreimanCheck {
  bool iso = true;
  // On failure, two s-multisets of A whose sums agree on exactly one side.
  std::vector<Element> lhs;
  std::vector<Element> rhs;
};

inline constexpr std::size_t kMaxFreimanTuples = 4'000'000;

// Equal-sum s-multisets correspond exactly under phi. CapacityError when the
// number of s-multisets exceeds kMaxFreimanTuples.
FreimanCheck is_freiman_s_iso(const FreimanMap& phi, unsigned s);

// a_1 + ... + a_p - x_1 - ... - x_q.
struct Representation {
  std::vector<Element> plus;
  std::vector<Element> minus;
};

// Two representations of one element of pA - qA with different images (or
// of two elements with one image).
class FreimanConflictError : public InputError {
 public:
  FreimanConflictError(const std::string& what, Representation first, Representation second)
      : InputError(what), first_(std::move(first)), second_(std::move(second)) {}
  const Representation& first() const { return first_; }
  const Representation& second() const { return second_; }

 private:
  Representation first_;
  Representation second_;
};

struct InducedMap {
  FreimanMap map;
  unsigned level = 0;  // floor(s / (p + q))
};

// psi(a_1+..+a_p-x_1-..-x_q) = phi(a_1)+..+phi(a_p)-phi(x_1)-..-phi(x_q) on
// pA - qA. `s` is the Freiman order claimed for phi and is checked first.
InducedMap induced_difference_map(const FreimanMap& phi, unsigned s, unsigned p, unsigned q);

bool is_prime(std::uint64_t n);

// c_r(k): (r-1) k^12 for prime r, k^2 r^{ceil(2k^2 - 2)} otherwise.
// CapacityError when the value would be astronomically large.
Rational exponent_constant(std::uint64_t r, const Rational& k);

struct ModelSizeReport {
  Rational k;  // |A+A| / |A|
  std::uint64_t r = 1;
  Rational ratio;                       // |G'| / |A|
  std::optional<Rational> general_bound;  // k^2 r^{ceil(2k^2-2)}, unset when huge
  std::optional<Rational> prime_bound;  // (r-1) k^12 when r is prime
  bool within_bounds = true;
};

struct Model {
  GroupPtr group;   // G', a product of cyclic groups in invariant-factor form
  GroupSet set;     // A' = A - a_0, re-encoded
  FreimanMap map;   // A -> A'
  Element base = 0; // a_0 = min A
  std::vector<Element> embedding;  // G' -> <A - a_0> ⊆ G
  ModelSizeReport report;

  // Element of G corresponding to x under the embedding, shifted back by a_0.
  Element pull_back(Element x) const;
  GroupSet pull_back(const GroupSet& x) const;
  // Subgroup images are not shifted.
  GroupSet embed(const GroupSet& x) const;
};

Model model_bounded_exponent(const GroupSet& a);

struct CutWitness {
  std::vector<Element> points;      // x_1..x_d
  std::vector<Element> translates;  // g_S in family order
};

inline constexpr std::size_t kMaxCutsOutD = 3;
inline constexpr std::size_t kMaxCutsOutOrder = 256;

// Points x_i and translates g_S with x_i in g_S A iff i in S, for every S in
// the family (subsets of {0..d-1}). x_1 is the identity without loss.
std::optional<CutWitness> cuts_out(const GroupSet& a, std::size_t d, const std::vector<std::vector<std::size_t>>& family);

// phi(expand(P)) differs from expand(image); `witness` lies in one side only.
class PushforwardError : public InputError {
 public:
  PushforwardError(const std::string& what, Element witness) : InputError(what), witness_(witness) {}
  Element witness() const { return witness_; }

 private:
  Element witness_;
};

struct Pushforward {
  CosetProgressionSpec image;
  bool source_proper = false;
  bool image_proper = false;
};

Pushforward pushforward_progression(const FreimanMap& phi, const CosetProgressionSpec& p);

}  // namespace sdl
