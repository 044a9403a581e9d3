#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sdl {

// Dense element index in [0, order).
using Element = std::uint32_t;

// Product of cyclic groups Z_{m_0} x Z_{m_1} x ... with mixed-radix element
// encoding, least-significant modulus first.
struct AbelianSpec {
  std::vector<std::uint32_t> moduli;
};

struct CayleySpec {
  std::uint32_t order = 0;
  Element identity = 0;
  std::vector<std::vector<Element>> table;  // table[a][b] = a*b
  // Skips the O(n^3) associativity check; required above kCayleyValidationLimit.
  bool trusted = false;
};

using GroupSpec = std::variant<AbelianSpec, CayleySpec>;

inline constexpr std::size_t kCayleyValidationLimit = 512;
inline constexpr std::size_t kDefaultMaxOrder = 4096;

// Group-order cap; SDL_MAX_ORDER overrides the default.
std::size_t max_group_order();

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

class FiniteGroup {
 public:
  // Validates the description and precomputes inverses and the exponent.
  // Throws InputError, ValidationError or CapacityError.
  static GroupPtr build(const GroupSpec& spec);

  static GroupPtr cyclic(std::uint32_t n) { return build(AbelianSpec{{n}}); }
  static GroupPtr abelian(std::vector<std::uint32_t> moduli) { return build(AbelianSpec{std::move(moduli)}); }

  std::size_t order() const { return order_; }
  Element identity() const { return identity_; }
  // True for the mixed-radix variant.
  bool has_coordinates() const { return !moduli_.empty() || cayley_.empty(); }
  // Commutativity, for either variant.
  bool is_abelian() const { return abelian_; }
  bool is_elementary_abelian_2() const;
  const std::vector<std::uint32_t>& moduli() const { return moduli_; }
  std::uint64_t exponent() const { return exponent_; }

  Element mul(Element a, Element b) const {
    if (!cayley_.empty()) return cayley_[static_cast<std::size_t>(a) * order_ + b];
    if (moduli_.size() == 1) {
      Element s = a + b;
      return s >= order_ ? s - static_cast<Element>(order_) : s;
    }
    return mul_mixed(a, b);
  }
  Element inv(Element a) const { return inverse_[a]; }
  Element pow(Element a, std::int64_t n) const;
  std::uint32_t element_order(Element g) const;

  // Throws InputError when g is not an element.
  void check(Element g) const;

  std::vector<std::uint32_t> decode(Element g) const;
  Element encode(std::span<const std::int64_t> coords) const;

  // Structural equality: same variant and same operation.
  bool operator==(const FiniteGroup& other) const;
  std::string describe() const;
  GroupSpec spec() const;

 private:
  FiniteGroup() = default;
  Element mul_mixed(Element a, Element b) const;

  std::size_t order_ = 1;
  Element identity_ = 0;
  bool abelian_ = true;
  std::uint64_t exponent_ = 1;
  std::vector<std::uint32_t> moduli_;
  std::vector<std::uint32_t> weights_;
  std::vector<Element> cayley_;
  std::vector<Element> inverse_;
};

bool same_group(const GroupPtr& a, const GroupPtr& b);

}  // namespace sdl
