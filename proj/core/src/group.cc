#include "sdl/group.h"

#include <cstdlib>
#include <numeric>
#include <sstream>

#include "sdl/errors.h"

namespace sdl {

std::size_t max_group_order() {
  if (const char* env = std::getenv("SDL_MAX_ORDER")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxOrder;
}

namespace {

std::string triple(Element a, Element b, Element c) {
  std::ostringstream os;
  os << "(" << a << "," << b << "," << c << ")";
  return os.str();
}

}  // namespace

GroupPtr FiniteGroup::build(const GroupSpec& spec) {
  std::shared_ptr<FiniteGroup> g(new FiniteGroup());
  const std::size_t cap = max_group_order();

  if (const auto* ab = std::get_if<AbelianSpec>(&spec)) {
    std::size_t n = 1;
    for (std::uint32_t m : ab->moduli) {
      if (m < 2) throw InputError("modulus " + std::to_string(m) + " < 2");
      n *= m;
      if (n > cap) {
        throw CapacityError("group order exceeds cap " + std::to_string(cap) + " (set SDL_MAX_ORDER)");
      }
    }
    g->order_ = n;
    g->moduli_ = ab->moduli;
    g->weights_.resize(ab->moduli.size());
    std::uint32_t w = 1;
    for (std::size_t i = 0; i < ab->moduli.size(); ++i) {
      g->weights_[i] = w;
      w *= ab->moduli[i];
    }
    g->identity_ = 0;
    g->abelian_ = true;
    g->inverse_.resize(n);
    for (Element x = 0; x < n; ++x) {
      std::vector<std::uint32_t> d = g->decode(x);
      Element y = 0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        y += ((ab->moduli[i] - d[i]) % ab->moduli[i]) * g->weights_[i];
      }
      g->inverse_[x] = y;
    }
    std::uint64_t e = 1;
    for (std::uint32_t m : ab->moduli) e = std::lcm(e, static_cast<std::uint64_t>(m));
    g->exponent_ = e;
    return g;
  }

  const auto& cy = std::get<CayleySpec>(spec);
  const std::size_t n = cy.order;
  if (n < 1) throw InputError("Cayley table order must be >= 1");
  if (n > cap) throw CapacityError("group order exceeds cap " + std::to_string(cap) + " (set SDL_MAX_ORDER)");
  if (cy.table.size() != n) throw InputError("Cayley table has " + std::to_string(cy.table.size()) + " rows, expected " + std::to_string(n));
  if (cy.identity >= n) throw InputError("identity index out of range");
  g->order_ = n;
  g->identity_ = cy.identity;
  g->cayley_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    if (cy.table[a].size() != n) throw InputError("Cayley table row " + std::to_string(a) + " has wrong length");
    for (std::size_t b = 0; b < n; ++b) {
      Element v = cy.table[a][b];
      if (v >= n) throw ValidationError("table entry out of range at (" + std::to_string(a) + "," + std::to_string(b) + ")");
      g->cayley_[a * n + b] = v;
    }
  }
  const Element e = cy.identity;
  for (Element a = 0; a < n; ++a) {
    if (g->mul(e, a) != a || g->mul(a, e) != a) {
      throw ValidationError("identity " + std::to_string(e) + " fails on element " + std::to_string(a));
    }
  }
  // Latin square: each row and column is a permutation.
  std::vector<std::uint32_t> seen(n, 0);
  std::uint32_t stamp = 0;
  for (Element a = 0; a < n; ++a) {
    ++stamp;
    for (Element b = 0; b < n; ++b) {
      Element v = g->mul(a, b);
      if (seen[v] == stamp) throw ValidationError("row " + std::to_string(a) + " is not a permutation");
      seen[v] = stamp;
    }
  }
  std::fill(seen.begin(), seen.end(), 0);
  stamp = 0;
  for (Element b = 0; b < n; ++b) {
    ++stamp;
    for (Element a = 0; a < n; ++a) {
      Element v = g->mul(a, b);
      if (seen[v] == stamp) throw ValidationError("column " + std::to_string(b) + " is not a permutation");
      seen[v] = stamp;
    }
  }
  if (n <= kCayleyValidationLimit) {
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        const Element ab = g->mul(a, b);
        for (Element c = 0; c < n; ++c) {
          if (g->mul(ab, c) != g->mul(a, g->mul(b, c))) {
            throw ValidationError("non-associative triple " + triple(a, b, c));
          }
        }
      }
    }
  } else if (!cy.trusted) {
    throw CapacityError("Cayley tables above order " + std::to_string(kCayleyValidationLimit) +
                        " are not validated; set trusted to accept");
  }
  g->inverse_.resize(n);
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      if (g->mul(a, b) == e) {
        if (g->mul(b, a) != e) throw ValidationError("element " + std::to_string(a) + " has no two-sided inverse");
        g->inverse_[a] = b;
        break;
      }
    }
  }
  g->abelian_ = true;
  for (Element a = 0; a < n && g->abelian_; ++a) {
    for (Element b = a + 1; b < n; ++b) {
      if (g->mul(a, b) != g->mul(b, a)) {
        g->abelian_ = false;
        break;
      }
    }
  }
  std::uint64_t ex = 1;
  for (Element a = 0; a < n; ++a) ex = std::lcm(ex, static_cast<std::uint64_t>(g->element_order(a)));
  g->exponent_ = ex;
  return g;
}

Element FiniteGroup::mul_mixed(Element a, Element b) const {
  Element out = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const std::uint32_t m = moduli_[i];
    const std::uint32_t da = (a / weights_[i]) % m;
    const std::uint32_t db = (b / weights_[i]) % m;
    std::uint32_t s = da + db;
    if (s >= m) s -= m;
    out += s * weights_[i];
  }
  return out;
}

bool FiniteGroup::is_elementary_abelian_2() const {
  if (cayley_.empty()) {
    for (std::uint32_t m : moduli_) {
      if (m != 2) return false;
    }
    return true;
  }
  return false;
}

Element FiniteGroup::pow(Element a, std::int64_t n) const {
  Element base = a;
  if (n < 0) {
    base = inv(a);
    n = -n;
  }
  Element result = identity_;
  while (n > 0) {
    if (n & 1) result = mul(result, base);
    base = mul(base, base);
    n >>= 1;
  }
  return result;
}

std::uint32_t FiniteGroup::element_order(Element g) const {
  check(g);
  std::uint32_t k = 1;
  Element x = g;
  while (x != identity_) {
    x = mul(x, g);
    ++k;
  }
  return k;
}

void FiniteGroup::check(Element g) const {
  if (g >= order_) {
    throw InputError("element index " + std::to_string(g) + " out of range for group of order " + std::to_string(order_));
  }
}

std::vector<std::uint32_t> FiniteGroup::decode(Element g) const {
  std::vector<std::uint32_t> d(moduli_.size());
  for (std::size_t i = 0; i < moduli_.size(); ++i) d[i] = (g / weights_[i]) % moduli_[i];
  return d;
}

Element FiniteGroup::encode(std::span<const std::int64_t> coords) const {
  if (coords.size() != moduli_.size()) throw InputError("coordinate count does not match group rank");
  Element out = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const std::int64_t m = moduli_[i];
    std::int64_t c = coords[i] % m;
    if (c < 0) c += m;
    out += static_cast<Element>(c) * weights_[i];
  }
  return out;
}

bool FiniteGroup::operator==(const FiniteGroup& other) const {
  return order_ == other.order_ && identity_ == other.identity_ && moduli_ == other.moduli_ &&
         cayley_ == other.cayley_;
}

std::string FiniteGroup::describe() const {
  std::ostringstream os;
  if (cayley_.empty()) {
    os << "abelian[";
    for (std::size_t i = 0; i < moduli_.size(); ++i) os << (i ? "," : "") << moduli_[i];
    os << "]";
  } else {
    os << "cayley(order=" << order_ << ")";
  }
  return os.str();
}

GroupSpec FiniteGroup::spec() const {
  if (cayley_.empty()) return AbelianSpec{moduli_};
  CayleySpec c;
  c.order = static_cast<std::uint32_t>(order_);
  c.identity = identity_;
  c.trusted = true;
  c.table.assign(order_, std::vector<Element>(order_));
  for (std::size_t a = 0; a < order_; ++a) {
    for (std::size_t b = 0; b < order_; ++b) c.table[a][b] = cayley_[a * order_ + b];
  }
  return c;
}

bool same_group(const GroupPtr& a, const GroupPtr& b) { return a == b || (a && b && *a == *b); }

}  // namespace sdl
