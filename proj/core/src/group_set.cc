#include "sdl/group_set.h"

#include <algorithm>
#include <cctype>

#include "sdl/errors.h"

namespace sdl {

GroupSet::GroupSet(GroupPtr group) : group_(std::move(group)) {
  if (!group_) throw InputError("GroupSet requires a group");
  words_.assign((group_->order() + 63) / 64, 0);
}

GroupSet::GroupSet(GroupPtr group, std::span<const Element> elements) : GroupSet(std::move(group)) {
  for (Element g : elements) insert(g);
}

GroupSet::GroupSet(GroupPtr group, std::initializer_list<Element> elements)
    : GroupSet(std::move(group), std::span<const Element>(elements.begin(), elements.size())) {}

GroupSet GroupSet::full(GroupPtr group) {
  GroupSet s(std::move(group));
  const std::size_t n = s.universe();
  for (std::size_t w = 0; w < s.words_.size(); ++w) s.words_[w] = ~std::uint64_t{0};
  if (n % 64) s.words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
  s.count_ = n;
  return s;
}

GroupSet GroupSet::singleton(GroupPtr group, Element g) {
  GroupSet s(std::move(group));
  s.insert(g);
  return s;
}

GroupSet GroupSet::from_hex(GroupPtr group, std::string_view hex) {
  GroupSet s(std::move(group));
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  Element bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(*it)));
    int v;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else {
      throw InputError(std::string("invalid hex digit '") + *it + "'");
    }
    for (int b = 0; b < 4; ++b) {
      if ((v >> b) & 1) {
        if (bit + b >= s.universe()) throw InputError("bitset_hex has bits beyond the group order");
        s.insert(bit + b);
      }
    }
  }
  return s;
}

void GroupSet::insert(Element g) {
  group_->check(g);
  std::uint64_t& w = words_[g >> 6];
  const std::uint64_t mask = std::uint64_t{1} << (g & 63);
  if (!(w & mask)) {
    w |= mask;
    ++count_;
  }
}

void GroupSet::erase(Element g) {
  group_->check(g);
  std::uint64_t& w = words_[g >> 6];
  const std::uint64_t mask = std::uint64_t{1} << (g & 63);
  if (w & mask) {
    w &= ~mask;
    --count_;
  }
}

std::vector<Element> GroupSet::elements() const {
  std::vector<Element> out;
  out.reserve(count_);
  for_each([&](Element g) { out.push_back(g); });
  return out;
}

Element GroupSet::min() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w]) return static_cast<Element>(w * 64 + std::countr_zero(words_[w]));
  }
  throw InputError("min() of an empty set");
}

GroupSet GroupSet::left_translate(Element g) const {
  GroupSet out(group_);
  const FiniteGroup& G = *group_;
  for_each([&](Element a) {
    const Element x = G.mul(g, a);
    out.words_[x >> 6] |= std::uint64_t{1} << (x & 63);
  });
  out.count_ = count_;
  return out;
}

GroupSet GroupSet::right_translate(Element g) const {
  GroupSet out(group_);
  const FiniteGroup& G = *group_;
  for_each([&](Element a) {
    const Element x = G.mul(a, g);
    out.words_[x >> 6] |= std::uint64_t{1} << (x & 63);
  });
  out.count_ = count_;
  return out;
}

GroupSet GroupSet::inverse() const {
  GroupSet out(group_);
  for_each([&](Element a) {
    const Element x = group_->inv(a);
    out.words_[x >> 6] |= std::uint64_t{1} << (x & 63);
  });
  out.count_ = count_;
  return out;
}

GroupSet GroupSet::complement() const { return full(group_) - *this; }

void GroupSet::require_same_group(const GroupSet& o, const char* what) const {
  if (!same_group(group_, o.group_)) throw InputError(std::string(what) + ": sets live in different groups");
}

void GroupSet::recount() {
  std::size_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
  count_ = c;
}

GroupSet& GroupSet::operator|=(const GroupSet& o) {
  require_same_group(o, "union");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  recount();
  return *this;
}

GroupSet& GroupSet::operator&=(const GroupSet& o) {
  require_same_group(o, "intersection");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  recount();
  return *this;
}

GroupSet& GroupSet::operator-=(const GroupSet& o) {
  require_same_group(o, "difference");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  recount();
  return *this;
}

GroupSet& GroupSet::operator^=(const GroupSet& o) {
  require_same_group(o, "symmetric difference");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  recount();
  return *this;
}

std::size_t GroupSet::intersection_size(const GroupSet& o) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
  return c;
}

std::size_t GroupSet::symmetric_difference_size(const GroupSet& o) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) c += static_cast<std::size_t>(std::popcount(words_[i] ^ o.words_[i]));
  return c;
}

bool GroupSet::intersects(const GroupSet& o) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & o.words_[i]) return true;
  }
  return false;
}

bool GroupSet::subset_of(const GroupSet& o) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~o.words_[i]) return false;
  }
  return true;
}

bool GroupSet::operator==(const GroupSet& o) const {
  return count_ == o.count_ && words_ == o.words_ && same_group(group_, o.group_);
}

bool GroupSet::lex_less(const GroupSet& o) const {
  const std::vector<Element> a = elements();
  const std::vector<Element> b = o.elements();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string GroupSet::to_hex() const {
  static const char* digits = "0123456789abcdef";
  const std::size_t n = universe();
  const std::size_t nibbles = std::max<std::size_t>(1, (n + 3) / 4);
  std::string out(nibbles, '0');
  for (std::size_t k = 0; k < nibbles; ++k) {
    int v = 0;
    for (int b = 0; b < 4; ++b) {
      const std::size_t e = 4 * k + b;
      if (e < n && contains(static_cast<Element>(e))) v |= 1 << b;
    }
    out[nibbles - 1 - k] = digits[v];
  }
  return out;
}

std::uint64_t GroupSet::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint64_t w : words_) {
    for (int i = 0; i < 8; ++i) {
      h ^= (w >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace sdl
