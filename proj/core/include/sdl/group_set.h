#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "sdl/group.h"

namespace sdl {

// Bitset-backed subset of a FiniteGroup. Value type; the group is shared.
class GroupSet {
 public:
  GroupSet() = default;
  explicit GroupSet(GroupPtr group);
  GroupSet(GroupPtr group, std::span<const Element> elements);
  GroupSet(GroupPtr group, std::initializer_list<Element> elements);

  static GroupSet full(GroupPtr group);
  static GroupSet singleton(GroupPtr group, Element g);
  // Bit i of the big-endian hex number is element i.
  static GroupSet from_hex(GroupPtr group, std::string_view hex);

  const GroupPtr& group_ptr() const { return group_; }
  const FiniteGroup& group() const { return *group_; }
  std::size_t universe() const { return group_ ? group_->order() : 0; }

  bool contains(Element g) const { return g < universe() && ((words_[g >> 6] >> (g & 63)) & 1u); }
  void insert(Element g);
  void erase(Element g);
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  std::vector<Element> elements() const;
  // Smallest element; the set must be nonempty.
  Element min() const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        fn(static_cast<Element>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

  GroupSet left_translate(Element g) const;   // gA
  GroupSet right_translate(Element g) const;  // Ag
  GroupSet inverse() const;                   // A^{-1}
  GroupSet complement() const;

  GroupSet& operator|=(const GroupSet& o);
  GroupSet& operator&=(const GroupSet& o);
  GroupSet& operator-=(const GroupSet& o);
  GroupSet& operator^=(const GroupSet& o);
  friend GroupSet operator|(GroupSet a, const GroupSet& b) { return a |= b; }
  friend GroupSet operator&(GroupSet a, const GroupSet& b) { return a &= b; }
  friend GroupSet operator-(GroupSet a, const GroupSet& b) { return a -= b; }
  friend GroupSet operator^(GroupSet a, const GroupSet& b) { return a ^= b; }

  std::size_t intersection_size(const GroupSet& o) const;
  std::size_t symmetric_difference_size(const GroupSet& o) const;
  bool intersects(const GroupSet& o) const;
  bool subset_of(const GroupSet& o) const;
  bool operator==(const GroupSet& o) const;
  // Lexicographic order of the sorted element lists.
  bool lex_less(const GroupSet& o) const;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::string to_hex() const;
  std::uint64_t hash() const;

  // Throws InputError unless both sets live in the same group.
  void require_same_group(const GroupSet& o, const char* what) const;

 private:
  void recount();

  GroupPtr group_;
  std::vector<std::uint64_t> words_;
  std::size_t count_ = 0;
};

struct GroupSetHash {
  std::size_t operator()(const GroupSet& s) const { return static_cast<std::size_t>(s.hash()); }
};

}  // namespace sdl
