#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace drxp {

/// 1-based feature index.
using FeatureId = std::size_t;

/// Subset of {1..m} backed by a bitset. The universe size m is part of the
/// value, so complements and equality are well defined.
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(std::size_t universe);
  FeatureSet(std::size_t universe, std::initializer_list<FeatureId> members);
  FeatureSet(std::size_t universe, const std::vector<FeatureId>& members);

  static FeatureSet full(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }

  bool contains(FeatureId i) const;
  void insert(FeatureId i);
  void erase(FeatureId i);

  FeatureSet complement() const;
  FeatureSet with(FeatureId i) const;
  FeatureSet without(FeatureId i) const;

  FeatureSet& operator|=(const FeatureSet& other);
  FeatureSet& operator&=(const FeatureSet& other);
  friend FeatureSet operator|(FeatureSet a, const FeatureSet& b) { return a |= b; }
  friend FeatureSet operator&(FeatureSet a, const FeatureSet& b) { return a &= b; }
  FeatureSet minus(const FeatureSet& other) const;

  bool isSubsetOf(const FeatureSet& other) const;
  bool intersects(const FeatureSet& other) const;

  /// Members in increasing index order.
  std::vector<FeatureId> members() const;

  /// "{1,3}"
  std::string str() const;

  friend bool operator==(const FeatureSet& a, const FeatureSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }
  /// Orders by size, then lexicographically by sorted members.
  friend bool operator<(const FeatureSet& a, const FeatureSet& b);

 private:
  void check(FeatureId i) const;

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Sorted, duplicate-free collection of sets; the canonical form used when
/// comparing explanation families.
std::vector<FeatureSet> canonical(std::vector<FeatureSet> sets);

std::string familyStr(const std::vector<FeatureSet>& sets);

}  // namespace drxp
