#include "drxp/feature_set.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

#include "drxp/errors.hpp"

namespace drxp {

namespace {
constexpr std::size_t kBits = 64;
}

FeatureSet::FeatureSet(std::size_t universe)
    : universe_(universe), words_((universe + kBits - 1) / kBits, 0) {}

FeatureSet::FeatureSet(std::size_t universe, std::initializer_list<FeatureId> members)
    : FeatureSet(universe) {
  for (FeatureId i : members) insert(i);
}

FeatureSet::FeatureSet(std::size_t universe, const std::vector<FeatureId>& members)
    : FeatureSet(universe) {
  for (FeatureId i : members) insert(i);
}

FeatureSet FeatureSet::full(std::size_t universe) {
  FeatureSet s(universe);
  for (FeatureId i = 1; i <= universe; ++i) s.insert(i);
  return s;
}

void FeatureSet::check(FeatureId i) const {
  if (i < 1 || i > universe_) {
    throw DimensionMismatch("feature index " + std::to_string(i) + " outside 1.." +
                            std::to_string(universe_));
  }
}

std::size_t FeatureSet::size() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool FeatureSet::contains(FeatureId i) const {
  check(i);
  return (words_[(i - 1) / kBits] >> ((i - 1) % kBits)) & 1U;
}

void FeatureSet::insert(FeatureId i) {
  check(i);
  words_[(i - 1) / kBits] |= std::uint64_t{1} << ((i - 1) % kBits);
}

void FeatureSet::erase(FeatureId i) {
  check(i);
  words_[(i - 1) / kBits] &= ~(std::uint64_t{1} << ((i - 1) % kBits));
}

FeatureSet FeatureSet::complement() const {
  FeatureSet out(universe_);
  for (std::size_t k = 0; k < words_.size(); ++k) out.words_[k] = ~words_[k];
  if (universe_ % kBits != 0 && !out.words_.empty()) {
    out.words_.back() &= (std::uint64_t{1} << (universe_ % kBits)) - 1;
  }
  return out;
}

FeatureSet FeatureSet::with(FeatureId i) const {
  FeatureSet out = *this;
  out.insert(i);
  return out;
}

FeatureSet FeatureSet::without(FeatureId i) const {
  FeatureSet out = *this;
  out.erase(i);
  return out;
}

FeatureSet& FeatureSet::operator|=(const FeatureSet& other) {
  if (other.universe_ != universe_) throw DimensionMismatch("feature set universe mismatch");
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
  return *this;
}

FeatureSet& FeatureSet::operator&=(const FeatureSet& other) {
  if (other.universe_ != universe_) throw DimensionMismatch("feature set universe mismatch");
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
  return *this;
}

FeatureSet FeatureSet::minus(const FeatureSet& other) const {
  return *this & other.complement();
}

bool FeatureSet::isSubsetOf(const FeatureSet& other) const {
  if (other.universe_ != universe_) throw DimensionMismatch("feature set universe mismatch");
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] & ~other.words_[k]) return false;
  }
  return true;
}

bool FeatureSet::intersects(const FeatureSet& other) const {
  if (other.universe_ != universe_) throw DimensionMismatch("feature set universe mismatch");
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] & other.words_[k]) return true;
  }
  return false;
}

std::vector<FeatureId> FeatureSet::members() const {
  std::vector<FeatureId> out;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    auto w = words_[k];
    while (w) {
      const int bit = std::countr_zero(w);
      out.push_back(k * kBits + static_cast<std::size_t>(bit) + 1);
      w &= w - 1;
    }
  }
  return out;
}

std::string FeatureSet::str() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (auto i : members()) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << '}';
  return os.str();
}

bool operator<(const FeatureSet& a, const FeatureSet& b) {
  const auto sa = a.size();
  const auto sb = b.size();
  if (sa != sb) return sa < sb;
  return a.members() < b.members();
}

std::vector<FeatureSet> canonical(std::vector<FeatureSet> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

std::string familyStr(const std::vector<FeatureSet>& sets) {
  std::string out = "{";
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (k) out += ',';
    out += sets[k].str();
  }
  return out + "}";
}

}  // namespace drxp
