// Sparse markings over place indices, plus the omega-extended variant used by
// Karp-Miller style analyses.
#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace rpn {

using PlaceId = std::uint32_t;
using TransId = std::uint32_t;
using Count = std::uint64_t;

/// Multiset of tokens over places. Zero entries are never stored, so two
/// markings are equal iff their item vectors are equal.
class Marking {
public:
  Marking() = default;

  static Marking single(PlaceId p, Count n = 1) {
    Marking m;
    if (n > 0) m.items_.emplace_back(p, n);
    return m;
  }

  Count at(PlaceId p) const {
    for (const auto& [q, n] : items_)
      if (q == p) return n;
    return 0;
  }

  void set(PlaceId p, Count n);
  void add(PlaceId p, Count n) { set(p, at(p) + n); }

  bool empty() const { return items_.empty(); }
  std::size_t supportSize() const { return items_.size(); }

  Count total() const {
    Count s = 0;
    for (const auto& [p, n] : items_) s += n;
    return s;
  }

  /// Pointwise order; iterates the support of *this only.
  bool leq(const Marking& other) const {
    for (const auto& [p, n] : items_)
      if (other.at(p) < n) return false;
    return true;
  }

  Marking plus(const Marking& other) const;
  /// Requires other.leq(*this).
  Marking minus(const Marking& other) const;

  bool operator==(const Marking&) const = default;
  auto operator<=>(const Marking&) const = default;

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  /// Deterministic serialization, e.g. "{2:1,5:3}"; "0" for the zero marking.
  std::string serialize() const;

private:
  std::vector<std::pair<PlaceId, Count>> items_;  // sorted by place, counts >= 1
};

/// Marking extended with omega components. Omega absorbs addition and
/// subtraction and dominates every finite count.
class OmegaMarking {
public:
  static constexpr Count kOmega = std::numeric_limits<Count>::max();

  OmegaMarking() = default;
  explicit OmegaMarking(const Marking& m) {
    for (const auto& [p, n] : m) items_.emplace_back(p, n);
  }

  Count at(PlaceId p) const {
    for (const auto& [q, n] : items_)
      if (q == p) return n;
    return 0;
  }

  void set(PlaceId p, Count n);
  void setOmega(PlaceId p) { set(p, kOmega); }
  bool isOmega(PlaceId p) const { return at(p) == kOmega; }

  bool leq(const OmegaMarking& other) const {
    for (const auto& [p, n] : items_)
      if (other.at(p) < n) return false;
    return true;
  }

  /// True iff m(p) <= this(p) for all p, treating omega as top.
  bool dominates(const Marking& m) const {
    for (const auto& [p, n] : m)
      if (at(p) < n) return false;
    return true;
  }

  OmegaMarking fire(const Marking& pre, const Marking& post) const;

  /// Sets to omega every place where *this strictly exceeds the ancestor;
  /// returns true if any omega was introduced.
  bool accelerate(const OmegaMarking& ancestor);

  bool hasOmega() const {
    for (const auto& [p, n] : items_)
      if (n == kOmega) return true;
    return false;
  }

  bool operator==(const OmegaMarking&) const = default;
  auto operator<=>(const OmegaMarking&) const = default;

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  /// Omega rendered as "w", e.g. "{2:w,5:3}".
  std::string serialize() const;

private:
  std::vector<std::pair<PlaceId, Count>> items_;
};

}  // namespace rpn
