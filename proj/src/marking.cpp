#include "rpnkit/marking.hpp"

#include <algorithm>
#include <cassert>

namespace rpn {

void Marking::set(PlaceId p, Count n) {
  auto it = std::lower_bound(items_.begin(), items_.end(), p,
                             [](const auto& a, PlaceId q) { return a.first < q; });
  if (it != items_.end() && it->first == p) {
    if (n == 0)
      items_.erase(it);
    else
      it->second = n;
  } else if (n > 0) {
    items_.insert(it, {p, n});
  }
}

Marking Marking::plus(const Marking& other) const {
  Marking r = *this;
  for (const auto& [p, n] : other.items_) r.add(p, n);
  return r;
}

Marking Marking::minus(const Marking& other) const {
  Marking r = *this;
  for (const auto& [p, n] : other.items_) {
    Count have = r.at(p);
    assert(have >= n && "Marking::minus underflow");
    r.set(p, have - n);
  }
  return r;
}

std::string Marking::serialize() const {
  if (items_.empty()) return "0";
  std::string s = "{";
  bool first = true;
  for (const auto& [p, n] : items_) {
    if (!first) s += ',';
    first = false;
    s += std::to_string(p);
    s += ':';
    s += std::to_string(n);
  }
  s += '}';
  return s;
}

void OmegaMarking::set(PlaceId p, Count n) {
  auto it = std::lower_bound(items_.begin(), items_.end(), p,
                             [](const auto& a, PlaceId q) { return a.first < q; });
  if (it != items_.end() && it->first == p) {
    if (n == 0)
      items_.erase(it);
    else
      it->second = n;
  } else if (n > 0) {
    items_.insert(it, {p, n});
  }
}

OmegaMarking OmegaMarking::fire(const Marking& pre, const Marking& post) const {
  OmegaMarking r = *this;
  for (const auto& [p, n] : pre) {
    Count have = r.at(p);
    if (have == kOmega) continue;  // omega - k = omega
    assert(have >= n && "OmegaMarking::fire underflow");
    r.set(p, have - n);
  }
  for (const auto& [p, n] : post) {
    Count have = r.at(p);
    if (have == kOmega) continue;  // omega + k = omega
    r.set(p, have + n);
  }
  return r;
}

bool OmegaMarking::accelerate(const OmegaMarking& ancestor) {
  if (!ancestor.leq(*this)) return false;
  bool introduced = false;
  // Places where *this strictly exceeds the ancestor become omega. The
  // ancestor's support suffices: *this > ancestor somewhere implies either a
  // larger count on the ancestor's support or a place only *this marks.
  std::vector<PlaceId> grow;
  for (const auto& [p, n] : items_) {
    if (n != kOmega && n > ancestor.at(p)) grow.push_back(p);
  }
  for (PlaceId p : grow) {
    setOmega(p);
    introduced = true;
  }
  return introduced;
}

std::string OmegaMarking::serialize() const {
  if (items_.empty()) return "0";
  std::string s = "{";
  bool first = true;
  for (const auto& [p, n] : items_) {
    if (!first) s += ',';
    first = false;
    s += std::to_string(p);
    s += ':';
    s += n == kOmega ? "w" : std::to_string(n);
  }
  s += '}';
  return s;
}

}  // namespace rpn
