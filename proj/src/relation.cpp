#include "spatial/relation.hpp"

namespace spatial {

namespace {

constexpr std::array<std::string_view, kRelCount> kTokens = {
    "left",  "right", "above",   "below",     "behind", "front",  "near", "far",
    "disconnected", "touch", "overlap", "coveredby", "inside", "cover", "contain"};

}  // namespace

std::string_view rel_token(Rel r) { return kTokens[static_cast<size_t>(r)]; }

std::optional<Rel> rel_from_token(std::string_view token) {
  for (size_t i = 0; i < kTokens.size(); ++i) {
    if (kTokens[i] == token) return static_cast<Rel>(i);
  }
  return std::nullopt;
}

Rel converse_of(Rel r) {
  switch (r) {
    case Rel::Left: return Rel::Right;
    case Rel::Right: return Rel::Left;
    case Rel::Above: return Rel::Below;
    case Rel::Below: return Rel::Above;
    case Rel::Behind: return Rel::Front;
    case Rel::Front: return Rel::Behind;
    case Rel::CoveredBy: return Rel::Cover;
    case Rel::Cover: return Rel::CoveredBy;
    case Rel::Inside: return Rel::Contain;
    case Rel::Contain: return Rel::Inside;
    // Symmetric relations are their own converse.
    case Rel::Near:
    case Rel::Far:
    case Rel::Disconnected:
    case Rel::Touch:
    case Rel::Overlap:
      return r;
  }
  return r;
}

RelCategory category_of(Rel r) {
  switch (r) {
    case Rel::Left:
    case Rel::Right:
    case Rel::Above:
    case Rel::Below:
    case Rel::Behind:
    case Rel::Front:
      return RelCategory::Directional;
    case Rel::Near:
    case Rel::Far:
      return RelCategory::Distance;
    default:
      return RelCategory::Topological;
  }
}

std::optional<Rel> opposite_of(Rel r) {
  switch (r) {
    case Rel::Left: return Rel::Right;
    case Rel::Right: return Rel::Left;
    case Rel::Above: return Rel::Below;
    case Rel::Below: return Rel::Above;
    case Rel::Behind: return Rel::Front;
    case Rel::Front: return Rel::Behind;
    case Rel::Near: return Rel::Far;
    case Rel::Far: return Rel::Near;
    case Rel::Disconnected: return Rel::Touch;
    case Rel::Touch: return Rel::Disconnected;
    default: return std::nullopt;
  }
}

std::string_view category_token(RelCategory c) {
  switch (c) {
    case RelCategory::Directional: return "directional";
    case RelCategory::Distance: return "distance";
    case RelCategory::Topological: return "topological";
  }
  return "";
}

}  // namespace spatial
