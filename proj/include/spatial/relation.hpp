#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace spatial {

// The 15-relation vocabulary. Enum order is the canonical index order used
// for serialization-independent bookkeeping; tokens are the wire format.
enum class Rel : uint8_t {
  Left,
  Right,
  Above,
  Below,
  Behind,
  Front,
  Near,
  Far,
  Disconnected,
  Touch,
  Overlap,
  CoveredBy,
  Inside,
  Cover,
  Contain,
};

inline constexpr int kRelCount = 15;

enum class RelCategory : uint8_t { Directional, Distance, Topological };

constexpr std::array<Rel, kRelCount> all_relations() {
  return {Rel::Left,         Rel::Right, Rel::Above,   Rel::Below,     Rel::Behind,
          Rel::Front,        Rel::Near,  Rel::Far,     Rel::Disconnected, Rel::Touch,
          Rel::Overlap,      Rel::CoveredBy, Rel::Inside, Rel::Cover,  Rel::Contain};
}

std::string_view rel_token(Rel r);
std::optional<Rel> rel_from_token(std::string_view token);

Rel converse_of(Rel r);
RelCategory category_of(Rel r);

// The five mutually exclusive pairs: (left,right), (above,below),
// (behind,front), (near,far), (disconnected,touch).
std::optional<Rel> opposite_of(Rel r);

std::string_view category_token(RelCategory c);

}  // namespace spatial
