#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spatial/relation.hpp"

namespace spatial {

// A ground atom R(subj, obj). Reflexive atoms are rejected at construction;
// no rule in the vocabulary produces or consumes them.
struct Fact {
  Rel rel = Rel::Left;
  std::string subj;
  std::string obj;

  Fact() = default;
  Fact(Rel rel, std::string subj, std::string obj);

  bool operator==(const Fact& other) const = default;
  // Canonical order: (relation token, subj, obj). Used wherever the engine
  // needs a deterministic tie-break or a stable serialization order.
  std::strong_ordering operator<=>(const Fact& other) const;
};

// "rel(subj,obj)" with no whitespace; the canonical one-line form.
std::string render_fact_token(const Fact& f);

// Parses the rel-token "(" id "," id ")" grammar, whitespace tolerated
// around tokens. Throws UnknownRelationError / ParseError /
// ReflexiveFactError with the offending position.
Fact parse_fact(const std::string& text);

struct Entity {
  std::string id;
  // Display-only metadata (size, color, shape, name, ...). Never consulted
  // by inference.
  std::map<std::string, std::string> attrs;

  bool operator==(const Entity& other) const = default;
};

// Entities plus the asserted (revealed) story facts.
class Scene {
 public:
  Scene() = default;
  Scene(std::vector<Entity> entities, std::vector<Fact> facts);

  const std::vector<Entity>& entities() const { return entities_; }
  const std::vector<Fact>& facts() const { return facts_; }

  bool has_entity(const std::string& id) const;
  const Entity* find_entity(const std::string& id) const;

  void add_entity(Entity e);
  // Duplicate facts are ignored; facts over undeclared entities throw.
  void add_fact(const Fact& f);

  bool operator==(const Scene& other) const = default;

 private:
  std::vector<Entity> entities_;
  std::vector<Fact> facts_;
  std::set<std::string> ids_;
  std::set<Fact> fact_set_;
};

enum class QType : uint8_t { YN, FR };

struct Question {
  QType type = QType::YN;
  std::string id;
  Fact fact;         // YN only
  std::string subj;  // FR only
  std::string obj;   // FR only

  static Question yn(std::string id, Fact f);
  static Question fr(std::string id, std::string subj, std::string obj);

  bool operator==(const Question& other) const = default;
};

struct Answer {
  QType type = QType::YN;
  bool yes = false;          // YN
  std::set<Rel> relations;   // FR, multi-label

  static Answer yn(bool yes);
  static Answer fr(std::set<Rel> rels);

  bool operator==(const Answer& other) const = default;
};

}  // namespace spatial
