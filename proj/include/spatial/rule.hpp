#pragma once

#include <string>
#include <vector>

#include "spatial/fact.hpp"
#include "spatial/relation.hpp"

namespace spatial {

enum class RuleCategory : uint8_t { Converse, Symmetric, Transitive, TransitiveTopo };

std::string_view rule_category_token(RuleCategory c);
std::optional<RuleCategory> rule_category_from_token(std::string_view token);

// Variables in rule patterns are restricted to {x, y, z, h}.
enum class Var : uint8_t { X, Y, Z, H };

std::string_view var_token(Var v);
std::optional<Var> var_from_token(std::string_view token);

// A relation atom over variables, e.g. above(x, y).
struct Pattern {
  Rel rel = Rel::Left;
  Var a = Var::X;
  Var b = Var::Y;

  auto operator<=>(const Pattern& other) const = default;
};

std::string render_pattern(const Pattern& p);
Pattern parse_pattern(const std::string& text);

// Rules are data interpreted by the inference engine, never code, so rule
// sets can be loaded, validated, and referenced by id in provenance.
struct Rule {
  std::string id;
  RuleCategory category = RuleCategory::Converse;
  std::vector<Pattern> premises;  // 1, 2, or 3 atoms
  Pattern conclusion;

  bool operator==(const Rule& other) const = default;
};

struct Diagnostic {
  enum class Kind { Duplicate, MissingMirror, MissingSelfRule };
  Kind kind;
  std::string rule_id;
  std::string message;
};

class RuleKB {
 public:
  RuleKB() = default;
  explicit RuleKB(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const { return rules_; }
  // Indices of rules with a premise over the given relation.
  const std::vector<size_t>& rules_with_premise(Rel r) const;

  size_t size() const { return rules_.size(); }

 private:
  std::vector<Rule> rules_;
  std::array<std::vector<size_t>, kRelCount> by_premise_rel_;
};

// The built-in KB: 10 converse + 5 symmetric + 28 transitivity rules plus
// the 36-rule containment-lifting family, 79 rules total.
const RuleKB& default_kb();

RuleKB load_kb(const std::string& path);
RuleKB parse_kb_json(const std::string& text);

std::vector<Diagnostic> validate_kb(const RuleKB& kb);

// Structural checks shared by the built-in KB and loaded rule files:
// category arity, variable shape, and conclusion safety.
void check_rule(const Rule& rule);

}  // namespace spatial
