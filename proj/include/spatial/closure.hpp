#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "spatial/fact.hpp"
#include "spatial/rule.hpp"

namespace spatial {

struct Derivation {
  std::string rule_id;
  std::vector<Fact> premises;
  int round = 0;  // 0 = asserted; derived facts carry the round they first appeared in
};

// Deductive closure of a scene under a rule KB. Asserted facts come first in
// scene order; derived facts follow in (round, canonical fact) order, which
// makes serialization deterministic.
class Closure {
 public:
  const std::vector<Fact>& facts() const { return facts_; }
  bool contains(const Fact& f) const { return index_.count(f) > 0; }
  bool is_base(const Fact& f) const;
  // nullptr for asserted or unknown facts.
  const Derivation* derivation_of(const Fact& f) const;

  size_t size() const { return facts_.size(); }

 private:
  friend struct ClosureAccess;

  struct FactHash {
    size_t operator()(const Fact& f) const;
  };

  std::vector<Fact> facts_;
  std::unordered_map<Fact, Derivation, FactHash> provenance_;  // derived facts only
  std::unordered_map<Fact, int, FactHash> index_;              // fact -> round
};

// Semi-naive forward chaining to the least fixpoint. Provenance keeps one
// derivation per fact, chosen by (round, premise count descending, rule id,
// premise facts) so results are reproducible regardless of match order.
Closure close(const Scene& scene, const RuleKB& kb);

// True when no entity pair carries both members of an opposite relation
// pair (left/right, above/below, behind/front, near/far,
// disconnected/touch) anywhere in the closure.
bool closure_consistent(const Closure& closure);

}  // namespace spatial
