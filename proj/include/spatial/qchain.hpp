#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spatial/closure.hpp"
#include "spatial/fact.hpp"

namespace spatial {

// One step of a derivation tree. Leaves are asserted facts (no rule, no
// premises); internal steps carry the rule that produced their fact and the
// ids of the premise steps.
struct QChainStep {
  std::string id;  // q1..qn for supporting facts, t for the target
  Fact fact;
  std::string rule_id;                // empty for leaves
  std::vector<std::string> premises;  // step ids, empty for leaves
};

// The derivation tree for a target fact, flattened into topological order:
// shared premises appear once, leaves first, the target last under id "t".
struct QChain {
  Fact target;
  std::vector<QChainStep> steps;

  const QChainStep& root() const { return steps.back(); }
};

// Reconstructs the provenance-canonical chain for a target in the closure;
// absent when the target was never derived.
std::optional<QChain> chain_from_closure(const Closure& closure, const Fact& target);

// close() + chain_from_closure in one call.
std::optional<QChain> derive(const Scene& scene, const Fact& target, const RuleKB& kb);

// Rule applications on the longest root-to-leaf path; 0 for an asserted fact.
int chain_depth(const QChain& chain);

// One Yes-labelled YN question per distinct fact in the chain, in step order.
std::vector<std::pair<Question, Answer>> chain_to_questions(const QChain& chain);

}  // namespace spatial
