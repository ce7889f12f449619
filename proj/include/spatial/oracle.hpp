#pragma once

#include <vector>

#include "spatial/qchain.hpp"

namespace spatial {

struct AnsweredQuestion {
  Question question;
  Answer answer;
  std::vector<QChain> chains;  // one per supported fact; empty for No / empty FR
  int depth = 0;               // max chain depth
  bool consistent = true;      // opposite-pair co-occurrence flag for the scene
};

// Closed world: derivable -> Yes with its chain, otherwise No.
// Throws UnknownEntityError when the fact mentions entities not in the scene.
AnsweredQuestion answer_yn(const Scene& scene, const Fact& fact, const RuleKB& kb);

// All relations derivable between the pair, possibly empty, one chain each.
AnsweredQuestion answer_fr(const Scene& scene, const std::string& subj, const std::string& obj,
                           const RuleKB& kb);

// Batch variants over a precomputed closure, for callers that answer many
// questions against one scene.
AnsweredQuestion answer_yn(const Scene& scene, const Closure& closure, const Fact& fact);
AnsweredQuestion answer_fr(const Scene& scene, const Closure& closure, const std::string& subj,
                           const std::string& obj);

}  // namespace spatial
