#pragma once

#include "spatial/constraints.hpp"
#include "spatial/oracle.hpp"
#include "spatial/render.hpp"

namespace spatial {

// One pass over a scene/target pair: closed-world answer, derivation chain,
// chain constraints, and the rendered rationale. Underivable targets yield
// answer No, no chain, no constraints, and an empty rationale.
struct PipelineRecord {
  AnsweredQuestion answer;
  std::optional<QChain> chain;
  ConstraintSet constraints;
  std::string rationale;
};

PipelineRecord pipeline(const Scene& scene, const Fact& target, const RuleKB& kb,
                        RenderFormat format = RenderFormat::CoT);

Json pipeline_record_to_json(const PipelineRecord& r);

}  // namespace spatial
