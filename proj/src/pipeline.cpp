#include "spatial/pipeline.hpp"

namespace spatial {

PipelineRecord pipeline(const Scene& scene, const Fact& target, const RuleKB& kb,
                        RenderFormat format) {
  PipelineRecord rec;
  rec.answer = answer_yn(scene, target, kb);
  if (!rec.answer.chains.empty()) {
    rec.chain = rec.answer.chains.front();
    rec.constraints = chain_to_constraints(*rec.chain);
    rec.rationale = render_chain(*rec.chain, scene, format);
  }
  return rec;
}

Json pipeline_record_to_json(const PipelineRecord& r) {
  Json j;
  j["target"] = fact_to_json(r.answer.question.fact);
  j["answer"] = answer_to_json(r.answer.answer);
  j["k"] = r.answer.depth;
  j["chain"] = r.chain ? chain_to_json(*r.chain) : Json(nullptr);
  j["constraints"] = constraint_set_to_json(r.constraints);
  j["rationale"] = r.rationale;
  return j;
}

}  // namespace spatial
