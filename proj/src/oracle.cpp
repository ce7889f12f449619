#include "spatial/oracle.hpp"

#include <algorithm>

#include "spatial/errors.hpp"

namespace spatial {

namespace {

void require_entity(const Scene& scene, const std::string& id) {
  if (!scene.has_entity(id)) throw UnknownEntityError("unknown entity '" + id + "'");
}

}  // namespace

AnsweredQuestion answer_yn(const Scene& scene, const Closure& closure, const Fact& fact) {
  require_entity(scene, fact.subj);
  require_entity(scene, fact.obj);

  AnsweredQuestion out;
  out.question = Question::yn("t", fact);
  out.consistent = closure_consistent(closure);
  if (closure.contains(fact)) {
    auto chain = chain_from_closure(closure, fact);
    out.answer = Answer::yn(true);
    out.depth = chain_depth(*chain);
    out.chains.push_back(std::move(*chain));
  } else {
    out.answer = Answer::yn(false);
  }
  return out;
}

AnsweredQuestion answer_fr(const Scene& scene, const Closure& closure, const std::string& subj,
                           const std::string& obj) {
  require_entity(scene, subj);
  require_entity(scene, obj);

  AnsweredQuestion out;
  out.question = Question::fr("t", subj, obj);
  out.consistent = closure_consistent(closure);
  std::set<Rel> rels;
  for (Rel r : all_relations()) {
    Fact f;
    f.rel = r;
    f.subj = subj;
    f.obj = obj;
    if (!closure.contains(f)) continue;
    rels.insert(r);
    auto chain = chain_from_closure(closure, f);
    out.depth = std::max(out.depth, chain_depth(*chain));
    out.chains.push_back(std::move(*chain));
  }
  out.answer = Answer::fr(std::move(rels));
  return out;
}

AnsweredQuestion answer_yn(const Scene& scene, const Fact& fact, const RuleKB& kb) {
  return answer_yn(scene, close(scene, kb), fact);
}

AnsweredQuestion answer_fr(const Scene& scene, const std::string& subj, const std::string& obj,
                           const RuleKB& kb) {
  return answer_fr(scene, close(scene, kb), subj, obj);
}

}  // namespace spatial
