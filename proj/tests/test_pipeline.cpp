#include <doctest.h>

#include "spatial/pipeline.hpp"
#include "spatial/scenegen.hpp"
#include "support.hpp"

using namespace spatial;
using namespace spatial::testing;

TEST_CASE("pipeline on the worked example: 3 constraints and a 3-step rationale") {
  PipelineRecord rec = pipeline(worked_scene(), parse_fact("below(orange,red)"), default_kb());
  CHECK(rec.answer.answer.yes);
  REQUIRE(rec.chain.has_value());
  CHECK(rec.constraints.constraints.size() == 3);
  int lines = 0;
  for (char c : rec.rationale) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 4);  // three steps + answer line
}

TEST_CASE("pipeline on an underivable target: answer no, empty constraints") {
  PipelineRecord rec = pipeline(worked_scene(), parse_fact("above(orange,red)"), default_kb());
  CHECK(!rec.answer.answer.yes);
  CHECK(!rec.chain.has_value());
  CHECK(rec.constraints.constraints.empty());
  CHECK(rec.constraints.questions.empty());
  CHECK(rec.rationale.empty());
}

TEST_CASE("pipeline over a batch of generated scenes is order-stable") {
  auto run_batch = [] {
    std::string out;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
      GenConfig cfg;
      cfg.n_entities = 6;
      cfg.n_blocks = 1;
      cfg.k_target = 1 + static_cast<int>(seed % 3);
      cfg.seed = seed;
      cfg.question_mix = 1.0;
      cfg.negative_ratio = 0.0;
      GroundedScene gs = generate_scene(cfg);
      GenResult res = generate_examples(gs, cfg, default_kb());
      if (res.examples.empty()) continue;
      const GeneratedExample& ex = res.examples.front();
      PipelineRecord rec = pipeline(gs.scene, ex.question.fact, default_kb());
      out += pipeline_record_to_json(rec).dump();
      out += "\n";
    }
    return out;
  };
  std::string a = run_batch();
  std::string b = run_batch();
  CHECK(!a.empty());
  CHECK(a == b);
}
