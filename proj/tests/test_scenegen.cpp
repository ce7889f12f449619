#include <doctest.h>

#include "spatial/errors.hpp"
#include "spatial/scenegen.hpp"
#include "support.hpp"

using namespace spatial;
using namespace spatial::testing;

namespace {

GenConfig small_config(uint64_t seed, int k) {
  GenConfig cfg;
  cfg.n_entities = k + 4;
  cfg.n_blocks = 1;
  cfg.k_target = k;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("revealed facts are geometrically true") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    GroundedScene gs = generate_scene(small_config(seed, 2));
    for (const Fact& f : gs.scene.facts()) CHECK(geom_holds(gs, f));
  }
}

TEST_CASE("every closure fact is geometrically true (soundness)") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    GroundedScene gs = generate_scene(small_config(seed, 3));
    Closure c = close(gs.scene, default_kb());
    for (const Fact& f : c.facts()) CHECK(geom_holds(gs, f));
  }
}

TEST_CASE("generated scenes are consistent") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    GroundedScene gs = generate_scene(small_config(seed, 2));
    CHECK(closure_consistent(close(gs.scene, default_kb())));
  }
}

TEST_CASE("three entities in a stack give an above-chain with transitive endpoints") {
  GenConfig cfg;
  cfg.n_entities = 5;
  cfg.n_blocks = 0;
  cfg.k_target = 1;
  cfg.seed = 1;
  GroundedScene gs = generate_scene(cfg);
  // The budget beyond the ladder forms the stack; its adjacent above facts
  // are revealed and their transitive endpoint is derivable.
  std::vector<const Fact*> above;
  for (const Fact& f : gs.scene.facts()) {
    if (f.rel == Rel::Above) above.push_back(&f);
  }
  REQUIRE(above.size() >= 1);
  Closure c = close(gs.scene, default_kb());
  for (const Fact* f : above) {
    Fact conv;
    conv.rel = Rel::Below;
    conv.subj = f->obj;
    conv.obj = f->subj;
    CHECK(c.contains(conv));
  }
}

TEST_CASE("minimal pair scene: one revealed fact, converse at depth 1") {
  GenConfig cfg;
  cfg.n_entities = 2;
  cfg.n_blocks = 0;
  cfg.k_target = 1;
  cfg.seed = 3;
  GroundedScene gs = generate_scene(cfg);
  CHECK(gs.scene.facts().size() == 1);
  GenResult res = generate_examples(gs, cfg, default_kb());
  bool saw_depth1 = false;
  for (const auto& ex : res.examples) {
    if (ex.gold.type == QType::YN && ex.gold.yes) {
      CHECK(ex.k == 1);
      saw_depth1 = true;
    }
  }
  CHECK(saw_depth1);
}

TEST_CASE("identical config and seed reproduce byte-identical output") {
  GenConfig cfg = small_config(11, 4);
  GroundedScene a = generate_scene(cfg);
  GroundedScene b = generate_scene(cfg);
  CHECK(scene_to_json(a.scene).dump() == scene_to_json(b.scene).dump());
  GenResult ra = generate_examples(a, cfg, default_kb());
  GenResult rb = generate_examples(b, cfg, default_kb());
  REQUIRE(ra.examples.size() == rb.examples.size());
  for (size_t i = 0; i < ra.examples.size(); ++i) {
    CHECK(generated_example_to_json(ra.examples[i], a.scene).dump() ==
          generated_example_to_json(rb.examples[i], b.scene).dump());
  }
}

TEST_CASE("impossible config is rejected") {
  GenConfig cfg;
  cfg.n_entities = 2;
  cfg.k_target = 10;
  CHECK_THROWS_AS(generate_scene(cfg), ConfigError);
  cfg.k_target = 0;
  CHECK_THROWS_AS(generate_scene(cfg), ConfigError);
  cfg.k_target = 2;
  cfg.negative_ratio = 1.5;
  CHECK_THROWS_AS(generate_scene(cfg), ConfigError);
}

TEST_CASE("depth accuracy: emitted yes examples match k_target across the range") {
  for (int k = 1; k <= 10; ++k) {
    GenConfig cfg = small_config(100 + k, k);
    GroundedScene gs = generate_scene(cfg);
    GenResult res = generate_examples(gs, cfg, default_kb());
    CHECK(res.warnings.empty());
    for (const auto& ex : res.examples) {
      if (ex.gold.type == QType::YN && ex.gold.yes) {
        CHECK(ex.k == k);
        REQUIRE(ex.chain.has_value());
        CHECK(chain_depth(*ex.chain) == k);
      }
    }
  }
}

TEST_CASE("label soundness: yes facts hold, no facts are false in the grounding") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    GenConfig cfg = small_config(seed, 2);
    GroundedScene gs = generate_scene(cfg);
    GenResult res = generate_examples(gs, cfg, default_kb());
    for (const auto& ex : res.examples) {
      if (ex.gold.type != QType::YN) continue;
      CHECK(geom_holds(gs, ex.question.fact) == ex.gold.yes);
    }
  }
}

TEST_CASE("every emitted constraint set is satisfied by its gold labels") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    GenConfig cfg = small_config(seed, 2);
    cfg.question_mix = 0.6;
    GroundedScene gs = generate_scene(cfg);
    GenResult res = generate_examples(gs, cfg, default_kb());
    CHECK(!res.examples.empty());
    for (const auto& ex : res.examples) {
      std::map<std::string, bool> truth;
      for (const ConstraintQuestion& q : ex.constraints.questions) {
        if (q.question.type == QType::YN) {
          truth[q.question.id] = q.gold.yes;
        } else {
          for (Rel r : all_relations()) {
            truth[fr_label_var(q.question.id, r)] = q.gold.relations.count(r) > 0;
          }
        }
      }
      for (const Constraint& c : ex.constraints.constraints) {
        CHECK(eval_boolean(c.expr, [&](const std::string& v) { return truth.at(v); }));
      }
    }
  }
}

TEST_CASE("fr examples carry full oracle answer sets") {
  GenConfig cfg = small_config(5, 2);
  cfg.question_mix = 0.0;  // all FR
  GroundedScene gs = generate_scene(cfg);
  GenResult res = generate_examples(gs, cfg, default_kb());
  Closure c = close(gs.scene, default_kb());
  CHECK(!res.examples.empty());
  for (const auto& ex : res.examples) {
    REQUIRE(ex.question.type == QType::FR);
    CHECK(!ex.gold.relations.empty());
    std::set<Rel> expected;
    for (Rel r : all_relations()) {
      Fact f;
      f.rel = r;
      f.subj = ex.question.subj;
      f.obj = ex.question.obj;
      if (c.contains(f)) expected.insert(r);
    }
    CHECK(ex.gold.relations == expected);
  }
}

TEST_CASE("reveal_policy all produces the full geometric fact set") {
  GenConfig cfg;
  cfg.n_entities = 4;
  cfg.n_blocks = 0;
  cfg.k_target = 1;
  cfg.seed = 9;
  cfg.reveal_policy = "all";
  GroundedScene gs = generate_scene(cfg);
  for (const Fact& f : geom_facts(gs)) {
    CHECK(std::find(gs.scene.facts().begin(), gs.scene.facts().end(), f) !=
          gs.scene.facts().end());
  }
}
