#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spatial/constraints.hpp"
#include "spatial/fact.hpp"
#include "spatial/qchain.hpp"

namespace spatial {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

// A scene with a concrete geometric interpretation behind it. Nested
// entities share their container's coordinates, which keeps every rule in
// the KB true under the interpretation; the revealed fact subset lives in
// `scene`.
struct GroundedScene {
  std::map<std::string, Vec3> placements;
  std::map<std::string, std::string> parent;                  // child -> container
  std::set<std::pair<std::string, std::string>> covered;      // (child, container)
  std::set<std::pair<std::string, std::string>> touching;     // canonical pairs
  std::set<std::pair<std::string, std::string>> overlapping;  // canonical root pairs
  Scene scene;
};

struct GenConfig {
  int n_entities = 8;
  int n_blocks = 1;          // dressing blocks beyond the derivation ladder
  int k_target = 2;          // requested reasoning depth, 1..10
  std::string reveal_policy = "tree";  // "tree" or "all"
  uint64_t seed = 1;
  double question_mix = 0.75;    // fraction of YN questions
  double negative_ratio = 0.25;  // fraction of YN questions labelled No
  int questions_per_scene = 6;
};

GenConfig gen_config_from_json(const Json& j);
Json gen_config_to_json(const GenConfig& cfg);

// Geometric truth of a fact under the grounding: coordinate margins of 0.5
// for the six directional relations, distance < 2 / > 6 for near / far,
// the nesting forest for inside / contain, declared flags for the rest.
// Distinct components with no touch or overlap flag are disconnected.
bool geom_holds(const GroundedScene& gs, const Fact& f);

// Top-level container of an entity (itself when unnested).
std::string root_of(const GroundedScene& gs, const std::string& id);

// All geometrically true facts over the grounding's entities.
std::vector<Fact> geom_facts(const GroundedScene& gs);

// Deterministic per (config, seed). Throws ConfigError when the requested
// depth cannot fit in the entity budget.
GroundedScene generate_scene(const GenConfig& cfg);

struct GeneratedExample {
  Question question;
  Answer gold;
  std::optional<QChain> chain;
  int k = 0;
  ConstraintSet constraints;
};

struct GenResult {
  std::vector<GeneratedExample> examples;
  std::vector<std::string> warnings;  // DepthUnreachable notes
};

// Yes questions with chains at the requested depth, No probes certified
// geometrically false, and FR questions with full oracle answer sets; every
// example carries a self-contained constraint set.
GenResult generate_examples(const GroundedScene& gs, const GenConfig& cfg, const RuleKB& kb);

Json generated_example_to_json(const GeneratedExample& ex, const Scene& scene);

}  // namespace spatial
