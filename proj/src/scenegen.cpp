#include "spatial/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spatial/errors.hpp"
#include "spatial/json_io.hpp"

namespace spatial {

namespace {

std::pair<std::string, std::string> canon(const std::string& a, const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

double dist(const Vec3& a, const Vec3& b) {
  double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Strict ancestor in the nesting forest.
bool is_ancestor(const GroundedScene& gs, const std::string& anc, const std::string& id) {
  std::string cur = id;
  while (true) {
    auto it = gs.parent.find(cur);
    if (it == gs.parent.end()) return false;
    if (it->second == anc) return true;
    cur = it->second;
  }
}

constexpr double kMargin = 0.5;
constexpr double kNearLimit = 2.0;
constexpr double kFarLimit = 6.0;

}  // namespace

std::string root_of(const GroundedScene& gs, const std::string& id) {
  std::string cur = id;
  for (auto it = gs.parent.find(cur); it != gs.parent.end(); it = gs.parent.find(cur)) {
    cur = it->second;
  }
  return cur;
}

bool geom_holds(const GroundedScene& gs, const Fact& f) {
  const Vec3& s = gs.placements.at(f.subj);
  const Vec3& o = gs.placements.at(f.obj);
  switch (f.rel) {
    case Rel::Left: return o.x - s.x > kMargin;
    case Rel::Right: return s.x - o.x > kMargin;
    case Rel::Above: return s.y - o.y > kMargin;
    case Rel::Below: return o.y - s.y > kMargin;
    case Rel::Behind: return s.z - o.z > kMargin;
    case Rel::Front: return o.z - s.z > kMargin;
    case Rel::Near:
      return root_of(gs, f.subj) != root_of(gs, f.obj) && dist(s, o) < kNearLimit;
    case Rel::Far:
      return root_of(gs, f.subj) != root_of(gs, f.obj) && dist(s, o) > kFarLimit;
    case Rel::Inside: return is_ancestor(gs, f.obj, f.subj);
    case Rel::Contain: return is_ancestor(gs, f.subj, f.obj);
    case Rel::CoveredBy: return gs.covered.count({f.subj, f.obj}) > 0;
    case Rel::Cover: return gs.covered.count({f.obj, f.subj}) > 0;
    case Rel::Touch: return gs.touching.count(canon(f.subj, f.obj)) > 0;
    case Rel::Overlap: return gs.overlapping.count(canon(f.subj, f.obj)) > 0;
    case Rel::Disconnected: {
      std::string rs = root_of(gs, f.subj);
      std::string ro = root_of(gs, f.obj);
      if (rs == ro) return false;
      return gs.overlapping.count(canon(rs, ro)) == 0 && gs.touching.count(canon(rs, ro)) == 0;
    }
  }
  return false;
}

std::vector<Fact> geom_facts(const GroundedScene& gs) {
  std::vector<Fact> out;
  const auto& entities = gs.scene.entities();
  for (const Entity& a : entities) {
    for (const Entity& b : entities) {
      if (a.id == b.id) continue;
      for (Rel r : all_relations()) {
        Fact f;
        f.rel = r;
        f.subj = a.id;
        f.obj = b.id;
        if (geom_holds(gs, f)) out.push_back(std::move(f));
      }
    }
  }
  return out;
}

GenConfig gen_config_from_json(const Json& j) {
  GenConfig cfg;
  if (!j.is_object()) throw SchemaError("generator config must be an object");
  if (j.contains("n_entities")) cfg.n_entities = j["n_entities"].get<int>();
  if (j.contains("n_blocks")) cfg.n_blocks = j["n_blocks"].get<int>();
  if (j.contains("k_target")) cfg.k_target = j["k_target"].get<int>();
  if (j.contains("reveal_policy")) cfg.reveal_policy = j["reveal_policy"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("question_mix")) cfg.question_mix = j["question_mix"].get<double>();
  if (j.contains("negative_ratio")) cfg.negative_ratio = j["negative_ratio"].get<double>();
  if (j.contains("questions_per_scene")) cfg.questions_per_scene = j["questions_per_scene"].get<int>();
  return cfg;
}

Json gen_config_to_json(const GenConfig& cfg) {
  Json j;
  j["n_entities"] = cfg.n_entities;
  j["n_blocks"] = cfg.n_blocks;
  j["k_target"] = cfg.k_target;
  j["reveal_policy"] = cfg.reveal_policy;
  j["seed"] = cfg.seed;
  j["question_mix"] = cfg.question_mix;
  j["negative_ratio"] = cfg.negative_ratio;
  j["questions_per_scene"] = cfg.questions_per_scene;
  return j;
}

namespace {

const char* kColors[] = {"red", "blue", "green", "yellow", "white", "black",
                         "orange", "purple", "gray", "brown", "pink", "teal"};
const char* kShapes[] = {"square", "circle", "triangle", "box", "oval",
                         "star", "ring", "disk", "cone", "cube"};

struct Builder {
  const GenConfig& cfg;
  std::mt19937_64 rng;
  GroundedScene gs;
  std::vector<std::string> names;
  size_t next_name = 0;
  int next_slot = 0;

  explicit Builder(const GenConfig& cfg) : cfg(cfg), rng(cfg.seed) {
    for (const char* c : kColors) {
      for (const char* s : kShapes) {
        names.push_back(std::string(c) + "-" + s);
      }
    }
    std::shuffle(names.begin(), names.end(), rng);
  }

  std::string fresh(const char* role) {
    if (next_name >= names.size()) throw ConfigError("entity budget exceeds the name pool");
    std::string id = names[next_name++];
    Entity e;
    e.id = id;
    size_t dash = id.find('-');
    e.attrs["color"] = id.substr(0, dash);
    e.attrs["shape"] = id.substr(dash + 1);
    if (role != nullptr) e.attrs["role"] = role;
    gs.scene.add_entity(std::move(e));
    return id;
  }

  // Free slots march along -x so construction groups never interact on the
  // directional axes by accident closer than the margins allow.
  Vec3 take_slot() {
    Vec3 p;
    p.x = -12.0 - 3.0 * next_slot++;
    return p;
  }

  void place(const std::string& id, const Vec3& p) { gs.placements[id] = p; }

  void nest(const std::string& child, const std::string& container, bool covered_flag) {
    gs.parent[child] = container;
    gs.placements[child] = gs.placements.at(container);
    if (covered_flag) {
      gs.covered.insert({child, container});
      // A covered member sits on its container's boundary.
      gs.touching.insert(child < container ? std::make_pair(child, container)
                                           : std::make_pair(container, child));
    }
  }

  void reveal(Rel r, const std::string& subj, const std::string& obj) {
    Fact f;
    f.rel = r;
    f.subj = subj;
    f.obj = obj;
    gs.scene.add_fact(f);
  }
};

// Seed relations a ladder can hang off: everything coveredby lifts through.
const Rel kSeedRels[] = {Rel::Left, Rel::Right, Rel::Above, Rel::Below, Rel::Behind,
                         Rel::Front, Rel::Near, Rel::Far, Rel::Disconnected};

Vec3 seed_offset(Rel r) {
  switch (r) {
    case Rel::Left: return {2.5, 0.0, 0.0};    // ladder root left of the seed
    case Rel::Right: return {-2.5, 0.0, 0.0};
    case Rel::Above: return {0.0, -2.5, 0.0};
    case Rel::Below: return {0.0, 2.5, 0.0};
    case Rel::Behind: return {0.0, 0.0, -2.5};
    case Rel::Front: return {0.0, 0.0, 2.5};
    case Rel::Near: return {1.5, 0.0, 0.0};
    case Rel::Far: return {8.0, 0.0, 0.0};
    case Rel::Disconnected: return {0.0, 0.0, 8.0};
    default: return {};
  }
}

}  // namespace

GroundedScene generate_scene(const GenConfig& cfg) {
  if (cfg.k_target < 1 || cfg.k_target > 10) {
    throw ConfigError("k_target must be in 1..10");
  }
  if (cfg.n_entities < 2) throw ConfigError("need at least 2 entities");
  if (cfg.n_blocks < 0) throw ConfigError("n_blocks must be non-negative");
  if (cfg.question_mix < 0.0 || cfg.question_mix > 1.0 || cfg.negative_ratio < 0.0 ||
      cfg.negative_ratio > 1.0) {
    throw ConfigError("question_mix and negative_ratio must be in [0,1]");
  }
  bool pair_scene = cfg.k_target == 1 && cfg.n_entities == 2;
  int ladder_cost = pair_scene ? 2 : cfg.k_target + 2;
  if (cfg.n_entities < ladder_cost) {
    throw ConfigError("k_target " + std::to_string(cfg.k_target) + " needs at least " +
                      std::to_string(ladder_cost) + " entities");
  }

  Builder b(cfg);
  int budget = cfg.n_entities;

  if (pair_scene) {
    // Two stacked roots; the single revealed fact leaves its converse (and
    // nothing shallower) at depth 1.
    std::string lower = b.fresh(nullptr);
    std::string upper = b.fresh(nullptr);
    b.place(lower, {0.0, 0.0, 0.0});
    b.place(upper, {0.0, 1.5, 0.0});
    b.reveal(Rel::Above, upper, lower);
    budget -= 2;
  } else {
    // Derivation ladder: a coveredby chain under the root, plus one seed
    // fact from the root to a separate anchor. The only route from the
    // innermost entity to the anchor replays the chain link by link, so the
    // lifted fact lands at exactly round k.
    Rel seed = kSeedRels[b.rng() % std::size(kSeedRels)];
    std::string root = b.fresh("block");
    std::string anchor = b.fresh(nullptr);
    Vec3 origin{0.0, 0.0, 0.0};
    b.place(root, origin);
    Vec3 off = seed_offset(seed);
    b.place(anchor, {origin.x + off.x, origin.y + off.y, origin.z + off.z});
    b.reveal(seed, root, anchor);
    std::string container = root;
    for (int i = 0; i < cfg.k_target; ++i) {
      std::string child = b.fresh(i + 1 < cfg.k_target ? "block" : nullptr);
      b.nest(child, container, /*covered_flag=*/true);
      b.reveal(Rel::CoveredBy, child, container);
      container = child;
    }
    budget -= cfg.k_target + 2;
  }

  // Dressing blocks: containers with one member each, laid out left to
  // right so block-to-block facts can feed the containment-lifting rules.
  std::vector<std::string> blocks;
  for (int i = 0; i < cfg.n_blocks && budget >= 2; ++i) {
    std::string block = b.fresh("block");
    Vec3 p = b.take_slot();
    b.place(block, p);
    std::string member = b.fresh(nullptr);
    bool covered_member = (b.rng() % 2) == 0;
    b.nest(member, block, covered_member);
    b.reveal(covered_member ? Rel::CoveredBy : Rel::Inside, member, block);
    // Slots march along -x, so each new block sits to the left of the
    // previous one.
    if (!blocks.empty()) b.reveal(Rel::Left, block, blocks.back());
    blocks.push_back(block);
    budget -= 2;
  }

  // Remaining entities form a vertical stack of roots. Some adjacent pairs
  // are declared overlapping, which also removes them from the
  // disconnected default.
  std::vector<std::string> stack;
  Vec3 base = b.take_slot();
  while (budget > 0) {
    std::string s = b.fresh(nullptr);
    b.place(s, {base.x, base.y + 1.5 * static_cast<double>(stack.size()), base.z});
    if (!stack.empty()) {
      b.reveal(Rel::Above, s, stack.back());
      if (b.rng() % 3 == 0) {
        const std::string& prev = stack.back();
        b.gs.overlapping.insert(s < prev ? std::make_pair(s, prev) : std::make_pair(prev, s));
      }
    }
    stack.push_back(s);
    --budget;
  }

  if (cfg.reveal_policy == "all") {
    for (const Fact& f : geom_facts(b.gs)) b.gs.scene.add_fact(f);
  } else if (cfg.reveal_policy != "tree") {
    throw ConfigError("unknown reveal_policy '" + cfg.reveal_policy + "'");
  }

  return std::move(b.gs);
}

namespace {

int fact_round(const Closure& closure, const Fact& f) {
  const Derivation* d = closure.derivation_of(f);
  return d == nullptr ? 0 : d->round;
}

}  // namespace

GenResult generate_examples(const GroundedScene& gs, const GenConfig& cfg, const RuleKB& kb) {
  GenResult result;
  Closure closure = close(gs.scene, kb);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  int n_total = cfg.questions_per_scene;
  int n_fr = static_cast<int>(std::lround((1.0 - cfg.question_mix) * n_total));
  int n_yn = n_total - n_fr;
  int n_no = static_cast<int>(std::lround(cfg.negative_ratio * n_yn));
  int n_yes = n_yn - n_no;

  // --- Yes questions at the requested depth.
  std::vector<Fact> at_depth;
  int max_depth = 0;
  for (const Fact& f : closure.facts()) {
    int r = fact_round(closure, f);
    max_depth = std::max(max_depth, r);
    if (r == cfg.k_target) at_depth.push_back(f);
  }
  if (at_depth.empty() && n_yes > 0) {
    result.warnings.push_back("DepthUnreachable: no fact at depth " +
                              std::to_string(cfg.k_target) + ", emitting depth " +
                              std::to_string(max_depth));
    for (const Fact& f : closure.facts()) {
      if (fact_round(closure, f) == max_depth && max_depth > 0) at_depth.push_back(f);
    }
  }
  int qid = 0;
  for (int i = 0; i < n_yes && !at_depth.empty(); ++i) {
    const Fact& f = at_depth[rng() % at_depth.size()];
    GeneratedExample ex;
    auto chain = chain_from_closure(closure, f);
    ex.question = Question::yn("ex" + std::to_string(qid++), f);
    ex.gold = Answer::yn(true);
    ex.k = chain_depth(*chain);
    ex.constraints = chain_to_constraints(*chain);
    ex.chain = std::move(chain);
    result.examples.push_back(std::move(ex));
  }

  // --- No probes: opposite relations of true facts, certified false under
  // the grounding.
  std::vector<Fact> no_candidates;
  for (const Fact& f : closure.facts()) {
    auto opp = opposite_of(f.rel);
    if (!opp) continue;
    Fact probe;
    probe.rel = *opp;
    probe.subj = f.subj;
    probe.obj = f.obj;
    if (!closure.contains(probe) && !geom_holds(gs, probe)) no_candidates.push_back(probe);
  }
  for (int i = 0; i < n_no && !no_candidates.empty(); ++i) {
    Fact probe = no_candidates[rng() % no_candidates.size()];
    GeneratedExample ex;
    ex.question = Question::yn("ex" + std::to_string(qid++), probe);
    ex.gold = Answer::yn(false);
    ex.k = 0;

    // The positive twin exists in the closure by construction; bundle its
    // chain with the reverse pair so the example trains both directions.
    Fact twin;
    twin.rel = *opposite_of(probe.rel);
    twin.subj = probe.subj;
    twin.obj = probe.obj;
    auto chain = chain_from_closure(closure, twin);
    ConstraintSet cs = chain_to_constraints(*chain);
    Question q_pos = Question::yn("t", twin);
    Question q_neg = Question::yn("tn", probe);
    cs.merge(reverse_pair_constraints(q_pos, Answer::yn(true), q_neg, Answer::yn(false)));
    ex.constraints = std::move(cs);
    result.examples.push_back(std::move(ex));
  }

  // --- FR questions over pairs with non-empty oracle answers.
  std::vector<std::pair<std::string, std::string>> fr_pairs;
  {
    std::set<std::pair<std::string, std::string>> seen;
    for (const Fact& f : closure.facts()) {
      seen.insert({f.subj, f.obj});
    }
    fr_pairs.assign(seen.begin(), seen.end());
  }
  for (int i = 0; i < n_fr && !fr_pairs.empty(); ++i) {
    const auto& [subj, obj] = fr_pairs[rng() % fr_pairs.size()];
    GeneratedExample ex;
    ex.question = Question::fr("ex" + std::to_string(qid++), subj, obj);
    std::set<Rel> rels;
    int depth = 0;
    std::optional<QChain> deepest;
    for (Rel r : all_relations()) {
      Fact f;
      f.rel = r;
      f.subj = subj;
      f.obj = obj;
      if (!closure.contains(f)) continue;
      rels.insert(r);
      auto chain = chain_from_closure(closure, f);
      int d = chain_depth(*chain);
      if (d >= depth) {
        depth = d;
        deepest = std::move(chain);
      }
    }
    ex.gold = Answer::fr(rels);
    ex.k = depth;
    ex.chain = std::move(deepest);
    ex.constraints = exact_label_constraints(ex.question, ex.gold);
    result.examples.push_back(std::move(ex));
  }

  return result;
}

Json generated_example_to_json(const GeneratedExample& ex, const Scene& scene) {
  Json j;
  j["scene"] = scene_to_json(scene);
  j["question"] = question_to_json(ex.question);
  j["gold"] = answer_to_json(ex.gold);
  j["chain"] = ex.chain ? chain_to_json(*ex.chain) : Json(nullptr);
  j["k"] = ex.k;
  j["constraints"] = constraint_set_to_json(ex.constraints);
  return j;
}

}  // namespace spatial
