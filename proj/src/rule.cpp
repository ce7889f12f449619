#include "spatial/rule.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spatial/errors.hpp"

namespace spatial {

std::string_view rule_category_token(RuleCategory c) {
  switch (c) {
    case RuleCategory::Converse: return "converse";
    case RuleCategory::Symmetric: return "symmetric";
    case RuleCategory::Transitive: return "transitive";
    case RuleCategory::TransitiveTopo: return "transitive_topo";
  }
  return "";
}

std::optional<RuleCategory> rule_category_from_token(std::string_view token) {
  if (token == "converse") return RuleCategory::Converse;
  if (token == "symmetric") return RuleCategory::Symmetric;
  if (token == "transitive") return RuleCategory::Transitive;
  if (token == "transitive_topo") return RuleCategory::TransitiveTopo;
  return std::nullopt;
}

std::string_view var_token(Var v) {
  switch (v) {
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::Z: return "z";
    case Var::H: return "h";
  }
  return "";
}

std::optional<Var> var_from_token(std::string_view token) {
  if (token == "x") return Var::X;
  if (token == "y") return Var::Y;
  if (token == "z") return Var::Z;
  if (token == "h") return Var::H;
  return std::nullopt;
}

std::string render_pattern(const Pattern& p) {
  std::string out;
  out += rel_token(p.rel);
  out += '(';
  out += var_token(p.a);
  out += ',';
  out += var_token(p.b);
  out += ')';
  return out;
}

Pattern parse_pattern(const std::string& text) {
  // Reuse the fact grammar, then reinterpret the ids as variables.
  Fact f = parse_fact(text);
  auto a = var_from_token(f.subj);
  auto b = var_from_token(f.obj);
  if (!a) throw ParseError("pattern variable must be one of x,y,z,h, got '" + f.subj + "'", 0);
  if (!b) throw ParseError("pattern variable must be one of x,y,z,h, got '" + f.obj + "'", 0);
  return Pattern{f.rel, *a, *b};
}

void check_rule(const Rule& rule) {
  size_t n = rule.premises.size();
  switch (rule.category) {
    case RuleCategory::Converse:
    case RuleCategory::Symmetric:
      if (n != 1) throw SchemaError("rule '" + rule.id + "': converse/symmetric rules take 1 premise");
      if (rule.conclusion.a != rule.premises[0].b || rule.conclusion.b != rule.premises[0].a) {
        throw SchemaError("rule '" + rule.id + "': conclusion must swap the premise arguments");
      }
      break;
    case RuleCategory::Transitive: {
      if (n != 2) throw SchemaError("rule '" + rule.id + "': transitive rules take 2 premises");
      const Pattern& p0 = rule.premises[0];
      const Pattern& p1 = rule.premises[1];
      if (p0.b != p1.a || rule.conclusion.a != p0.a || rule.conclusion.b != p1.b) {
        throw SchemaError("rule '" + rule.id + "': transitive rules must chain (x,y),(y,z) -> (x,z)");
      }
      break;
    }
    case RuleCategory::TransitiveTopo:
      if (n != 3) throw SchemaError("rule '" + rule.id + "': transitive_topo rules take 3 premises");
      break;
  }
  for (const Pattern& p : rule.premises) {
    if (p.a == p.b) throw SchemaError("rule '" + rule.id + "': reflexive premise " + render_pattern(p));
  }
  if (rule.conclusion.a == rule.conclusion.b) {
    throw SchemaError("rule '" + rule.id + "': reflexive conclusion");
  }
  // Safety: every conclusion variable must be bound by some premise.
  for (Var v : {rule.conclusion.a, rule.conclusion.b}) {
    bool bound = false;
    for (const Pattern& p : rule.premises) {
      if (p.a == v || p.b == v) bound = true;
    }
    if (!bound) {
      throw UnsafeRuleError(
          "rule '" + rule.id + "': conclusion variable '" + std::string(var_token(v)) + "' is unbound",
          std::string(var_token(v)));
    }
  }
}

RuleKB::RuleKB(std::vector<Rule> rules) : rules_(std::move(rules)) {
  std::set<std::string> ids;
  for (size_t i = 0; i < rules_.size(); ++i) {
    const Rule& r = rules_[i];
    check_rule(r);
    if (!ids.insert(r.id).second) throw SchemaError("duplicate rule id '" + r.id + "'");
    std::set<Rel> seen;
    for (const Pattern& p : r.premises) {
      if (seen.insert(p.rel).second) by_premise_rel_[static_cast<size_t>(p.rel)].push_back(i);
    }
  }
}

const std::vector<size_t>& RuleKB::rules_with_premise(Rel r) const {
  return by_premise_rel_[static_cast<size_t>(r)];
}

namespace {

constexpr Var X = Var::X;
constexpr Var Y = Var::Y;
constexpr Var Z = Var::Z;
constexpr Var H = Var::H;

Rule conv(Rel from, Rel to) {
  Rule r;
  r.id = "conv-" + std::string(rel_token(from));
  r.category = RuleCategory::Converse;
  r.premises = {Pattern{from, X, Y}};
  r.conclusion = Pattern{to, Y, X};
  return r;
}

Rule sym(Rel rel) {
  Rule r;
  r.id = "sym-" + std::string(rel_token(rel));
  r.category = RuleCategory::Symmetric;
  r.premises = {Pattern{rel, X, Y}};
  r.conclusion = Pattern{rel, Y, X};
  return r;
}

Rule trans(Rel rel) {
  Rule r;
  r.id = "trans-" + std::string(rel_token(rel));
  r.category = RuleCategory::Transitive;
  r.premises = {Pattern{rel, X, Y}, Pattern{rel, Y, Z}};
  r.conclusion = Pattern{rel, X, Z};
  return r;
}

Rule trans2(Rel first, Rel second, Rel out) {
  Rule r;
  r.id = "trans-" + std::string(rel_token(first)) + "-" + std::string(rel_token(second));
  r.category = RuleCategory::Transitive;
  r.premises = {Pattern{first, X, Y}, Pattern{second, Y, Z}};
  r.conclusion = Pattern{out, X, Z};
  return r;
}

// inside(x,y) & inside(h,z) & rel(y,z) -> rel(x,h): a relation between two
// containers lifts to their members.
Rule topo_member(Rel containment, Rel rel) {
  Rule r;
  r.id = "topo-" + std::string(rel_token(containment)) + "-" + std::string(rel_token(rel));
  r.category = RuleCategory::TransitiveTopo;
  r.premises = {Pattern{containment, X, Y}, Pattern{containment, H, Z}, Pattern{rel, Y, Z}};
  r.conclusion = Pattern{rel, X, H};
  return r;
}

// contain(y,x) & contain(z,h) & rel(y,z) -> rel(x,h): the same lift stated
// from the containers' side.
Rule topo_container(Rel containment, Rel rel) {
  Rule r;
  r.id = "topo-" + std::string(rel_token(containment)) + "-" + std::string(rel_token(rel));
  r.category = RuleCategory::TransitiveTopo;
  r.premises = {Pattern{containment, Y, X}, Pattern{containment, Z, H}, Pattern{rel, Y, Z}};
  r.conclusion = Pattern{rel, X, H};
  return r;
}

RuleKB build_default_kb() {
  std::vector<Rule> rules;

  rules.push_back(conv(Rel::Above, Rel::Below));
  rules.push_back(conv(Rel::Below, Rel::Above));
  rules.push_back(conv(Rel::Left, Rel::Right));
  rules.push_back(conv(Rel::Right, Rel::Left));
  rules.push_back(conv(Rel::Front, Rel::Behind));
  rules.push_back(conv(Rel::Behind, Rel::Front));
  rules.push_back(conv(Rel::CoveredBy, Rel::Cover));
  rules.push_back(conv(Rel::Cover, Rel::CoveredBy));
  rules.push_back(conv(Rel::Inside, Rel::Contain));
  rules.push_back(conv(Rel::Contain, Rel::Inside));

  for (Rel r : {Rel::Near, Rel::Far, Rel::Touch, Rel::Disconnected, Rel::Overlap}) {
    rules.push_back(sym(r));
  }

  for (Rel r : {Rel::Left, Rel::Right, Rel::Above, Rel::Below, Rel::Behind, Rel::Front,
                Rel::Inside, Rel::Contain}) {
    rules.push_back(trans(r));
  }
  rules.push_back(trans2(Rel::Inside, Rel::CoveredBy, Rel::Inside));
  rules.push_back(trans2(Rel::Contain, Rel::Cover, Rel::Contain));

  const Rel liftable[] = {Rel::Left, Rel::Right, Rel::Above,  Rel::Below, Rel::Behind,
                          Rel::Front, Rel::Near, Rel::Far, Rel::Disconnected};
  for (Rel r : liftable) rules.push_back(trans2(Rel::Inside, r, r));
  for (Rel r : liftable) rules.push_back(trans2(Rel::CoveredBy, r, r));

  for (Rel r : liftable) rules.push_back(topo_member(Rel::Inside, r));
  for (Rel r : liftable) rules.push_back(topo_member(Rel::CoveredBy, r));
  for (Rel r : liftable) rules.push_back(topo_container(Rel::Contain, r));
  for (Rel r : liftable) rules.push_back(topo_container(Rel::Cover, r));

  return RuleKB(std::move(rules));
}

}  // namespace

const RuleKB& default_kb() {
  static const RuleKB kb = build_default_kb();
  return kb;
}

RuleKB parse_kb_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("rule file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_array()) {
    throw SchemaError("rule file must be an object with a 'rules' array");
  }
  std::vector<Rule> rules;
  size_t index = 0;
  for (const auto& jr : doc["rules"]) {
    try {
      if (!jr.is_object()) throw SchemaError("rule must be an object");
      Rule r;
      r.id = jr.at("id").get<std::string>();
      auto cat = rule_category_from_token(jr.at("category").get<std::string>());
      if (!cat) throw SchemaError("unknown category '" + jr.at("category").get<std::string>() + "'");
      r.category = *cat;
      for (const auto& jp : jr.at("premises")) {
        r.premises.push_back(parse_pattern(jp.get<std::string>()));
      }
      r.conclusion = parse_pattern(jr.at("conclusion").get<std::string>());
      rules.push_back(std::move(r));
    } catch (const UnsafeRuleError&) {
      throw;
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("rule #" + std::to_string(index) + ": " + e.what());
    } catch (const Error& e) {
      throw SchemaError("rule #" + std::to_string(index) + ": " + e.what());
    }
    ++index;
  }
  return RuleKB(std::move(rules));
}

RuleKB load_kb(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rule file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_kb_json(ss.str());
}

std::vector<Diagnostic> validate_kb(const RuleKB& kb) {
  std::vector<Diagnostic> out;

  std::map<std::tuple<RuleCategory, std::vector<Pattern>, Pattern>, std::string> seen;
  std::set<Rel> mentioned;
  for (const Rule& r : kb.rules()) {
    auto key = std::make_tuple(r.category, r.premises, r.conclusion);
    auto [it, fresh] = seen.emplace(key, r.id);
    if (!fresh) {
      out.push_back({Diagnostic::Kind::Duplicate, r.id,
                     "rule '" + r.id + "' duplicates '" + it->second + "'"});
    }
    for (const Pattern& p : r.premises) mentioned.insert(p.rel);
    mentioned.insert(r.conclusion.rel);
  }

  for (const Rule& r : kb.rules()) {
    if (r.category != RuleCategory::Converse) continue;
    Rel from = r.premises[0].rel;
    Rel to = r.conclusion.rel;
    bool mirrored = false;
    for (const Rule& other : kb.rules()) {
      if (other.category == RuleCategory::Converse && other.premises[0].rel == to &&
          other.conclusion.rel == from) {
        mirrored = true;
        break;
      }
    }
    if (!mirrored) {
      out.push_back({Diagnostic::Kind::MissingMirror, r.id,
                     "converse rule '" + r.id + "' has no mirror " + std::string(rel_token(to)) +
                         " => " + std::string(rel_token(from))});
    }
  }

  for (Rel r : all_relations()) {
    if (converse_of(r) != r || !mentioned.count(r)) continue;
    bool has_self = false;
    for (const Rule& rule : kb.rules()) {
      if (rule.category == RuleCategory::Symmetric && rule.premises[0].rel == r &&
          rule.conclusion.rel == r) {
        has_self = true;
        break;
      }
    }
    if (!has_self) {
      out.push_back({Diagnostic::Kind::MissingSelfRule, "",
                     "symmetric relation '" + std::string(rel_token(r)) + "' has no self-rule"});
    }
  }

  return out;
}

}  // namespace spatial
