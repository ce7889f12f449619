#include "spatial/json_io.hpp"

#include <fstream>

#include "spatial/errors.hpp"

namespace spatial {

namespace {

[[noreturn]] void schema_fail(const std::string& what) { throw SchemaError(what); }

std::string require_string(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_string()) {
    schema_fail(std::string("expected string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

}  // namespace

Json fact_to_json(const Fact& f) {
  Json j;
  j["rel"] = std::string(rel_token(f.rel));
  j["subj"] = f.subj;
  j["obj"] = f.obj;
  return j;
}

Fact fact_from_json(const Json& j) {
  std::string rel = require_string(j, "rel");
  auto r = rel_from_token(rel);
  if (!r) schema_fail("unknown relation token '" + rel + "'");
  std::string subj = require_string(j, "subj");
  std::string obj = require_string(j, "obj");
  if (subj == obj) schema_fail("reflexive fact " + rel + "(" + subj + "," + obj + ")");
  Fact f;
  f.rel = *r;
  f.subj = std::move(subj);
  f.obj = std::move(obj);
  return f;
}

Json entity_to_json(const Entity& e) {
  Json j;
  j["id"] = e.id;
  if (!e.attrs.empty()) {
    Json attrs;
    for (const auto& [k, v] : e.attrs) attrs[k] = v;
    j["attrs"] = attrs;
  }
  return j;
}

Entity entity_from_json(const Json& j) {
  Entity e;
  e.id = require_string(j, "id");
  if (j.contains("attrs")) {
    if (!j["attrs"].is_object()) schema_fail("entity 'attrs' must be an object");
    for (const auto& [k, v] : j["attrs"].items()) {
      if (!v.is_string()) schema_fail("attribute '" + k + "' must be a string");
      e.attrs[k] = v.get<std::string>();
    }
  }
  return e;
}

Json scene_to_json(const Scene& s) {
  Json j;
  j["entities"] = Json::array();
  for (const Entity& e : s.entities()) j["entities"].push_back(entity_to_json(e));
  j["facts"] = Json::array();
  for (const Fact& f : s.facts()) j["facts"].push_back(fact_to_json(f));
  return j;
}

Scene scene_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("entities") || !j["entities"].is_array() ||
      !j.contains("facts") || !j["facts"].is_array()) {
    schema_fail("scene must have 'entities' and 'facts' arrays");
  }
  Scene s;
  for (const auto& je : j["entities"]) s.add_entity(entity_from_json(je));
  try {
    for (const auto& jf : j["facts"]) s.add_fact(fact_from_json(jf));
  } catch (const UnknownEntityError& e) {
    schema_fail(e.what());
  }
  return s;
}

Json question_to_json(const Question& q) {
  Json j;
  j["id"] = q.id;
  if (q.type == QType::YN) {
    j["type"] = "YN";
    j["fact"] = fact_to_json(q.fact);
  } else {
    j["type"] = "FR";
    j["subj"] = q.subj;
    j["obj"] = q.obj;
  }
  return j;
}

Question question_from_json(const Json& j) {
  std::string id = require_string(j, "id");
  std::string type = require_string(j, "type");
  if (type == "YN") {
    if (!j.contains("fact")) schema_fail("YN question needs a 'fact'");
    return Question::yn(id, fact_from_json(j["fact"]));
  }
  if (type == "FR") {
    return Question::fr(id, require_string(j, "subj"), require_string(j, "obj"));
  }
  schema_fail("question 'type' must be YN or FR");
}

Json answer_to_json(const Answer& a) {
  if (a.type == QType::YN) return a.yes ? "yes" : "no";
  Json j = Json::array();
  for (Rel r : a.relations) j.push_back(std::string(rel_token(r)));
  return j;
}

Answer answer_from_json(const Json& j, QType type) {
  if (type == QType::YN) {
    if (!j.is_string() || (j != "yes" && j != "no")) schema_fail("YN answer must be \"yes\" or \"no\"");
    return Answer::yn(j == "yes");
  }
  if (!j.is_array()) schema_fail("FR answer must be an array of relation tokens");
  std::set<Rel> rels;
  for (const auto& t : j) {
    auto r = rel_from_token(t.get<std::string>());
    if (!r) schema_fail("unknown relation token in FR answer");
    rels.insert(*r);
  }
  return Answer::fr(std::move(rels));
}

Json chain_to_json(const QChain& c) {
  Json j;
  j["target"] = fact_to_json(c.target);
  j["steps"] = Json::array();
  for (const QChainStep& s : c.steps) {
    Json js;
    js["id"] = s.id;
    js["fact"] = fact_to_json(s.fact);
    if (s.rule_id.empty()) {
      js["rule"] = nullptr;
    } else {
      js["rule"] = s.rule_id;
    }
    js["premises"] = Json::array();
    for (const std::string& p : s.premises) js["premises"].push_back(p);
    j["steps"].push_back(std::move(js));
  }
  return j;
}

QChain chain_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("target") || !j.contains("steps") || !j["steps"].is_array()) {
    schema_fail("chain must have 'target' and 'steps'");
  }
  QChain c;
  c.target = fact_from_json(j["target"]);
  for (const auto& js : j["steps"]) {
    QChainStep s;
    s.id = require_string(js, "id");
    s.fact = fact_from_json(js.at("fact"));
    if (js.contains("rule") && !js["rule"].is_null()) s.rule_id = js["rule"].get<std::string>();
    if (js.contains("premises")) {
      for (const auto& p : js["premises"]) s.premises.push_back(p.get<std::string>());
    }
    c.steps.push_back(std::move(s));
  }
  if (c.steps.empty()) schema_fail("chain has no steps");
  return c;
}

Json closure_to_json(const Closure& c) {
  Json j;
  j["facts"] = Json::array();
  for (const Fact& f : c.facts()) {
    Json jf = fact_to_json(f);
    const Derivation* d = c.derivation_of(f);
    if (d != nullptr) {
      jf["rule"] = d->rule_id;
      jf["round"] = d->round;
      Json prem = Json::array();
      for (const Fact& p : d->premises) prem.push_back(render_fact_token(p));
      jf["premises"] = prem;
    }
    j["facts"].push_back(std::move(jf));
  }
  j["consistent"] = closure_consistent(c);
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

}  // namespace spatial
