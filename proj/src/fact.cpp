#include "spatial/fact.hpp"

#include <cctype>

#include "spatial/errors.hpp"

namespace spatial {

Fact::Fact(Rel rel, std::string subj, std::string obj)
    : rel(rel), subj(std::move(subj)), obj(std::move(obj)) {
  if (this->subj == this->obj) {
    throw ReflexiveFactError("reflexive fact " + render_fact_token(*this), 0);
  }
}

std::strong_ordering Fact::operator<=>(const Fact& other) const {
  if (auto c = rel_token(rel) <=> rel_token(other.rel); c != 0) return c;
  if (auto c = subj <=> other.subj; c != 0) return c;
  return obj <=> other.obj;
}

std::string render_fact_token(const Fact& f) {
  std::string out;
  out += rel_token(f.rel);
  out += '(';
  out += f.subj;
  out += ',';
  out += f.obj;
  out += ')';
  return out;
}

namespace {

size_t skip_ws(const std::string& s, size_t pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  return pos;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

std::string read_ident(const std::string& s, size_t& pos, const char* what) {
  pos = skip_ws(s, pos);
  size_t start = pos;
  while (pos < s.size() && ident_char(s[pos])) ++pos;
  if (pos == start) throw ParseError(std::string("expected ") + what, start);
  return s.substr(start, pos - start);
}

void expect(const std::string& s, size_t& pos, char c) {
  pos = skip_ws(s, pos);
  if (pos >= s.size() || s[pos] != c) {
    throw ParseError(std::string("expected '") + c + "'", pos);
  }
  ++pos;
}

}  // namespace

Fact parse_fact(const std::string& text) {
  size_t pos = 0;
  size_t rel_pos = skip_ws(text, pos);
  std::string rel = read_ident(text, pos, "relation token");
  auto r = rel_from_token(rel);
  if (!r) throw UnknownRelationError("unknown relation '" + rel + "'", rel_pos);
  expect(text, pos, '(');
  size_t subj_pos = skip_ws(text, pos);
  std::string subj = read_ident(text, pos, "subject id");
  expect(text, pos, ',');
  std::string obj = read_ident(text, pos, "object id");
  expect(text, pos, ')');
  pos = skip_ws(text, pos);
  if (pos != text.size()) throw ParseError("trailing input after fact", pos);
  if (subj == obj) {
    throw ReflexiveFactError("reflexive fact " + rel + "(" + subj + "," + obj + ")", subj_pos);
  }
  Fact f;
  f.rel = *r;
  f.subj = std::move(subj);
  f.obj = std::move(obj);
  return f;
}

Scene::Scene(std::vector<Entity> entities, std::vector<Fact> facts) {
  for (auto& e : entities) add_entity(std::move(e));
  for (const auto& f : facts) add_fact(f);
}

bool Scene::has_entity(const std::string& id) const { return ids_.count(id) > 0; }

const Entity* Scene::find_entity(const std::string& id) const {
  for (const auto& e : entities_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

void Scene::add_entity(Entity e) {
  if (ids_.count(e.id)) throw SchemaError("duplicate entity id '" + e.id + "'");
  ids_.insert(e.id);
  entities_.push_back(std::move(e));
}

void Scene::add_fact(const Fact& f) {
  if (!has_entity(f.subj)) throw UnknownEntityError("fact references undeclared entity '" + f.subj + "'");
  if (!has_entity(f.obj)) throw UnknownEntityError("fact references undeclared entity '" + f.obj + "'");
  if (fact_set_.insert(f).second) facts_.push_back(f);
}

Question Question::yn(std::string id, Fact f) {
  Question q;
  q.type = QType::YN;
  q.id = std::move(id);
  q.fact = std::move(f);
  return q;
}

Question Question::fr(std::string id, std::string subj, std::string obj) {
  Question q;
  q.type = QType::FR;
  q.id = std::move(id);
  q.subj = std::move(subj);
  q.obj = std::move(obj);
  return q;
}

Answer Answer::yn(bool yes) {
  Answer a;
  a.type = QType::YN;
  a.yes = yes;
  return a;
}

Answer Answer::fr(std::set<Rel> rels) {
  Answer a;
  a.type = QType::FR;
  a.relations = std::move(rels);
  return a;
}

}  // namespace spatial
