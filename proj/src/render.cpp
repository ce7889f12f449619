#include "spatial/render.hpp"

#include <map>
#include <sstream>

#include "spatial/errors.hpp"
#include "spatial/rule.hpp"

namespace spatial {

namespace {

std::string_view nl_phrase(Rel r) {
  switch (r) {
    case Rel::Left: return "to the left of";
    case Rel::Right: return "to the right of";
    case Rel::Above: return "above";
    case Rel::Below: return "below";
    case Rel::Behind: return "behind";
    case Rel::Front: return "in front of";
    case Rel::Near: return "near";
    case Rel::Far: return "far from";
    case Rel::Disconnected: return "disconnected from";
    case Rel::Touch: return "touching";
    case Rel::Overlap: return "overlapping";
    case Rel::CoveredBy: return "covered by";
    case Rel::Inside: return "inside";
    case Rel::Cover: return "covering";
    case Rel::Contain: return "containing";
  }
  return "";
}

std::string lr_name(Rel r) {
  std::string name(rel_token(r));
  name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  return name;
}

std::string_view cos_glyph(Rel r) {
  switch (r) {
    case Rel::Left: return "<";
    case Rel::Right: return ">";
    case Rel::Above: return "↑";
    case Rel::Below: return "↓";
    case Rel::Near: return "~";
    case Rel::Touch: return "=";
    default:
      throw UnsupportedSymbolError("no chain-of-symbols glyph for relation '" +
                                   std::string(rel_token(r)) + "'");
  }
}

const Entity& scene_entity(const Scene& scene, const std::string& id) {
  const Entity* e = scene.find_entity(id);
  if (e == nullptr) throw UnknownEntityError("unknown entity '" + id + "'");
  return *e;
}

// "(large, red, square)" from the attributes, "(white)" for bare ids.
std::string cos_tuple(const Entity& e) {
  std::vector<std::string> parts;
  for (const char* key : {"size", "color", "shape"}) {
    auto it = e.attrs.find(key);
    if (it != e.attrs.end()) parts.push_back(it->second);
  }
  if (parts.empty()) parts.push_back(e.id);
  std::string out = "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  out += ")";
  return out;
}

std::string nl_sentence(const Fact& f, const Scene& scene, bool capitalize) {
  std::string subj = entity_descriptor(scene_entity(scene, f.subj));
  std::string obj = entity_descriptor(scene_entity(scene, f.obj));
  std::string out = capitalize ? "The " : "the ";
  out += subj;
  out += " is ";
  out += nl_phrase(f.rel);
  out += " the ";
  out += obj;
  out += ".";
  return out;
}

}  // namespace

std::string_view render_format_token(RenderFormat f) {
  switch (f) {
    case RenderFormat::NL: return "nl";
    case RenderFormat::CoT: return "cot";
    case RenderFormat::LR: return "lr";
    case RenderFormat::CoS: return "cos";
  }
  return "";
}

std::optional<RenderFormat> render_format_from_token(std::string_view token) {
  if (token == "nl") return RenderFormat::NL;
  if (token == "cot") return RenderFormat::CoT;
  if (token == "lr") return RenderFormat::LR;
  if (token == "cos") return RenderFormat::CoS;
  return std::nullopt;
}

std::string entity_descriptor(const Entity& e) {
  auto name = e.attrs.find("name");
  if (name != e.attrs.end()) return name->second;
  std::string out;
  for (const char* key : {"size", "color", "shape"}) {
    auto it = e.attrs.find(key);
    if (it == e.attrs.end()) continue;
    if (!out.empty()) out += ' ';
    out += it->second;
  }
  return out.empty() ? e.id : out;
}

std::string render_fact(const Fact& f, const Scene& scene, RenderFormat format) {
  switch (format) {
    case RenderFormat::NL:
    case RenderFormat::CoT:
      return nl_sentence(f, scene, true);
    case RenderFormat::LR: {
      std::string out = lr_name(f.rel);
      out += "(";
      out += entity_descriptor(scene_entity(scene, f.subj));
      out += ", ";
      out += entity_descriptor(scene_entity(scene, f.obj));
      out += ")";
      return out;
    }
    case RenderFormat::CoS: {
      std::string glyph(cos_glyph(f.rel));
      std::string out = cos_tuple(scene_entity(scene, f.subj));
      out += " ";
      out += glyph;
      out += " ";
      out += cos_tuple(scene_entity(scene, f.obj));
      return out;
    }
  }
  return "";
}

std::string render_chain(const QChain& chain, const Scene& scene, RenderFormat format) {
  std::map<std::string, const QChainStep*> by_id;
  for (const QChainStep& s : chain.steps) by_id[s.id] = &s;

  const RuleKB& kb = default_kb();
  auto category_name = [&](const std::string& rule_id) -> std::string {
    for (const Rule& r : kb.rules()) {
      if (r.id == rule_id) return std::string(rule_category_token(r.category));
    }
    // Loaded KBs fall back to the id itself.
    return rule_id;
  };

  std::ostringstream out;
  for (const QChainStep& step : chain.steps) {
    if (step.premises.empty()) continue;
    out << category_name(step.rule_id) << ": ";
    if (format == RenderFormat::NL || format == RenderFormat::CoT) {
      for (const std::string& pid : step.premises) {
        out << nl_sentence(by_id.at(pid)->fact, scene, true) << " ";
      }
      out << "Therefore, " << nl_sentence(step.fact, scene, false);
    } else {
      bool first = true;
      for (const std::string& pid : step.premises) {
        if (!first) out << " & ";
        out << render_fact(by_id.at(pid)->fact, scene, format);
        first = false;
      }
      out << " => " << render_fact(step.fact, scene, format);
    }
    out << "\n";
  }
  if (chain.steps.size() == 1) {
    // Asserted target: restate it.
    out << render_fact(chain.target, scene, format) << "\n";
  }
  out << "Answer: Yes\n";
  return out.str();
}

std::string render_story(const Scene& scene, StoryMode mode) {
  const auto& facts = scene.facts();
  if (mode == StoryMode::StepByStep) {
    std::string out;
    for (const Fact& f : facts) {
      out += nl_sentence(f, scene, true);
      out += "\n";
    }
    return out;
  }
  // Raw: two clauses per sentence, all on one line.
  std::string out;
  for (size_t i = 0; i < facts.size(); i += 2) {
    if (i) out += " ";
    if (i + 1 < facts.size()) {
      std::string first = nl_sentence(facts[i], scene, true);
      first.pop_back();  // drop the period before joining
      out += first;
      out += ", and ";
      out += nl_sentence(facts[i + 1], scene, false);
    } else {
      out += nl_sentence(facts[i], scene, true);
    }
  }
  if (!facts.empty()) out += "\n";
  return out;
}

Fact parse_nl_fact(const std::string& line, const Scene& scene) {
  std::map<std::string, std::string> by_descriptor;
  for (const Entity& e : scene.entities()) {
    auto [it, fresh] = by_descriptor.emplace(entity_descriptor(e), e.id);
    if (!fresh) throw ParseError("ambiguous descriptor '" + it->first + "'", 0);
  }

  std::string text = line;
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  if (text.substr(0, 4) != "The " || text.empty() || text.back() != '.') {
    throw ParseError("line does not match the fact template", 0);
  }
  text = text.substr(4, text.size() - 5);  // strip "The " and "."

  for (Rel r : all_relations()) {
    std::string marker = " is " + std::string(nl_phrase(r)) + " the ";
    size_t pos = text.find(marker);
    if (pos == std::string::npos) continue;
    std::string subj_desc = text.substr(0, pos);
    std::string obj_desc = text.substr(pos + marker.size());
    auto si = by_descriptor.find(subj_desc);
    auto oi = by_descriptor.find(obj_desc);
    if (si == by_descriptor.end() || oi == by_descriptor.end()) continue;
    Fact f;
    f.rel = r;
    f.subj = si->second;
    f.obj = oi->second;
    if (f.subj == f.obj) throw ParseError("reflexive fact in line", 0);
    return f;
  }
  throw ParseError("no relation phrase matched the line", 0);
}

}  // namespace spatial
