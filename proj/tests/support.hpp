#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "spatial/closure.hpp"
#include "spatial/fact.hpp"
#include "spatial/rule.hpp"

namespace spatial::testing {

// The worked three-entity fixture: white above orange, red above white.
inline Scene worked_scene() {
  Scene s;
  s.add_entity({"white", {}});
  s.add_entity({"orange", {}});
  s.add_entity({"red", {}});
  s.add_fact(parse_fact("above(white,orange)"));
  s.add_fact(parse_fact("above(red,white)"));
  return s;
}

// Independent fixpoint oracle: repeated full rescans enumerating every
// variable binding of every rule, no deltas, no join indexes. Entity ids
// are interned to keep 200-scene sweeps fast, but the algorithm stays the
// textbook one.
inline std::set<Fact> naive_closure(const Scene& scene, const RuleKB& kb) {
  std::vector<std::string> ids;
  std::map<std::string, int> index;
  for (const Entity& e : scene.entities()) {
    index.emplace(e.id, static_cast<int>(ids.size()));
    ids.push_back(e.id);
  }
  int n = static_cast<int>(ids.size());
  auto encode = [](int rel, int s, int o) {
    return static_cast<uint32_t>((rel << 20) | (s << 10) | o);
  };

  std::set<uint32_t> facts;
  for (const Fact& f : scene.facts()) {
    facts.insert(encode(static_cast<int>(f.rel), index.at(f.subj), index.at(f.obj)));
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& rule : kb.rules()) {
      // Distinct variables used by this rule.
      std::vector<int> vars;
      auto note = [&](Var v) {
        int i = static_cast<int>(v);
        for (int seen : vars) {
          if (seen == i) return;
        }
        vars.push_back(i);
      };
      for (const Pattern& p : rule.premises) {
        note(p.a);
        note(p.b);
      }

      std::array<int, 4> binding{-1, -1, -1, -1};
      size_t combos = 1;
      for (size_t i = 0; i < vars.size(); ++i) combos *= static_cast<size_t>(n);
      for (size_t c = 0; c < combos; ++c) {
        size_t rest = c;
        for (int v : vars) {
          binding[v] = static_cast<int>(rest % n);
          rest /= n;
        }
        bool ok = true;
        for (const Pattern& p : rule.premises) {
          int s = binding[static_cast<int>(p.a)];
          int o = binding[static_cast<int>(p.b)];
          if (s == o || !facts.count(encode(static_cast<int>(p.rel), s, o))) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        int s = binding[static_cast<int>(rule.conclusion.a)];
        int o = binding[static_cast<int>(rule.conclusion.b)];
        if (s == o) continue;
        if (facts.insert(encode(static_cast<int>(rule.conclusion.rel), s, o)).second) {
          changed = true;
        }
      }
    }
  }

  std::set<Fact> out;
  for (uint32_t f : facts) {
    Fact fact;
    fact.rel = static_cast<Rel>(f >> 20);
    fact.subj = ids[(f >> 10) & 0x3ff];
    fact.obj = ids[f & 0x3ff];
    out.insert(std::move(fact));
  }
  return out;
}

inline std::set<Fact> closure_fact_set(const Closure& c) {
  return std::set<Fact>(c.facts().begin(), c.facts().end());
}

}  // namespace spatial::testing
