#include <doctest.h>

#include <fstream>

#include "spatial/errors.hpp"
#include "spatial/rule.hpp"

using namespace spatial;

namespace {

bool kb_has_rule(const RuleKB& kb, const std::string& premises, const std::string& conclusion) {
  for (const Rule& r : kb.rules()) {
    std::string p;
    for (const Pattern& pat : r.premises) {
      if (!p.empty()) p += " & ";
      p += render_pattern(pat);
    }
    if (p == premises && render_pattern(r.conclusion) == conclusion) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("default kb carries the full rule inventory") {
  const RuleKB& kb = default_kb();
  CHECK(kb.size() == 79);

  int converse = 0, symmetric = 0, transitive = 0, topo = 0;
  for (const Rule& r : kb.rules()) {
    switch (r.category) {
      case RuleCategory::Converse: ++converse; break;
      case RuleCategory::Symmetric: ++symmetric; break;
      case RuleCategory::Transitive: ++transitive; break;
      case RuleCategory::TransitiveTopo: ++topo; break;
    }
  }
  CHECK(converse == 10);
  CHECK(symmetric == 5);
  CHECK(transitive == 28);
  CHECK(topo == 36);
}

// Every row of the source rule table maps onto exactly one rule.
TEST_CASE("table coverage: converse and symmetric rows") {
  const RuleKB& kb = default_kb();
  const std::pair<const char*, const char*> converse_rows[] = {
      {"above(x,y)", "below(y,x)"},     {"below(x,y)", "above(y,x)"},
      {"left(x,y)", "right(y,x)"},      {"right(x,y)", "left(y,x)"},
      {"front(x,y)", "behind(y,x)"},    {"behind(x,y)", "front(y,x)"},
      {"coveredby(x,y)", "cover(y,x)"}, {"cover(x,y)", "coveredby(y,x)"},
      {"inside(x,y)", "contain(y,x)"},  {"contain(x,y)", "inside(y,x)"},
  };
  for (const auto& [p, c] : converse_rows) CHECK(kb_has_rule(kb, p, c));

  for (const char* rel : {"near", "far", "touch", "disconnected", "overlap"}) {
    std::string p = std::string(rel) + "(x,y)";
    std::string c = std::string(rel) + "(y,x)";
    CHECK(kb_has_rule(kb, p, c));
  }
}

TEST_CASE("table coverage: transitivity rows") {
  const RuleKB& kb = default_kb();
  for (const char* rel : {"left", "right", "above", "below", "behind", "front", "inside",
                          "contain"}) {
    std::string p = std::string(rel) + "(x,y) & " + rel + "(y,z)";
    std::string c = std::string(rel) + "(x,z)";
    CHECK(kb_has_rule(kb, p, c));
  }
  CHECK(kb_has_rule(kb, "inside(x,y) & coveredby(y,z)", "inside(x,z)"));
  CHECK(kb_has_rule(kb, "contain(x,y) & cover(y,z)", "contain(x,z)"));
  for (const char* head : {"inside", "coveredby"}) {
    for (const char* rel : {"left", "right", "above", "below", "behind", "front", "near", "far",
                            "disconnected"}) {
      std::string p = std::string(head) + "(x,y) & " + rel + "(y,z)";
      std::string c = std::string(rel) + "(x,z)";
      CHECK(kb_has_rule(kb, p, c));
    }
  }
}

TEST_CASE("containment lifting family present in both directions") {
  const RuleKB& kb = default_kb();
  CHECK(kb_has_rule(kb, "inside(x,y) & inside(h,z) & left(y,z)", "left(x,h)"));
  CHECK(kb_has_rule(kb, "coveredby(x,y) & coveredby(h,z) & far(y,z)", "far(x,h)"));
  CHECK(kb_has_rule(kb, "contain(y,x) & contain(z,h) & near(y,z)", "near(x,h)"));
  CHECK(kb_has_rule(kb, "cover(y,x) & cover(z,h) & disconnected(y,z)", "disconnected(x,h)"));
}

TEST_CASE("spot checks named in the contract") {
  const RuleKB& kb = default_kb();
  CHECK(kb_has_rule(kb, "above(x,y)", "below(y,x)"));
  CHECK(kb_has_rule(kb, "coveredby(x,y) & far(y,z)", "far(x,z)"));
  CHECK(kb_has_rule(kb, "inside(x,y) & inside(h,z) & left(y,z)", "left(x,h)"));
}

TEST_CASE("every converse rule has its mirror") {
  const RuleKB& kb = default_kb();
  for (const Rule& r : kb.rules()) {
    if (r.category != RuleCategory::Converse) continue;
    std::string mirrored_premise = render_pattern(Pattern{r.conclusion.rel, Var::X, Var::Y});
    std::string mirrored_conclusion = render_pattern(Pattern{r.premises[0].rel, Var::Y, Var::X});
    CHECK(kb_has_rule(kb, mirrored_premise, mirrored_conclusion));
  }
}

TEST_CASE("rule ids are unique and conclusions stay in the vocabulary") {
  const RuleKB& kb = default_kb();
  std::set<std::string> ids;
  for (const Rule& r : kb.rules()) {
    CHECK(ids.insert(r.id).second);
    CHECK(rel_from_token(rel_token(r.conclusion.rel)).has_value());
  }
}

TEST_CASE("validate_kb is clean on the default kb") {
  CHECK(validate_kb(default_kb()).empty());
}

TEST_CASE("premise index is consistent with the rule list") {
  const RuleKB& kb = default_kb();
  for (Rel r : all_relations()) {
    std::set<size_t> indexed(kb.rules_with_premise(r).begin(), kb.rules_with_premise(r).end());
    std::set<size_t> expected;
    for (size_t i = 0; i < kb.rules().size(); ++i) {
      for (const Pattern& p : kb.rules()[i].premises) {
        if (p.rel == r) expected.insert(i);
      }
    }
    CHECK(indexed == expected);
  }
  // every relation feeds at least one rule in the built-in KB
  for (Rel r : all_relations()) CHECK(!kb.rules_with_premise(r).empty());
}

TEST_CASE("validate_kb flags a converse rule without its mirror") {
  Rule r;
  r.id = "conv-above";
  r.category = RuleCategory::Converse;
  r.premises = {parse_pattern("above(x,y)")};
  r.conclusion = parse_pattern("below(y,x)");
  RuleKB kb({r});
  auto diags = validate_kb(kb);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].kind == Diagnostic::Kind::MissingMirror);
}

TEST_CASE("validate_kb flags duplicates") {
  Rule a;
  a.id = "sym-near";
  a.category = RuleCategory::Symmetric;
  a.premises = {parse_pattern("near(x,y)")};
  a.conclusion = parse_pattern("near(y,x)");
  Rule b = a;
  b.id = "sym-near-2";
  RuleKB kb({a, b});
  auto diags = validate_kb(kb);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].kind == Diagnostic::Kind::Duplicate);
}

TEST_CASE("parse_kb_json accepts the documented format") {
  RuleKB kb = parse_kb_json(R"json({"rules":[{"id":"conv-above","category":"converse",
      "premises":["above(x,y)"],"conclusion":"below(y,x)"}]})json");
  CHECK(kb.size() == 1);
  CHECK(kb.rules()[0].id == "conv-above");
}

TEST_CASE("empty rule list is a valid empty kb") {
  RuleKB kb = parse_kb_json(R"json({"rules":[]})json");
  CHECK(kb.size() == 0);
  CHECK(validate_kb(kb).empty());
}

TEST_CASE("unsafe rules are rejected with the unbound variable") {
  try {
    parse_kb_json(R"json({"rules":[{"id":"bad","category":"transitive",
        "premises":["left(x,y)","left(y,x)"],"conclusion":"left(x,z)"}]})json");
    FAIL("expected throw");
  } catch (const SchemaError&) {
    // transitive shape check fires first for this premise list
  } catch (const UnsafeRuleError& e) {
    CHECK(e.variable == "z");
  }
}

TEST_CASE("unbound conclusion variable names the culprit") {
  Rule r;
  r.id = "bad";
  r.category = RuleCategory::TransitiveTopo;
  r.premises = {parse_pattern("inside(x,y)"), parse_pattern("inside(h,z)"),
                parse_pattern("left(y,z)")};
  r.conclusion = parse_pattern("left(x,h)");
  CHECK_NOTHROW(check_rule(r));
  r.premises[1] = parse_pattern("inside(x,z)");
  try {
    check_rule(r);
    FAIL("expected throw");
  } catch (const UnsafeRuleError& e) {
    CHECK(e.variable == "h");
  }
}

TEST_CASE("unknown relation tokens in rule files are rejected") {
  CHECK_THROWS_AS(parse_kb_json(R"json({"rules":[{"id":"r","category":"converse",
      "premises":["sideways(x,y)"],"conclusion":"left(y,x)"}]})json"),
                  SchemaError);
}

TEST_CASE("load_kb reports missing files") {
  CHECK_THROWS_AS(load_kb("/nonexistent/rules.json"), IoError);
}
