#include <doctest.h>

#include "spatial/errors.hpp"
#include "spatial/fact.hpp"
#include "spatial/json_io.hpp"

using namespace spatial;

TEST_CASE("parse_fact on the canonical form") {
  Fact f = parse_fact("above(white,orange)");
  CHECK(f.rel == Rel::Above);
  CHECK(f.subj == "white");
  CHECK(f.obj == "orange");
}

TEST_CASE("parse_fact tolerates whitespace") {
  Fact f = parse_fact("left( a , b )");
  CHECK(f.rel == Rel::Left);
  CHECK(f.subj == "a");
  CHECK(f.obj == "b");
}

TEST_CASE("parse_fact error cases are distinct") {
  CHECK_THROWS_AS(parse_fact("inside(x,x)"), ReflexiveFactError);
  CHECK_THROWS_AS(parse_fact("sideways(a,b)"), UnknownRelationError);
  CHECK_THROWS_AS(parse_fact("above(a b)"), ParseError);
  CHECK_THROWS_AS(parse_fact("above(a,b) junk"), ParseError);
  CHECK_THROWS_AS(parse_fact("above(a,"), ParseError);
}

TEST_CASE("parse error reports a position") {
  try {
    parse_fact("above(a,a)");
    FAIL("expected throw");
  } catch (const ReflexiveFactError& e) {
    CHECK(e.pos == 6);
  }
}

TEST_CASE("render/parse round trip on every relation") {
  for (Rel r : all_relations()) {
    Fact f;
    f.rel = r;
    f.subj = "alpha";
    f.obj = "beta";
    CHECK(parse_fact(render_fact_token(f)) == f);
  }
}

TEST_CASE("scene rejects undeclared entities and duplicate ids") {
  Scene s;
  s.add_entity({"a", {}});
  CHECK_THROWS_AS(s.add_entity({"a", {}}), SchemaError);
  s.add_entity({"b", {}});
  s.add_fact(parse_fact("left(a,b)"));
  s.add_fact(parse_fact("left(a,b)"));  // duplicate is absorbed
  CHECK(s.facts().size() == 1);
  CHECK_THROWS_AS(s.add_fact(parse_fact("left(a,c)")), UnknownEntityError);
}

TEST_CASE("scene JSON round trip keeps the bit-exact field names") {
  Scene s;
  s.add_entity({"white", {}});
  s.add_entity({"orange", {{"color", "orange"}}});
  s.add_fact(parse_fact("above(white,orange)"));
  Json j = scene_to_json(s);
  CHECK(j["facts"][0]["rel"] == "above");
  CHECK(j["facts"][0]["subj"] == "white");
  CHECK(j["facts"][0]["obj"] == "orange");
  CHECK(j["entities"][0]["id"] == "white");
  Scene back = scene_from_json(j);
  CHECK(back == s);
}
