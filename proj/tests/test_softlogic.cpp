#include <doctest.h>

#include <cmath>
#include <random>

#include "spatial/errors.hpp"
#include "spatial/softlogic.hpp"

using namespace spatial;

TEST_CASE("implication follows min(1, b/a)") {
  ProbAssignment p{{"q1", 0.9}, {"q3", 0.45}};
  SoftEval e = eval_product(limplies(lvar("q1"), lvar("q3")), p);
  CHECK(e.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e.violation == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("conjunction at the boolean boundary") {
  ProbAssignment p{{"a", 1.0}, {"b", 1.0}};
  CHECK(eval_product(land({lvar("a"), lvar("b")}), p).value == 1.0);
  p["b"] = 0.0;
  CHECK(eval_product(land({lvar("a"), lvar("b")}), p).value == 0.0);
}

TEST_CASE("satisfied implication has zero gradient") {
  ProbAssignment p{{"q3", 0.8}, {"q4", 0.9}, {"t", 0.9}};
  LogicExpr e = limplies(land({lvar("q3"), lvar("q4")}), lvar("t"));
  SoftEval ev = eval_product(e, p);
  CHECK(ev.value == 1.0);
  for (const auto& [var, g] : ev.grad) CHECK(g == 0.0);
  CHECK(grad_check(e, p, 1e-6) <= 1e-5);
}

TEST_CASE("violation forms") {
  ProbAssignment p{{"a", 1.0}, {"b", 0.0}};
  CHECK(violation(limplies(lvar("a"), lvar("b")), p) == 1.0);
  p = {{"left", 0.7}, {"right", 0.6}};
  CHECK(violation(lnot(land({lvar("left"), lvar("right")})), p) ==
        doctest::Approx(0.42).epsilon(1e-12));
  p = {{"a", 0.25}, {"b", 0.5}};
  CHECK(violation(limplies(lvar("a"), lvar("b")), p) == 0.0);
}

TEST_CASE("negation and disjunction formulas") {
  ProbAssignment p{{"a", 0.3}, {"b", 0.4}};
  CHECK(eval_product(lnot(lvar("a")), p).value == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(eval_product(lor({lvar("a"), lvar("b")}), p).value ==
        doctest::Approx(0.3 + 0.4 - 0.12).epsilon(1e-12));
}

TEST_CASE("implication is defined at a=0 as satisfied") {
  ProbAssignment p{{"a", 0.0}, {"b", 0.0}};
  SoftEval e = eval_product(limplies(lvar("a"), lvar("b")), p);
  CHECK(e.value == 1.0);
  CHECK(std::isfinite(e.grad.at("a")));
  CHECK(std::isfinite(e.grad.at("b")));
}

TEST_CASE("missing variable and out-of-range probabilities throw") {
  ProbAssignment p{{"a", 0.5}};
  CHECK_THROWS_AS(eval_product(limplies(lvar("a"), lvar("b")), p), MissingVariableError);
  p["a"] = 1.5;
  CHECK_THROWS_AS(eval_product(lvar("a"), p), ProbabilityOutOfRangeError);
}

namespace {

LogicExpr random_expr(std::mt19937_64& rng, const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 4);
  switch (pick(rng)) {
    case 0:
      return lvar(vars[rng() % vars.size()]);
    case 1:
      return lnot(random_expr(rng, vars, depth - 1));
    case 2: {
      std::vector<LogicExpr> args;
      size_t n = 2 + rng() % 2;
      for (size_t i = 0; i < n; ++i) args.push_back(random_expr(rng, vars, depth - 1));
      return land(std::move(args));
    }
    case 3: {
      std::vector<LogicExpr> args;
      size_t n = 2 + rng() % 2;
      for (size_t i = 0; i < n; ++i) args.push_back(random_expr(rng, vars, depth - 1));
      return lor(std::move(args));
    }
    default:
      return limplies(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
  }
}

}  // namespace

TEST_CASE("gradients match finite differences on seeded random expressions") {
  std::mt19937_64 rng(20240901);
  std::vector<std::string> vars{"a", "b", "c", "d"};
  std::uniform_real_distribution<double> prob(0.05, 0.95);
  int checked = 0;
  double worst = 0.0;
  for (int i = 0; i < 400 && checked < 250; ++i) {
    LogicExpr e = random_expr(rng, vars, 3);
    ProbAssignment p;
    for (const std::string& v : vars) p[v] = prob(rng);
    double err;
    try {
      err = grad_check(e, p, 1e-6);
    } catch (const KinkPointError&) {
      continue;  // resample; kinks are excluded by contract
    }
    worst = std::max(worst, err);
    ++checked;
  }
  CHECK(checked >= 250);
  CHECK(worst <= 1e-5);
}

TEST_CASE("boolean agreement on every corner") {
  std::mt19937_64 rng(7);
  std::vector<std::string> vars{"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    LogicExpr e = random_expr(rng, vars, 3);
    for (int corner = 0; corner < 8; ++corner) {
      ProbAssignment p;
      for (size_t v = 0; v < vars.size(); ++v) {
        p[vars[v]] = (corner >> v) & 1 ? 1.0 : 0.0;
      }
      bool expected = eval_boolean(e, [&](const std::string& v) { return p.at(v) == 1.0; });
      CHECK(eval_product(e, p).value == (expected ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("values and violations stay in [0,1] with no NaN/Inf") {
  std::mt19937_64 rng(33);
  std::vector<std::string> vars{"a", "b", "c"};
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    LogicExpr e = random_expr(rng, vars, 3);
    ProbAssignment p;
    for (const std::string& v : vars) p[v] = prob(rng);
    SoftEval ev = eval_product(e, p);
    CHECK(std::isfinite(ev.value));
    CHECK(ev.value >= 0.0);
    CHECK(ev.value <= 1.0);
    CHECK(ev.violation == 1.0 - ev.value);
    for (const auto& [var, g] : ev.grad) CHECK(std::isfinite(g));
  }
}

TEST_CASE("and/or are order independent under product semantics") {
  ProbAssignment p{{"a", 0.3}, {"b", 0.7}, {"c", 0.9}};
  double abc = eval_product(lor({lvar("a"), lvar("b"), lvar("c")}), p).value;
  double cba = eval_product(lor({lvar("c"), lvar("b"), lvar("a")}), p).value;
  CHECK(abc == doctest::Approx(cba).epsilon(1e-15));
}

TEST_CASE("monotonicity in the consequent and the conjuncts") {
  ProbAssignment p{{"a", 0.8}, {"b", 0.2}};
  double before = eval_product(limplies(lvar("a"), lvar("b")), p).value;
  p["b"] = 0.6;
  double after = eval_product(limplies(lvar("a"), lvar("b")), p).value;
  CHECK(after >= before);

  ProbAssignment q{{"x", 0.3}, {"y", 0.5}};
  double small = eval_product(land({lvar("x"), lvar("y")}), q).value;
  q["x"] = 0.9;
  CHECK(eval_product(land({lvar("x"), lvar("y")}), q).value >= small);
}

TEST_CASE("grad_check guards kinks and boundary probabilities") {
  ProbAssignment p{{"a", 0.5}, {"b", 0.5}};
  CHECK_THROWS_AS(grad_check(limplies(lvar("a"), lvar("b")), p, 1e-6), KinkPointError);
  ProbAssignment q{{"a", 0.5}, {"b", 1.0}};
  CHECK_THROWS_AS(grad_check(limplies(lvar("a"), lvar("b")), q, 1e-6),
                  ProbabilityOutOfRangeError);
}

TEST_CASE("single-conjunct and over one var has unit gradient") {
  ProbAssignment p{{"a", 0.5}};
  SoftEval one = eval_product(land({lvar("a")}), p);
  CHECK(one.value == 0.5);
  CHECK(one.grad.at("a") == 1.0);

  SoftEval sq = eval_product(land({lvar("a"), lvar("a")}), p);
  // a*a at 0.5: value 0.25, gradient 2a = 1 exactly.
  CHECK(sq.value == 0.25);
  CHECK(sq.grad.at("a") == 1.0);
}
