#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spatial/json_io.hpp"
#include "spatial/qchain.hpp"

namespace spatial {

// Propositional AST over question truth-variables. And/Or take two or more
// operands, Implies exactly two, Not exactly one.
struct LogicExpr {
  enum class Kind : uint8_t { Var, Not, And, Or, Implies };
  Kind kind = Kind::Var;
  std::string var;              // Kind::Var only
  std::vector<LogicExpr> args;  // other kinds

  bool operator==(const LogicExpr& other) const = default;
};

LogicExpr lvar(std::string id);
LogicExpr lnot(LogicExpr e);
LogicExpr land(std::vector<LogicExpr> args);
LogicExpr lor(std::vector<LogicExpr> args);
LogicExpr limplies(LogicExpr a, LogicExpr b);

// Variable ids referenced anywhere in the expression, in first-seen order.
std::vector<std::string> expr_vars(const LogicExpr& e);

// Classical evaluation; `truth(id)` supplies variable values.
bool eval_boolean(const LogicExpr& e, const std::function<bool(const std::string&)>& truth);

// Prefix S-expression arrays: ["=>",["var","q1"],["var","q3"]], tokens
// {"not","and","or","=>","var"} exactly.
Json expr_to_json(const LogicExpr& e);
LogicExpr expr_from_json(const Json& j);

struct ConstraintQuestion {
  Question question;
  Answer gold;
};

struct Constraint {
  std::string id;
  // One of: symmetric, reverse, transitive, transitive_topo, exactL.
  std::string template_tag;
  LogicExpr expr;
};

// Constraints plus the questions they mention, self-contained so a trainer
// needs no other context. For FR questions the per-label truth-variable of
// relation r is "<question id>.<relation token>".
struct ConstraintSet {
  std::vector<ConstraintQuestion> questions;
  std::vector<Constraint> constraints;

  void merge(ConstraintSet other);
};

std::string fr_label_var(const std::string& question_id, Rel r);

// One implication per rule application: premises (conjoined when several)
// imply the conclusion. Single-premise steps are tagged symmetric,
// two-premise transitive, three-premise transitive_topo.
ConstraintSet chain_to_constraints(const QChain& chain);

// For a question pair over opposite relations on the same entity pair:
// q_pos => not q_neg and not q_pos => q_neg, tagged reverse.
ConstraintSet reverse_pair_constraints(const Question& q_pos, const Answer& gold_pos,
                                       const Question& q_neg, const Answer& gold_neg);

// For an FR question: not(and(A, B)) over the per-label variables of each of
// the five opposite relation pairs, tagged exactL.
ConstraintSet exact_label_constraints(const Question& fr_question, const Answer& gold);

Json constraint_set_to_json(const ConstraintSet& cs);
ConstraintSet constraint_set_from_json(const Json& j);

}  // namespace spatial
