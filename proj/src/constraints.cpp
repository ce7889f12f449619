#include "spatial/constraints.hpp"

#include <set>

#include "spatial/errors.hpp"

namespace spatial {

LogicExpr lvar(std::string id) {
  LogicExpr e;
  e.kind = LogicExpr::Kind::Var;
  e.var = std::move(id);
  return e;
}

LogicExpr lnot(LogicExpr arg) {
  LogicExpr e;
  e.kind = LogicExpr::Kind::Not;
  e.args.push_back(std::move(arg));
  return e;
}

LogicExpr land(std::vector<LogicExpr> args) {
  LogicExpr e;
  e.kind = LogicExpr::Kind::And;
  e.args = std::move(args);
  return e;
}

LogicExpr lor(std::vector<LogicExpr> args) {
  LogicExpr e;
  e.kind = LogicExpr::Kind::Or;
  e.args = std::move(args);
  return e;
}

LogicExpr limplies(LogicExpr a, LogicExpr b) {
  LogicExpr e;
  e.kind = LogicExpr::Kind::Implies;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

namespace {

void collect_vars(const LogicExpr& e, std::vector<std::string>& out) {
  if (e.kind == LogicExpr::Kind::Var) {
    for (const std::string& v : out) {
      if (v == e.var) return;
    }
    out.push_back(e.var);
    return;
  }
  for (const LogicExpr& a : e.args) collect_vars(a, out);
}

}  // namespace

std::vector<std::string> expr_vars(const LogicExpr& e) {
  std::vector<std::string> out;
  collect_vars(e, out);
  return out;
}

bool eval_boolean(const LogicExpr& e, const std::function<bool(const std::string&)>& truth) {
  switch (e.kind) {
    case LogicExpr::Kind::Var:
      return truth(e.var);
    case LogicExpr::Kind::Not:
      return !eval_boolean(e.args[0], truth);
    case LogicExpr::Kind::And:
      for (const LogicExpr& a : e.args) {
        if (!eval_boolean(a, truth)) return false;
      }
      return true;
    case LogicExpr::Kind::Or:
      for (const LogicExpr& a : e.args) {
        if (eval_boolean(a, truth)) return true;
      }
      return false;
    case LogicExpr::Kind::Implies:
      return !eval_boolean(e.args[0], truth) || eval_boolean(e.args[1], truth);
  }
  return false;
}

Json expr_to_json(const LogicExpr& e) {
  Json j = Json::array();
  switch (e.kind) {
    case LogicExpr::Kind::Var:
      j.push_back("var");
      j.push_back(e.var);
      return j;
    case LogicExpr::Kind::Not:
      j.push_back("not");
      break;
    case LogicExpr::Kind::And:
      j.push_back("and");
      break;
    case LogicExpr::Kind::Or:
      j.push_back("or");
      break;
    case LogicExpr::Kind::Implies:
      j.push_back("=>");
      break;
  }
  for (const LogicExpr& a : e.args) j.push_back(expr_to_json(a));
  return j;
}

LogicExpr expr_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_string()) {
    throw SchemaError("logic expression must be a [op, ...] array");
  }
  std::string op = j[0].get<std::string>();
  auto parse_args = [&](size_t min_n, size_t max_n) {
    std::vector<LogicExpr> args;
    for (size_t i = 1; i < j.size(); ++i) args.push_back(expr_from_json(j[i]));
    if (args.size() < min_n || (max_n > 0 && args.size() > max_n)) {
      throw SchemaError("operator '" + op + "' has wrong arity");
    }
    return args;
  };
  if (op == "var") {
    if (j.size() != 2 || !j[1].is_string()) throw SchemaError("var takes one string argument");
    return lvar(j[1].get<std::string>());
  }
  if (op == "not") return lnot(std::move(parse_args(1, 1)[0]));
  if (op == "and") return land(parse_args(2, 0));
  if (op == "or") return lor(parse_args(2, 0));
  if (op == "=>") {
    auto args = parse_args(2, 2);
    return limplies(std::move(args[0]), std::move(args[1]));
  }
  throw SchemaError("unknown logic operator '" + op + "'");
}

void ConstraintSet::merge(ConstraintSet other) {
  std::set<std::string> have;
  for (const ConstraintQuestion& q : questions) have.insert(q.question.id);
  for (ConstraintQuestion& q : other.questions) {
    if (have.insert(q.question.id).second) questions.push_back(std::move(q));
  }
  for (Constraint& c : other.constraints) constraints.push_back(std::move(c));
}

std::string fr_label_var(const std::string& question_id, Rel r) {
  return question_id + "." + std::string(rel_token(r));
}

ConstraintSet chain_to_constraints(const QChain& chain) {
  ConstraintSet cs;
  for (const auto& [q, gold] : chain_to_questions(chain)) {
    cs.questions.push_back({q, gold});
  }
  int counter = 0;
  for (const QChainStep& step : chain.steps) {
    if (step.premises.empty()) continue;
    LogicExpr antecedent;
    if (step.premises.size() == 1) {
      antecedent = lvar(step.premises[0]);
    } else {
      std::vector<LogicExpr> vars;
      for (const std::string& p : step.premises) vars.push_back(lvar(p));
      antecedent = land(std::move(vars));
    }
    Constraint c;
    c.id = "c" + std::to_string(++counter);
    switch (step.premises.size()) {
      case 1: c.template_tag = "symmetric"; break;
      case 2: c.template_tag = "transitive"; break;
      default: c.template_tag = "transitive_topo"; break;
    }
    c.expr = limplies(std::move(antecedent), lvar(step.id));
    cs.constraints.push_back(std::move(c));
  }
  return cs;
}

ConstraintSet reverse_pair_constraints(const Question& q_pos, const Answer& gold_pos,
                                       const Question& q_neg, const Answer& gold_neg) {
  if (q_pos.type != QType::YN || q_neg.type != QType::YN) {
    throw NotAnOppositePairError("reverse constraints require YN questions");
  }
  auto opp = opposite_of(q_pos.fact.rel);
  bool paired = opp && q_neg.fact.rel == *opp && q_neg.fact.subj == q_pos.fact.subj &&
                q_neg.fact.obj == q_pos.fact.obj;
  if (!paired) {
    throw NotAnOppositePairError("'" + render_fact_token(q_pos.fact) + "' and '" +
                                 render_fact_token(q_neg.fact) +
                                 "' are not an opposite relation pair");
  }
  ConstraintSet cs;
  cs.questions.push_back({q_pos, gold_pos});
  cs.questions.push_back({q_neg, gold_neg});
  Constraint fwd;
  fwd.id = "r1";
  fwd.template_tag = "reverse";
  fwd.expr = limplies(lvar(q_pos.id), lnot(lvar(q_neg.id)));
  Constraint bwd;
  bwd.id = "r2";
  bwd.template_tag = "reverse";
  bwd.expr = limplies(lnot(lvar(q_pos.id)), lvar(q_neg.id));
  cs.constraints.push_back(std::move(fwd));
  cs.constraints.push_back(std::move(bwd));
  return cs;
}

ConstraintSet exact_label_constraints(const Question& fr_question, const Answer& gold) {
  if (fr_question.type != QType::FR) {
    throw SchemaError("exactL constraints apply to FR questions");
  }
  ConstraintSet cs;
  cs.questions.push_back({fr_question, gold});
  const std::pair<Rel, Rel> pairs[] = {{Rel::Left, Rel::Right},
                                       {Rel::Above, Rel::Below},
                                       {Rel::Behind, Rel::Front},
                                       {Rel::Near, Rel::Far},
                                       {Rel::Disconnected, Rel::Touch}};
  int counter = 0;
  for (const auto& [a, b] : pairs) {
    Constraint c;
    c.id = "x" + std::to_string(++counter);
    c.template_tag = "exactL";
    c.expr = lnot(land({lvar(fr_label_var(fr_question.id, a)), lvar(fr_label_var(fr_question.id, b))}));
    cs.constraints.push_back(std::move(c));
  }
  return cs;
}

Json constraint_set_to_json(const ConstraintSet& cs) {
  Json j;
  j["questions"] = Json::array();
  for (const ConstraintQuestion& q : cs.questions) {
    Json jq;
    jq["id"] = q.question.id;
    if (q.question.type == QType::YN) {
      jq["fact"] = fact_to_json(q.question.fact);
      jq["gold"] = q.gold.yes ? "yes" : "no";
    } else {
      jq["subj"] = q.question.subj;
      jq["obj"] = q.question.obj;
      jq["gold"] = answer_to_json(q.gold);
    }
    j["questions"].push_back(std::move(jq));
  }
  j["constraints"] = Json::array();
  for (const Constraint& c : cs.constraints) {
    Json jc;
    jc["id"] = c.id;
    jc["template"] = c.template_tag;
    jc["expr"] = expr_to_json(c.expr);
    j["constraints"].push_back(std::move(jc));
  }
  return j;
}

ConstraintSet constraint_set_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("questions") || !j.contains("constraints")) {
    throw SchemaError("constraint set must have 'questions' and 'constraints'");
  }
  ConstraintSet cs;
  for (const auto& jq : j["questions"]) {
    ConstraintQuestion q;
    std::string id = jq.at("id").get<std::string>();
    if (jq.contains("fact")) {
      q.question = Question::yn(id, fact_from_json(jq["fact"]));
      q.gold = answer_from_json(jq.at("gold"), QType::YN);
    } else {
      q.question = Question::fr(id, jq.at("subj").get<std::string>(), jq.at("obj").get<std::string>());
      q.gold = answer_from_json(jq.at("gold"), QType::FR);
    }
    cs.questions.push_back(std::move(q));
  }
  for (const auto& jc : j["constraints"]) {
    Constraint c;
    c.id = jc.at("id").get<std::string>();
    c.template_tag = jc.at("template").get<std::string>();
    c.expr = expr_from_json(jc.at("expr"));
    cs.constraints.push_back(std::move(c));
  }
  return cs;
}

}  // namespace spatial
