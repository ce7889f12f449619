#include "spatial/softlogic.hpp"

#include <algorithm>
#include <cmath>

#include "spatial/errors.hpp"

namespace spatial {

namespace {

struct Eval {
  double value = 0.0;
  std::map<std::string, double> grad;
};

void axpy(std::map<std::string, double>& acc, double coeff, const std::map<std::string, double>& g) {
  for (const auto& [k, v] : g) acc[k] += coeff * v;
}

Eval eval_rec(const LogicExpr& expr, const ProbAssignment& probs) {
  Eval out;
  switch (expr.kind) {
    case LogicExpr::Kind::Var: {
      auto it = probs.find(expr.var);
      if (it == probs.end()) throw MissingVariableError("no probability for variable '" + expr.var + "'");
      double p = it->second;
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ProbabilityOutOfRangeError("probability for '" + expr.var + "' is outside [0,1]");
      }
      out.value = p;
      out.grad[expr.var] = 1.0;
      return out;
    }
    case LogicExpr::Kind::Not: {
      Eval a = eval_rec(expr.args[0], probs);
      out.value = 1.0 - a.value;
      axpy(out.grad, -1.0, a.grad);
      return out;
    }
    case LogicExpr::Kind::And: {
      std::vector<Eval> parts;
      parts.reserve(expr.args.size());
      for (const LogicExpr& a : expr.args) parts.push_back(eval_rec(a, probs));
      size_t n = parts.size();
      // prefix[i] = product of values before i, suffix[i] = product after i,
      // so zero factors do not poison the other coefficients.
      std::vector<double> prefix(n, 1.0), suffix(n, 1.0);
      for (size_t i = 1; i < n; ++i) prefix[i] = prefix[i - 1] * parts[i - 1].value;
      for (size_t i = n; i-- > 1;) suffix[i - 1] = suffix[i] * parts[i].value;
      out.value = prefix[n - 1] * parts[n - 1].value;
      for (size_t i = 0; i < n; ++i) axpy(out.grad, prefix[i] * suffix[i], parts[i].grad);
      return out;
    }
    case LogicExpr::Kind::Or: {
      // Left fold of a + b - ab.
      Eval acc = eval_rec(expr.args[0], probs);
      for (size_t i = 1; i < expr.args.size(); ++i) {
        Eval b = eval_rec(expr.args[i], probs);
        Eval next;
        next.value = acc.value + b.value - acc.value * b.value;
        axpy(next.grad, 1.0 - b.value, acc.grad);
        axpy(next.grad, 1.0 - acc.value, b.grad);
        acc = std::move(next);
      }
      return acc;
    }
    case LogicExpr::Kind::Implies: {
      Eval a = eval_rec(expr.args[0], probs);
      Eval b = eval_rec(expr.args[1], probs);
      if (a.value < b.value || a.value == 0.0) {
        out.value = 1.0;
        return out;
      }
      // a >= b > is the b/a branch; the kink a == b uses its subgradient.
      out.value = std::min(1.0, b.value / a.value);
      axpy(out.grad, 1.0 / a.value, b.grad);
      axpy(out.grad, -b.value / (a.value * a.value), a.grad);
      return out;
    }
  }
  return out;
}

void check_kinks(const LogicExpr& expr, const ProbAssignment& probs, double guard) {
  if (expr.kind == LogicExpr::Kind::Implies) {
    double a = eval_rec(expr.args[0], probs).value;
    double b = eval_rec(expr.args[1], probs).value;
    if (std::abs(a - b) <= guard) {
      throw KinkPointError("implication antecedent and consequent within " +
                           std::to_string(guard) + " of the kink");
    }
  }
  for (const LogicExpr& a : expr.args) check_kinks(a, probs, guard);
}

}  // namespace

SoftEval eval_product(const LogicExpr& expr, const ProbAssignment& probs) {
  Eval e = eval_rec(expr, probs);
  SoftEval out;
  out.value = e.value;
  out.violation = 1.0 - e.value;
  // Evaluation only adds entries for variables it touched; pad the rest of
  // the expression's variables with exact zeros.
  for (const std::string& v : expr_vars(expr)) e.grad.emplace(v, 0.0);
  out.grad = std::move(e.grad);
  return out;
}

double violation(const LogicExpr& expr, const ProbAssignment& probs) {
  return eval_product(expr, probs).violation;
}

double grad_check(const LogicExpr& expr, const ProbAssignment& probs, double step) {
  for (const std::string& v : expr_vars(expr)) {
    auto it = probs.find(v);
    if (it == probs.end()) throw MissingVariableError("no probability for variable '" + v + "'");
    if (it->second <= step || it->second >= 1.0 - step) {
      throw ProbabilityOutOfRangeError("grad_check needs probabilities strictly inside (step, 1-step)");
    }
  }
  check_kinks(expr, probs, 10.0 * step);

  SoftEval analytic = eval_product(expr, probs);
  double worst = 0.0;
  for (const std::string& v : expr_vars(expr)) {
    ProbAssignment shifted = probs;
    shifted[v] = probs.at(v) + step;
    double hi = eval_product(expr, shifted).value;
    shifted[v] = probs.at(v) - step;
    double lo = eval_product(expr, shifted).value;
    double fd = (hi - lo) / (2.0 * step);
    double ga = analytic.grad.at(v);
    double err = std::abs(ga - fd) / std::max({1.0, std::abs(ga), std::abs(fd)});
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace spatial
