#pragma once

#include <map>
#include <string>

#include "spatial/constraints.hpp"

namespace spatial {

// Question id -> probability in [0, 1].
using ProbAssignment = std::map<std::string, double>;

struct SoftEval {
  double value = 0.0;      // soft truth in [0, 1]
  double violation = 0.0;  // 1 - value
  std::map<std::string, double> grad;  // d value / d p, one entry per expr variable
};

// Product t-norm semantics: not a -> 1-a, and -> product, or -> a+b-ab
// folded left, a => b -> 1 when a <= b else b/a (the residuum completion of
// min(1, b/a), defined at a = 0). Gradients are exact; at the implication
// kink a == b the subgradient comes from the b/a branch.
SoftEval eval_product(const LogicExpr& expr, const ProbAssignment& probs);

double violation(const LogicExpr& expr, const ProbAssignment& probs);

// Compares the analytic gradient against central finite differences and
// returns the worst relative error, |g - g_fd| / max(1, |g|, |g_fd|).
// Requires every probability in (step, 1-step) and every implication at
// least 10*step away from its kink.
double grad_check(const LogicExpr& expr, const ProbAssignment& probs, double step);

}  // namespace spatial
