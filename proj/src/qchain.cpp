#include "spatial/qchain.hpp"

#include <algorithm>
#include <map>

#include "spatial/errors.hpp"

namespace spatial {

namespace {

struct Node {
  Fact fact;
  std::string rule_id;
  std::vector<size_t> children;
  int stratum = 0;     // 0 for leaves, 1 + max(children) otherwise
  size_t encounter = 0;  // first visit in a root-first walk
};

// Collects the distinct facts reachable through provenance, assigning each
// its first-encounter index in a pre-order walk (premises in recorded
// order).
size_t visit(const Closure& closure, const Fact& fact, std::map<Fact, size_t>& index,
             std::vector<Node>& nodes, size_t& counter) {
  auto it = index.find(fact);
  if (it != index.end()) return it->second;
  size_t self = nodes.size();
  index.emplace(fact, self);
  nodes.push_back({});
  nodes[self].fact = fact;
  nodes[self].encounter = counter++;
  const Derivation* d = closure.derivation_of(fact);
  if (d != nullptr) {
    nodes[self].rule_id = d->rule_id;
    for (const Fact& p : d->premises) {
      size_t child = visit(closure, p, index, nodes, counter);
      nodes[self].children.push_back(child);
    }
    int depth = 0;
    for (size_t c : nodes[self].children) depth = std::max(depth, nodes[c].stratum + 1);
    nodes[self].stratum = depth;
  }
  return self;
}

}  // namespace

std::optional<QChain> chain_from_closure(const Closure& closure, const Fact& target) {
  if (!closure.contains(target)) return std::nullopt;

  std::map<Fact, size_t> index;
  std::vector<Node> nodes;
  size_t counter = 0;
  size_t root = visit(closure, target, index, nodes, counter);

  // Step order: leaves first, then derived facts stratum by stratum, ties by
  // first encounter. The root always lands last because its stratum strictly
  // dominates every other node's.
  std::vector<size_t> order(nodes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (nodes[a].stratum != nodes[b].stratum) return nodes[a].stratum < nodes[b].stratum;
    return nodes[a].encounter < nodes[b].encounter;
  });

  std::vector<std::string> step_id(nodes.size());
  for (size_t rank = 0; rank < order.size(); ++rank) {
    size_t n = order[rank];
    step_id[n] = (n == root) ? "t" : "q" + std::to_string(rank + 1);
  }

  QChain chain;
  chain.target = target;
  for (size_t n : order) {
    QChainStep step;
    step.id = step_id[n];
    step.fact = nodes[n].fact;
    step.rule_id = nodes[n].rule_id;
    for (size_t c : nodes[n].children) step.premises.push_back(step_id[c]);
    chain.steps.push_back(std::move(step));
  }
  return chain;
}

std::optional<QChain> derive(const Scene& scene, const Fact& target, const RuleKB& kb) {
  return chain_from_closure(close(scene, kb), target);
}

int chain_depth(const QChain& chain) {
  std::map<std::string, int> depth;
  int result = 0;
  for (const QChainStep& step : chain.steps) {
    int d = 0;
    for (const std::string& p : step.premises) d = std::max(d, depth.at(p) + 1);
    depth[step.id] = d;
    result = std::max(result, d);
  }
  return result;
}

std::vector<std::pair<Question, Answer>> chain_to_questions(const QChain& chain) {
  std::vector<std::pair<Question, Answer>> out;
  for (const QChainStep& step : chain.steps) {
    out.emplace_back(Question::yn(step.id, step.fact), Answer::yn(true));
  }
  return out;
}

}  // namespace spatial
