#include "spatial/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "spatial/errors.hpp"
#include "spatial/render.hpp"

namespace spatial {

namespace {

uint64_t fnv1a(std::string_view s, uint64_t seed) {
  uint64_t h = 1469598103934665603ULL ^ seed;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

void bump(std::map<uint32_t, double>& acc, std::string_view token, int dim, uint64_t seed) {
  acc[static_cast<uint32_t>(fnv1a(token, seed) % static_cast<uint64_t>(dim))] += 1.0;
}

// Four-character code for how the question pair (s, o) aligns with a story
// fact's pair (a, b): bits for s==a, s==b, o==a, o==b.
std::string overlap_code(const std::string& s, const std::string& o, const Fact& f) {
  std::string code = "0000";
  if (s == f.subj) code[0] = '1';
  if (s == f.obj) code[1] = '1';
  if (o == f.subj) code[2] = '1';
  if (o == f.obj) code[3] = '1';
  return code;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double bce(double p, bool y) {
  constexpr double eps = 1e-12;
  return y ? -std::log(p + eps) : -std::log(1.0 - p + eps);
}

}  // namespace

FeatureVec extract_features(const Question& q, const Scene& scene, int dim, uint64_t hash_seed) {
  std::map<uint32_t, double> acc;
  bump(acc, "bias", dim, hash_seed);

  const std::string& subj = q.type == QType::YN ? q.fact.subj : q.subj;
  const std::string& obj = q.type == QType::YN ? q.fact.obj : q.obj;
  std::string qrel =
      q.type == QType::YN ? "qrel:" + std::string(rel_token(q.fact.rel)) : std::string("qrel:fr");
  bump(acc, qrel, dim, hash_seed);
  bump(acc, "ent-s:" + subj, dim, hash_seed);
  bump(acc, "ent-o:" + obj, dim, hash_seed);

  // Name-independent question/story conjunctions; these carry the
  // generalizable signal (same-pair, swapped-pair, shared-argument shapes).
  for (const Fact& f : scene.facts()) {
    std::string code = overlap_code(subj, obj, f);
    bump(acc, qrel + "|srel:" + std::string(rel_token(f.rel)) + "|" + code, dim, hash_seed);
    if (code != "0000") {
      bump(acc, qrel + "|touchpoint", dim, hash_seed);
    }
  }

  FeatureVec out;
  out.reserve(acc.size());
  for (const auto& [idx, val] : acc) out.emplace_back(idx, val);
  return out;
}

ToyModel ToyModel::zeros(int dim) {
  ToyModel m;
  m.dim = dim;
  m.rows.assign(1 + kRelCount, std::vector<double>(dim, 0.0));
  return m;
}

double ToyModel::predict_row(int row, const FeatureVec& f) const {
  double dot = 0.0;
  const std::vector<double>& w = rows[row];
  for (const auto& [idx, val] : f) dot += w[idx] * val;
  return sigmoid(dot);
}

Json model_to_json(const ToyModel& m) {
  Json j;
  j["dim"] = m.dim;
  j["hash_seed"] = m.hash_seed;
  j["rows"] = Json::array();
  for (const auto& row : m.rows) {
    Json jr = Json::array();
    for (double w : row) jr.push_back(w);
    j["rows"].push_back(std::move(jr));
  }
  return j;
}

ToyModel model_from_json(const Json& j) {
  ToyModel m;
  m.dim = j.at("dim").get<int>();
  m.hash_seed = j.at("hash_seed").get<uint64_t>();
  for (const auto& jr : j.at("rows")) {
    m.rows.push_back(jr.get<std::vector<double>>());
  }
  if (m.rows.size() != 1 + kRelCount) throw SchemaError("model must have 16 weight rows");
  for (const auto& row : m.rows) {
    if (static_cast<int>(row.size()) != m.dim) throw SchemaError("model row width != dim");
  }
  return m;
}

double TrainConfig::lambda_for(const std::string& template_tag) const {
  auto it = lambda_overrides.find(template_tag);
  return it == lambda_overrides.end() ? lambda : it->second;
}

TrainConfig train_config_from_json(const Json& j) {
  TrainConfig cfg;
  if (!j.is_object()) throw SchemaError("train config must be an object");
  if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
  if (j.contains("lambda_overrides")) {
    for (const auto& [k, v] : j["lambda_overrides"].items()) {
      cfg.lambda_overrides[k] = v.get<double>();
    }
  }
  if (j.contains("lr")) cfg.lr = j["lr"].get<double>();
  if (j.contains("epochs")) cfg.epochs = j["epochs"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("dual_enabled")) cfg.dual_enabled = j["dual_enabled"].get<bool>();
  if (j.contains("dual_lr")) cfg.dual_lr = j["dual_lr"].get<double>();
  if (j.contains("violation_form")) cfg.violation_form = j["violation_form"].get<std::string>();
  if (j.contains("dim")) cfg.dim = j["dim"].get<int>();
  if (cfg.lambda < 0.0) throw SchemaError("lambda must be >= 0");
  if (cfg.lr <= 0.0) throw SchemaError("lr must be > 0");
  if (cfg.epochs < 1) throw SchemaError("epochs must be >= 1");
  if (cfg.violation_form != "one_minus" && cfg.violation_form != "neg_log") {
    throw SchemaError("violation_form must be one_minus or neg_log");
  }
  return cfg;
}

Json train_config_to_json(const TrainConfig& cfg) {
  Json j;
  j["lambda"] = cfg.lambda;
  if (!cfg.lambda_overrides.empty()) {
    Json jo;
    for (const auto& [k, v] : cfg.lambda_overrides) jo[k] = v;
    j["lambda_overrides"] = jo;
  }
  j["lr"] = cfg.lr;
  j["epochs"] = cfg.epochs;
  j["seed"] = cfg.seed;
  j["dual_enabled"] = cfg.dual_enabled;
  j["dual_lr"] = cfg.dual_lr;
  j["violation_form"] = cfg.violation_form;
  j["dim"] = cfg.dim;
  return j;
}

Dataset dataset_from_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  Dataset out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError("line " + std::to_string(lineno) + ": " + e.what());
    }
    TrainExample ex;
    ex.scene = scene_from_json(j.at("scene"));
    ex.constraints = constraint_set_from_json(j.at("constraints"));
    out.push_back(std::move(ex));
  }
  return out;
}

namespace {

struct QuestionHead {
  const ConstraintQuestion* cq;
  int row;            // model row
  std::string var;    // probability variable name
  bool gold;          // thresholded gold for this head
  FeatureVec features;
};

// FR questions fan out into one head per relation label.
std::vector<QuestionHead> heads_for(const TrainExample& ex, const ToyModel& m) {
  std::vector<QuestionHead> heads;
  for (const ConstraintQuestion& cq : ex.constraints.questions) {
    FeatureVec f = extract_features(cq.question, ex.scene, m.dim, m.hash_seed);
    if (cq.question.type == QType::YN) {
      heads.push_back({&cq, 0, cq.question.id, cq.gold.yes, f});
    } else {
      for (Rel r : all_relations()) {
        heads.push_back({&cq, 1 + static_cast<int>(r), fr_label_var(cq.question.id, r),
                         cq.gold.relations.count(r) > 0, f});
      }
    }
  }
  return heads;
}

}  // namespace

ProbAssignment forward_probs(const ToyModel& m, const TrainExample& ex) {
  ProbAssignment probs;
  for (const QuestionHead& h : heads_for(ex, m)) {
    probs[h.var] = m.predict_row(h.row, h.features);
  }
  return probs;
}

LossGrad combined_loss(const ToyModel& m, const TrainExample& ex, const TrainConfig& cfg,
                       const std::map<std::string, double>& lambda_now) {
  LossGrad out;
  std::vector<QuestionHead> heads = heads_for(ex, m);

  ProbAssignment probs;
  std::map<std::string, double> p_of;
  for (const QuestionHead& h : heads) {
    double p = m.predict_row(h.row, h.features);
    probs[h.var] = p;
    p_of[h.var] = p;
  }

  // d loss / d p, accumulated across the task term and every constraint.
  std::map<std::string, double> dp;
  for (const QuestionHead& h : heads) {
    double p = p_of.at(h.var);
    out.task_loss += bce(p, h.gold);
    // BCE composed with sigmoid: d/d logit = p - y; expressed per-p here
    // and multiplied by sigma' when we reach the weights.
    constexpr double eps = 1e-12;
    dp[h.var] += h.gold ? -1.0 / (p + eps) : 1.0 / (1.0 - p + eps);
  }

  for (const Constraint& c : ex.constraints.constraints) {
    auto it = lambda_now.find(c.template_tag);
    double lambda = it == lambda_now.end() ? cfg.lambda_for(c.template_tag) : it->second;
    SoftEval eval = eval_product(c.expr, probs);
    double h = 0.0;
    double dh_scale = 0.0;  // dh/dvalue
    if (cfg.violation_form == "neg_log") {
      constexpr double eps = 1e-9;
      h = -std::log(eval.value + eps);
      dh_scale = -1.0 / (eval.value + eps);
    } else {
      h = eval.violation;
      dh_scale = -1.0;
    }
    out.violation_by_template[c.template_tag] += eval.violation;
    out.count_by_template[c.template_tag] += 1;
    if (lambda == 0.0) continue;  // keeps lambda=0 bitwise equal to no constraints
    out.constraint_loss += lambda * h;
    for (const auto& [var, g] : eval.grad) {
      dp[var] += lambda * dh_scale * g;
    }
  }

  out.loss = out.task_loss + out.constraint_loss;

  for (const QuestionHead& h : heads) {
    double p = p_of.at(h.var);
    double chain = dp.at(h.var) * p * (1.0 - p);  // through the sigmoid
    if (chain == 0.0) continue;
    for (const auto& [idx, val] : h.features) {
      out.grad[{h.row, idx}] += chain * val;
    }
  }
  return out;
}

std::pair<ToyModel, TrainReport> train(const Dataset& dataset, const TrainConfig& cfg) {
  ToyModel model = ToyModel::zeros(cfg.dim);
  TrainReport report;
  report.seed = cfg.seed;

  std::map<std::string, double> lambda_now;
  for (const char* tag : {"symmetric", "reverse", "transitive", "transitive_topo", "exactL"}) {
    lambda_now[tag] = cfg.lambda_for(tag);
  }

  std::vector<size_t> order(dataset.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::mt19937_64 rng(cfg.seed + 0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(epoch + 1));
    std::shuffle(order.begin(), order.end(), rng);

    EpochStats stats;
    std::map<std::string, double> violation_sum;
    std::map<std::string, int> violation_count;

    for (size_t i : order) {
      LossGrad lg = combined_loss(model, dataset[i], cfg, lambda_now);
      if (!std::isfinite(lg.loss)) {
        throw NonFiniteLossError("non-finite loss", epoch);
      }
      stats.task_loss += lg.task_loss;
      stats.constraint_loss += lg.constraint_loss;
      for (const auto& [tag, v] : lg.violation_by_template) violation_sum[tag] += v;
      for (const auto& [tag, n] : lg.count_by_template) violation_count[tag] += n;
      for (const auto& [key, g] : lg.grad) {
        model.rows[key.first][key.second] -= cfg.lr * g;
      }
    }

    if (!dataset.empty()) {
      stats.task_loss /= static_cast<double>(dataset.size());
      stats.constraint_loss /= static_cast<double>(dataset.size());
    }
    EvalMetrics em = evaluate(model, dataset);
    stats.accuracy = em.accuracy;
    stats.consistency_rate = em.consistency_rate;
    report.epochs.push_back(stats);

    if (cfg.dual_enabled) {
      for (auto& [tag, lambda] : lambda_now) {
        auto it = violation_count.find(tag);
        if (it == violation_count.end() || it->second == 0) continue;
        double mean_violation = violation_sum[tag] / static_cast<double>(it->second);
        lambda = std::max(0.0, lambda + cfg.dual_lr * mean_violation);
      }
    }
  }

  report.final_lambda = lambda_now;
  if (!report.epochs.empty()) report.final_metrics = report.epochs.back();
  return {std::move(model), std::move(report)};
}

EvalMetrics evaluate(const ToyModel& m, const Dataset& dataset) {
  EvalMetrics out;
  int correct = 0;
  int satisfied = 0;
  std::map<std::string, std::pair<int, int>> by_template;  // tag -> (satisfied, total)

  for (const TrainExample& ex : dataset) {
    std::vector<QuestionHead> heads = heads_for(ex, m);
    ProbAssignment probs;
    for (const QuestionHead& h : heads) probs[h.var] = m.predict_row(h.row, h.features);
    for (const QuestionHead& h : heads) {
      bool predicted = probs.at(h.var) >= 0.5;
      if (predicted == h.gold) ++correct;
      ++out.n_questions;
    }
    for (const Constraint& c : ex.constraints.constraints) {
      bool ok = eval_boolean(c.expr, [&](const std::string& v) { return probs.at(v) >= 0.5; });
      auto& [sat, tot] = by_template[c.template_tag];
      ++tot;
      ++out.n_constraints;
      if (ok) {
        ++sat;
        ++satisfied;
      }
    }
  }
  if (out.n_questions > 0) out.accuracy = static_cast<double>(correct) / out.n_questions;
  if (out.n_constraints > 0) {
    out.consistency_rate = static_cast<double>(satisfied) / out.n_constraints;
  }
  for (const auto& [tag, pair] : by_template) {
    out.consistency_by_template[tag] =
        pair.second > 0 ? static_cast<double>(pair.first) / pair.second : 0.0;
  }
  return out;
}

Json train_report_to_json(const TrainReport& r) {
  Json j;
  j["seed"] = r.seed;
  j["epochs"] = Json::array();
  for (const EpochStats& e : r.epochs) {
    Json je;
    je["task_loss"] = e.task_loss;
    je["constraint_loss"] = e.constraint_loss;
    je["accuracy"] = e.accuracy;
    je["consistency_rate"] = e.consistency_rate;
    j["epochs"].push_back(std::move(je));
  }
  Json jl;
  for (const auto& [k, v] : r.final_lambda) jl[k] = v;
  j["final_lambda"] = jl;
  j["final_accuracy"] = r.final_metrics.accuracy;
  j["final_consistency_rate"] = r.final_metrics.consistency_rate;
  return j;
}

Json eval_metrics_to_json(const EvalMetrics& m) {
  Json j;
  j["accuracy"] = m.accuracy;
  j["consistency_rate"] = m.consistency_rate;
  Json jt;
  for (const auto& [k, v] : m.consistency_by_template) jt[k] = v;
  j["consistency_by_template"] = jt;
  j["n_questions"] = m.n_questions;
  j["n_constraints"] = m.n_constraints;
  return j;
}

}  // namespace spatial
