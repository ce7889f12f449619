#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spatial/constraints.hpp"
#include "spatial/json_io.hpp"
#include "spatial/softlogic.hpp"

namespace spatial {

// Sparse hashed bag-of-features for one question in its scene: question
// relation, question/story pattern conjunctions, entity tokens, and a bias
// slot. Deterministic for fixed (dim, seed).
using FeatureVec = std::vector<std::pair<uint32_t, double>>;

FeatureVec extract_features(const Question& q, const Scene& scene, int dim, uint64_t hash_seed);

// Linear sigmoid classifier over the hashed feature space: row 0 answers YN
// questions, rows 1..15 are the per-relation FR heads.
struct ToyModel {
  int dim = 4096;
  uint64_t hash_seed = 0x51a7edb01dfa31c5ULL;
  std::vector<std::vector<double>> rows;

  static ToyModel zeros(int dim);

  double predict_row(int row, const FeatureVec& f) const;
};

Json model_to_json(const ToyModel& m);
ToyModel model_from_json(const Json& j);

struct TrainConfig {
  double lambda = 1.0;  // constraint weight, applied per template
  std::map<std::string, double> lambda_overrides;
  double lr = 0.05;
  int epochs = 10;
  uint64_t seed = 1;
  bool dual_enabled = false;
  double dual_lr = 0.0;
  std::string violation_form = "one_minus";  // or "neg_log"
  int dim = 4096;
  double lambda_for(const std::string& template_tag) const;
};

TrainConfig train_config_from_json(const Json& j);
Json train_config_to_json(const TrainConfig& cfg);

struct TrainExample {
  Scene scene;
  ConstraintSet constraints;  // questions with golds plus the constraint exprs
};

using Dataset = std::vector<TrainExample>;

Dataset dataset_from_jsonl(const std::string& path);

struct EpochStats {
  double task_loss = 0.0;
  double constraint_loss = 0.0;
  double accuracy = 0.0;
  double consistency_rate = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  std::map<std::string, double> final_lambda;  // per template, after dual updates
  EpochStats final_metrics;
  uint64_t seed = 0;
};

Json train_report_to_json(const TrainReport& r);

// Question probabilities from one forward pass; FR heads write their
// per-label variables.
ProbAssignment forward_probs(const ToyModel& m, const TrainExample& ex);

struct LossGrad {
  double loss = 0.0;
  double task_loss = 0.0;
  double constraint_loss = 0.0;
  // Sparse gradient: (row, feature index) -> d loss / d w.
  std::map<std::pair<int, uint32_t>, double> grad;
  std::map<std::string, double> violation_by_template;
  std::map<std::string, int> count_by_template;
};

// Cross-entropy over the example's questions plus the lambda-weighted
// constraint violations, differentiated through the soft-logic evaluator
// and the sigmoid heads.
LossGrad combined_loss(const ToyModel& m, const TrainExample& ex, const TrainConfig& cfg,
                       const std::map<std::string, double>& lambda_now);

// Deterministic SGD over the dataset; when dual_enabled, template weights
// follow lambda <- max(0, lambda + dual_lr * mean violation) after each
// epoch. Lambda of exactly 0 skips the constraint term entirely, so a
// lambda = 0 run is bitwise identical to training without constraints.
std::pair<ToyModel, TrainReport> train(const Dataset& dataset, const TrainConfig& cfg);

struct EvalMetrics {
  double accuracy = 0.0;
  double consistency_rate = 0.0;
  std::map<std::string, double> consistency_by_template;
  int n_questions = 0;
  int n_constraints = 0;
};

// Thresholded (p >= 0.5) accuracy and boolean constraint satisfaction.
EvalMetrics evaluate(const ToyModel& m, const Dataset& dataset);

Json eval_metrics_to_json(const EvalMetrics& m);

}  // namespace spatial
