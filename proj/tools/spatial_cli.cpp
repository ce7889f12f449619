// Command-line front end for the spatial reasoning pipeline: deductive
// closure, question answering, derivation chains, consistency constraints,
// soft-logic evaluation, data generation, rendering, and toy training.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spatial/constraints.hpp"
#include "spatial/errors.hpp"
#include "spatial/json_io.hpp"
#include "spatial/oracle.hpp"
#include "spatial/render.hpp"
#include "spatial/scenegen.hpp"
#include "spatial/softlogic.hpp"
#include "spatial/trainer.hpp"

namespace {

using namespace spatial;

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  return file;
}

RuleKB resolve_kb(const std::string& kb_path) {
  if (!kb_path.empty()) return load_kb(kb_path);
  const char* env = std::getenv("SPATIAL_KB_PATH");
  if (env != nullptr && env[0] != '\0') return load_kb(env);
  return default_kb();
}

Json answered_to_json(const AnsweredQuestion& aq, const std::string& id) {
  Json j;
  j["id"] = id;
  j["type"] = aq.question.type == QType::YN ? "YN" : "FR";
  j["answer"] = answer_to_json(aq.answer);
  j["k"] = aq.depth;
  j["consistent"] = aq.consistent;
  j["chains"] = Json::array();
  for (const QChain& c : aq.chains) j["chains"].push_back(chain_to_json(c));
  return j;
}

int cmd_close(const std::string& scene_path, const std::string& kb_path, const std::string& out_path) {
  Scene scene = scene_from_json(load_json_file(scene_path));
  RuleKB kb = resolve_kb(kb_path);
  std::ofstream file;
  open_out(out_path, file) << closure_to_json(close(scene, kb)).dump(2) << "\n";
  return 0;
}

int cmd_answer(const std::string& scene_path, const std::string& questions_path,
               const std::string& kb_path, const std::string& format,
               const std::string& out_path) {
  if (format != "json" && format != "text") throw SchemaError("--format must be json or text");
  Scene scene = scene_from_json(load_json_file(scene_path));
  RuleKB kb = resolve_kb(kb_path);
  Json qdoc = load_json_file(questions_path);
  if (!qdoc.is_object() || !qdoc.contains("questions") || !qdoc["questions"].is_array()) {
    throw SchemaError("questions file must be {\"questions\": [...]}");
  }
  Closure closure = close(scene, kb);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  for (const auto& jq : qdoc["questions"]) {
    Question q = question_from_json(jq);
    AnsweredQuestion aq = q.type == QType::YN ? answer_yn(scene, closure, q.fact)
                                              : answer_fr(scene, closure, q.subj, q.obj);
    if (format == "text") {
      out << q.id << ": ";
      if (aq.question.type == QType::YN) {
        out << (aq.answer.yes ? "Yes" : "No");
      } else {
        bool first = true;
        if (aq.answer.relations.empty()) out << "{}";
        for (Rel r : aq.answer.relations) {
          out << (first ? "" : ", ") << rel_token(r);
          first = false;
        }
      }
      out << " (k=" << aq.depth << ")\n";
    } else {
      out << answered_to_json(aq, q.id).dump() << "\n";
    }
  }
  return 0;
}

int cmd_chain(const std::string& scene_path, const std::string& target_text,
              const std::string& kb_path, const std::string& out_path) {
  Scene scene = scene_from_json(load_json_file(scene_path));
  RuleKB kb = resolve_kb(kb_path);
  Fact target = parse_fact(target_text);
  auto chain = derive(scene, target, kb);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  if (chain) {
    out << chain_to_json(*chain).dump(2) << "\n";
  } else {
    Json j;
    j["target"] = fact_to_json(target);
    j["steps"] = nullptr;
    out << j.dump(2) << "\n";
  }
  return 0;
}

ConstraintSet build_constraints(const Scene& scene, const RuleKB& kb, const Question& q,
                                const std::vector<std::string>& templates) {
  auto wants = [&](const char* t) {
    return std::find(templates.begin(), templates.end(), t) != templates.end();
  };
  Closure closure = close(scene, kb);
  ConstraintSet cs;
  if (q.type == QType::FR) {
    AnsweredQuestion aq = answer_fr(scene, closure, q.subj, q.obj);
    if (wants("exactL")) cs.merge(exact_label_constraints(q, aq.answer));
    return cs;
  }
  AnsweredQuestion aq = answer_yn(scene, closure, q.fact);
  if (!aq.chains.empty() &&
      (wants("symmetric") || wants("transitive") || wants("transitive_topo"))) {
    ConstraintSet chain_cs = chain_to_constraints(aq.chains.front());
    ConstraintSet kept;
    kept.questions = chain_cs.questions;
    for (Constraint& c : chain_cs.constraints) {
      if (wants(c.template_tag.c_str())) kept.constraints.push_back(std::move(c));
    }
    cs.merge(std::move(kept));
  }
  if (wants("reverse") && opposite_of(q.fact.rel)) {
    Fact twin = q.fact;
    twin.rel = *opposite_of(q.fact.rel);
    bool q_yes = closure.contains(q.fact);
    bool twin_yes = closure.contains(twin);
    Question q_pos = Question::yn(cs.questions.empty() ? "t" : cs.questions.back().question.id,
                                  q.fact);
    if (cs.questions.empty()) cs.questions.push_back({q_pos, Answer::yn(q_yes)});
    Question q_neg = Question::yn("tn", twin);
    cs.merge(reverse_pair_constraints(q_pos, Answer::yn(q_yes), q_neg, Answer::yn(twin_yes)));
  }
  return cs;
}

int cmd_constraints(const std::string& scene_path, const std::string& target_text,
                    const std::string& fr_pair, const std::string& kb_path,
                    const std::vector<std::string>& templates, const std::string& out_path) {
  Scene scene = scene_from_json(load_json_file(scene_path));
  RuleKB kb = resolve_kb(kb_path);
  Question q;
  if (!fr_pair.empty()) {
    size_t comma = fr_pair.find(',');
    if (comma == std::string::npos) throw SchemaError("--fr expects \"subj,obj\"");
    q = Question::fr("t", fr_pair.substr(0, comma), fr_pair.substr(comma + 1));
  } else {
    q = Question::yn("t", parse_fact(target_text));
  }
  ConstraintSet cs = build_constraints(scene, kb, q, templates);
  std::ofstream file;
  open_out(out_path, file) << constraint_set_to_json(cs).dump(2) << "\n";
  return 0;
}

int cmd_softeval(const std::string& constraints_path, const std::string& probs_path,
                 const std::string& out_path) {
  ConstraintSet cs = constraint_set_from_json(load_json_file(constraints_path));
  Json jp = load_json_file(probs_path);
  if (!jp.is_object()) throw SchemaError("probs file must map variable -> probability");
  ProbAssignment probs;
  for (const auto& [k, v] : jp.items()) probs[k] = v.get<double>();
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  for (const Constraint& c : cs.constraints) {
    SoftEval ev = eval_product(c.expr, probs);
    Json j;
    j["id"] = c.id;
    j["template"] = c.template_tag;
    j["value"] = ev.value;
    j["violation"] = ev.violation;
    Json jg;
    for (const auto& [var, g] : ev.grad) jg[var] = g;
    j["grad"] = jg;
    out << j.dump() << "\n";
  }
  return 0;
}

int cmd_gen(const std::string& config_path, uint64_t seed_override, bool has_seed,
            const std::string& out_path) {
  Json jc = load_json_file(config_path);
  GenConfig cfg = gen_config_from_json(jc);
  int n_scenes = jc.contains("n_scenes") ? jc["n_scenes"].get<int>() : 1;
  if (has_seed) cfg.seed = seed_override;
  const RuleKB& kb = default_kb();
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  for (int i = 0; i < n_scenes; ++i) {
    GenConfig scene_cfg = cfg;
    scene_cfg.seed = cfg.seed + static_cast<uint64_t>(i);
    GroundedScene gs = generate_scene(scene_cfg);
    GenResult res = generate_examples(gs, scene_cfg, kb);
    for (const std::string& w : res.warnings) std::cerr << "warning: " << w << "\n";
    for (const GeneratedExample& ex : res.examples) {
      out << generated_example_to_json(ex, gs.scene).dump() << "\n";
    }
  }
  return 0;
}

// Bare entities for ids the display scene does not declare, so chains and
// facts render with ids as descriptors when no scene is supplied.
void ensure_entities(Scene& scene, std::initializer_list<const std::string*> ids) {
  for (const std::string* id : ids) {
    if (!scene.has_entity(*id)) scene.add_entity({*id, {}});
  }
}

int cmd_render(const std::string& input_path, const std::string& scene_path,
               const std::string& format_token, const std::string& out_path) {
  auto format = render_format_from_token(format_token);
  if (!format) throw SchemaError("unknown format '" + format_token + "'");
  Json ji = load_json_file(input_path);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  Scene scene;
  if (!scene_path.empty()) {
    scene = scene_from_json(load_json_file(scene_path));
  } else if (ji.is_object() && ji.contains("scene")) {
    scene = scene_from_json(ji["scene"]);
  }
  if (ji.is_object() && ji.contains("steps")) {
    QChain chain = chain_from_json(ji);
    for (const QChainStep& s : chain.steps) ensure_entities(scene, {&s.fact.subj, &s.fact.obj});
    out << render_chain(chain, scene, *format);
  } else if (ji.is_object() && ji.contains("entities")) {
    Scene s = scene_from_json(ji);
    out << render_story(s, StoryMode::StepByStep);
  } else if (ji.is_object() && ji.contains("rel")) {
    Fact f = fact_from_json(ji);
    ensure_entities(scene, {&f.subj, &f.obj});
    out << render_fact(f, scene, *format) << "\n";
  } else {
    throw SchemaError("input must be a chain, a scene, or a fact document");
  }
  return 0;
}

int cmd_train(const std::string& data_path, const std::string& config_path,
              const std::string& model_path, const std::string& report_path) {
  Dataset dataset = dataset_from_jsonl(data_path);
  TrainConfig cfg =
      config_path.empty() ? TrainConfig{} : train_config_from_json(load_json_file(config_path));
  auto [model, report] = train(dataset, cfg);
  if (!model_path.empty()) write_json_file(model_path, model_to_json(model));
  Json jr = train_report_to_json(report);
  if (report_path.empty()) {
    std::cout << jr.dump(2) << "\n";
  } else {
    write_json_file(report_path, jr);
  }
  return 0;
}

int cmd_eval(const std::string& data_path, const std::string& model_path,
             const std::string& out_path) {
  Dataset dataset = dataset_from_jsonl(data_path);
  ToyModel model = model_from_json(load_json_file(model_path));
  std::ofstream file;
  open_out(out_path, file) << eval_metrics_to_json(evaluate(model, dataset)).dump(2) << "\n";
  return 0;
}

// The worked three-entity example: two stacked "above" facts, the target
// reachable by two converse steps and one transitivity step.
int cmd_selftest() {
  Scene scene;
  scene.add_entity({"white", {}});
  scene.add_entity({"orange", {}});
  scene.add_entity({"red", {}});
  scene.add_fact(parse_fact("above(white,orange)"));
  scene.add_fact(parse_fact("above(red,white)"));

  const RuleKB& kb = default_kb();
  Fact target = parse_fact("below(orange,red)");
  auto chain = derive(scene, target, kb);
  if (!chain) {
    std::cerr << "selftest: target not derivable\n";
    return 1;
  }
  if (chain->steps.size() != 5 || chain_depth(*chain) != 2) {
    std::cerr << "selftest: unexpected chain shape\n";
    return 1;
  }
  ConstraintSet cs = chain_to_constraints(*chain);
  if (cs.constraints.size() != 3) {
    std::cerr << "selftest: expected 3 constraints\n";
    return 1;
  }
  ProbAssignment probs{{"q1", 0.9}, {"q3", 0.45}};
  SoftEval ev = eval_product(limplies(lvar("q1"), lvar("q3")), probs);
  if (std::abs(ev.value - 0.5) > 1e-12) {
    std::cerr << "selftest: implication value off\n";
    return 1;
  }
  LogicExpr expr = limplies(land({lvar("a"), lvar("b")}), lvar("c"));
  ProbAssignment p2{{"a", 0.8}, {"b", 0.7}, {"c", 0.3}};
  if (grad_check(expr, p2, 1e-6) > 1e-5) {
    std::cerr << "selftest: gradient check failed\n";
    return 1;
  }
  std::cout << "selftest: ok\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatial reasoning pipeline"};
  app.require_subcommand(1);

  std::string scene_path, questions_path, target_text, fr_pair, kb_path, config_path;
  std::string input_path, format_token, out_path, data_path, model_path, report_path;
  std::vector<std::string> templates = {"symmetric", "reverse", "transitive", "transitive_topo",
                                        "exactL"};
  uint64_t seed = 0;

  auto* c_close = app.add_subcommand("close", "deductive closure of a scene");
  c_close->add_option("--scene", scene_path)->required();
  c_close->add_option("--kb", kb_path);
  c_close->add_option("--out", out_path);

  auto* c_answer = app.add_subcommand("answer", "answer YN/FR questions");
  c_answer->add_option("--scene", scene_path)->required();
  c_answer->add_option("--questions", questions_path)->required();
  c_answer->add_option("--kb", kb_path);
  c_answer->add_option("--format", format_token);
  c_answer->add_option("--out", out_path);

  auto* c_chain = app.add_subcommand("chain", "derivation chain for a target fact");
  c_chain->add_option("--scene", scene_path)->required();
  c_chain->add_option("--target", target_text)->required();
  c_chain->add_option("--kb", kb_path);
  c_chain->add_option("--out", out_path);

  auto* c_constraints = app.add_subcommand("constraints", "compile consistency constraints");
  c_constraints->add_option("--scene", scene_path)->required();
  c_constraints->add_option("--target", target_text);
  c_constraints->add_option("--fr", fr_pair);
  c_constraints->add_option("--kb", kb_path);
  c_constraints->add_option("--include-templates", templates)->delimiter(',');
  c_constraints->add_option("--out", out_path);

  auto* c_softeval = app.add_subcommand("softeval", "product t-norm evaluation");
  c_softeval->add_option("--constraints", config_path)->required();
  c_softeval->add_option("--probs", questions_path)->required();
  c_softeval->add_option("--out", out_path);

  auto* c_gen = app.add_subcommand("gen", "generate synthetic QA data");
  c_gen->add_option("--config", config_path)->required();
  auto* seed_opt = c_gen->add_option("--seed", seed);
  c_gen->add_option("--out", out_path);

  auto* c_render = app.add_subcommand("render", "render facts, chains, stories");
  c_render->add_option("--input", input_path)->required();
  c_render->add_option("--scene", scene_path);
  c_render->add_option("--format", format_token);
  c_render->add_option("--out", out_path);

  auto* c_train = app.add_subcommand("train", "train the toy constrained classifier");
  c_train->add_option("--data", data_path)->required();
  c_train->add_option("--config", config_path);
  c_train->add_option("--out", model_path);
  c_train->add_option("--report", report_path);

  auto* c_eval = app.add_subcommand("eval", "evaluate a trained model");
  c_eval->add_option("--data", data_path)->required();
  c_eval->add_option("--model", model_path)->required();
  c_eval->add_option("--out", out_path);

  auto* c_selftest = app.add_subcommand("selftest", "run the built-in end-to-end fixture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_close->parsed()) return cmd_close(scene_path, kb_path, out_path);
    if (c_answer->parsed()) {
      return cmd_answer(scene_path, questions_path, kb_path,
                        format_token.empty() ? "json" : format_token, out_path);
    }
    if (c_chain->parsed()) return cmd_chain(scene_path, target_text, kb_path, out_path);
    if (c_constraints->parsed()) {
      if (target_text.empty() && fr_pair.empty()) {
        std::cerr << "error: constraints needs --target or --fr\n";
        return 2;
      }
      return cmd_constraints(scene_path, target_text, fr_pair, kb_path, templates, out_path);
    }
    if (c_softeval->parsed()) return cmd_softeval(config_path, questions_path, out_path);
    if (c_gen->parsed()) return cmd_gen(config_path, seed, !seed_opt->empty(), out_path);
    if (c_render->parsed()) {
      return cmd_render(input_path, scene_path, format_token.empty() ? "nl" : format_token,
                        out_path);
    }
    if (c_train->parsed()) return cmd_train(data_path, config_path, model_path, report_path);
    if (c_eval->parsed()) return cmd_eval(data_path, model_path, out_path);
    if (c_selftest->parsed()) return cmd_selftest();
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
