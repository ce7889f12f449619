#pragma once

#include <nlohmann/json.hpp>

#include "spatial/closure.hpp"
#include "spatial/fact.hpp"
#include "spatial/qchain.hpp"

namespace spatial {

// Wire schemas. Field names and relation tokens are bit-exact contracts;
// object keys are emitted in the fixed orders below via ordered_json.
using Json = nlohmann::ordered_json;

Json fact_to_json(const Fact& f);
Fact fact_from_json(const Json& j);

Json entity_to_json(const Entity& e);
Entity entity_from_json(const Json& j);

// {"entities":[{"id":...,"attrs":{...}}],"facts":[{"rel":...,"subj":...,"obj":...}]}
Json scene_to_json(const Scene& s);
Scene scene_from_json(const Json& j);

Json question_to_json(const Question& q);
Question question_from_json(const Json& j);

Json answer_to_json(const Answer& a);
Answer answer_from_json(const Json& j, QType type);

// {"target":{...},"steps":[{"id":"q1","fact":{...},"rule":null,"premises":[]},...]}
Json chain_to_json(const QChain& c);
QChain chain_from_json(const Json& j);

Json closure_to_json(const Closure& c);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace spatial
