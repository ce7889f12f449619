#pragma once

#include <string>

#include "spatial/fact.hpp"
#include "spatial/qchain.hpp"

namespace spatial {

enum class RenderFormat : uint8_t { NL, CoT, LR, CoS };

std::string_view render_format_token(RenderFormat f);
std::optional<RenderFormat> render_format_from_token(std::string_view token);

// Display descriptor: the "name" attribute when present, otherwise
// "size color shape" from the attributes, otherwise the entity id.
std::string entity_descriptor(const Entity& e);

// NL: "The white is above the orange."
// LR: "Above(white, orange)"
// CoS: "(white) ↑ (orange)" — only left/right/above/below/near/touch have
// glyphs; the rest throw UnsupportedSymbolError.
std::string render_fact(const Fact& f, const Scene& scene, RenderFormat format);

// One line per rule application in step order, stating premises, rule
// category, and conclusion, then a final "Answer: Yes" line. NL renders the
// same as CoT.
std::string render_chain(const QChain& chain, const Scene& scene, RenderFormat format);

enum class StoryMode : uint8_t { Raw, StepByStep };

// Raw joins facts into compound sentences on one line; step_by_step emits
// exactly one single-fact sentence per line.
std::string render_story(const Scene& scene, StoryMode mode);

// Inverse of the NL fact template. Descriptors are resolved against the
// scene's entities; ambiguous or unknown descriptors throw.
Fact parse_nl_fact(const std::string& line, const Scene& scene);

}  // namespace spatial
