#pragma once

#include "json.hpp"

#include "corrugate/embedding.hpp"
#include "corrugate/iteration.hpp"
#include "corrugate/step.hpp"
#include "corrugate/verify.hpp"

namespace corrugate {

using Json = nlohmann::json;

Json to_json(const StepReport& report);
Json to_json(const RunReport& report);
Json to_json(const VerificationReport& report);
Json to_json(const EmbeddingReport& report);

/// Overrides fields of `config` from a JSON object. Unknown keys are a
/// ConfigError so typos do not pass silently.
void apply_config_json(const Json& j, RunConfig& config);

}  // namespace corrugate
