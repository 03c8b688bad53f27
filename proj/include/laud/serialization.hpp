#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "laud/core.hpp"

namespace laud {

// Record notation for everything that crosses a file or socket boundary.
// Object keys keep insertion order so the bytes are stable.
using Record = nlohmann::ordered_json;

Record to_record(const LoopConfig& c);
LoopConfig loop_config_from(const nlohmann::json& j);

Record to_record(const Annotation& a);
Annotation annotation_from(const nlohmann::json& j);

Record to_record(const PendingQuery& q);
PendingQuery pending_query_from(const nlohmann::json& j);

Record to_record(const IterationRecord& r);
IterationRecord iteration_record_from(const nlohmann::json& j);

Record to_record(const EvaluationReport& r);
EvaluationReport evaluation_report_from(const nlohmann::json& j);

/// Versioned snapshot document ("format": "laud-state", "version": 1).
Record to_record(const RunState& s);
RunState run_state_from(const nlohmann::json& j);

std::string serialize_state(const RunState& s);
RunState deserialize_state(std::string_view text);

}  // namespace laud
