#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "roadmap/interface/session.hpp"

namespace roadmap {

using Json = nlohmann::ordered_json;

/// Display form: numbers as {"lower","upper","unit"} rounded to 4
/// significant digits (null for infinite bounds), booleans as
/// {"ternary"}, dates as ISO months, durations in months.
Json value_json(const Value& v);
/// Same shape as value_json with bounds at full precision.
Json exact_value_json(const Value& v);
Json span_json(const Span& s);

/// Blocks with their expanded members, source spans and the references
/// each expression uses.
Json model_json(const Snapshot& s);
/// Bounds, availability, replacement and requirement cases at one month.
/// Cases come from the snapshot's horizon sweep and are null outside it.
Json solve_json(const Snapshot& s, long long month, const SolveResult& r);
/// Solves and serializes; the CLI and the HTTP service both use this.
Json solve_json(const Snapshot& s, long long month);
Json sweep_json(const Snapshot& s, const Sweep& sw);
/// Trace of one reference at `month`, with change flags against month-1.
/// Throws std::out_of_range for an unknown reference.
Json trace_json(const Snapshot& s, const std::string& ref, long long month);

Json error_json(const std::string& message, std::optional<Span> span = std::nullopt);
/// Errors of a failed parse or validation, first one as the headline.
Json model_error_json(const ModelError& e, const std::string& source);

/// 1-based line and column of a byte offset.
std::pair<int, int> line_col(const std::string& source, std::uint32_t offset);

/// Serialized with two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace roadmap
