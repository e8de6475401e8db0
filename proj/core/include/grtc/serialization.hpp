// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "grtc/change_log.hpp"
#include "grtc/generator.hpp"
#include "grtc/metrics.hpp"
#include "grtc/rotation_state.hpp"

namespace grtc {

using Json = nlohmann::ordered_json;

/// {"step": i, "current": "g1", "ring": [...], "members": {"g1": [...], ...}}
Json state_to_json(const RotationState& state);
Json change_log_to_json(const ChangeLog& log);

/// {"v": 1, "config": {...}, "states": [...], "change_logs": [...], "times": [...],
///  "stalls": [...], "unconsumed": n}
Json record_to_json(const RunRecord& record);

/// Rebuilds states and logs from a record document. Worker seq numbers are
/// reassigned in order of first appearance. Throws Error{CorruptRecord}.
RunRecord record_from_json(const Json& doc);

Json report_to_json(const RunReport& report);

/// Stable text form used for every file we write (2-space indent, trailing newline).
std::string to_text(const Json& doc);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace grtc
