// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include "grtc/validation.hpp"

namespace grtc {

/// Re-checks a serialized run record on its own terms: every state against
/// the group-rotation conditions, every consecutive pair against the follows
/// relation, and every change log by replaying it. Shares nothing with the
/// operators but the file schema. Violations carry the step index of the
/// later state; floor shortfalls are reported as notices.
ValidationReport validate_record(const nlohmann::ordered_json& record);

}  // namespace grtc
