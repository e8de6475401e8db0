// Copyright 2026 The grtc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grtc {

enum class ErrorCode {
  UnknownGroup,
  UnknownWorker,
  DuplicateWorker,
  InvalidState,
  BelowThreshold,
  TooFewGroups,
  DonorTooSmall,
  ForbiddenMove,
  TooSmall,
  InconsistentEvent,
  InvalidPair,
  CorruptRecord,
  InvalidConfig,
  ParseError,
  OrderError,
  ConsistencyError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when no valid successor state exists: fewer than two live workers,
/// or a group would be left empty with no legal way to refill it.
class StallError : public std::runtime_error {
 public:
  explicit StallError(const std::string& what) : std::runtime_error("Stall: " + what) {}
};

/// Trace/config file errors that carry a 1-based line number (0 if unknown).
class FileError : public Error {
 public:
  FileError(ErrorCode code, std::string file, std::size_t line, const std::string& what)
      : Error(code, file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace grtc
