//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace revpref {

enum class ErrorKind {
  kParameter,
  kDimension,
  kEmptyDataset,
  kNumeric,
  kIncompleteRecord,
  kUndefinedDenominator,
  kUndefinedProgress,
  kUndefinedRatio,
  kDegenerateInput,
  kParse,
  kRange,
  kIntegrity,
  kIo,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure surfaced by the library is an Error carrying a kind tag, so
// callers (and the CLI's machine-readable error record) can dispatch on it.
class Error: public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) { }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &message);

}  // namespace revpref
