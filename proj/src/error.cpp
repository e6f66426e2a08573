//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/error.hpp"

namespace revpref {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::kParameter:
    return "parameter";
  case ErrorKind::kDimension:
    return "dimension";
  case ErrorKind::kEmptyDataset:
    return "empty_dataset";
  case ErrorKind::kNumeric:
    return "numeric";
  case ErrorKind::kIncompleteRecord:
    return "incomplete_record";
  case ErrorKind::kUndefinedDenominator:
    return "undefined_denominator";
  case ErrorKind::kUndefinedProgress:
    return "undefined_progress";
  case ErrorKind::kUndefinedRatio:
    return "undefined_ratio";
  case ErrorKind::kDegenerateInput:
    return "degenerate_input";
  case ErrorKind::kParse:
    return "parse";
  case ErrorKind::kRange:
    return "range";
  case ErrorKind::kIntegrity:
    return "integrity";
  case ErrorKind::kIo:
    return "io";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string &message) {
  throw Error(kind, message);
}

}  // namespace revpref
