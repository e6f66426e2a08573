//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string_view>

#include "revpref/core.hpp"

namespace revpref {

// Parsers for the recorded text responses of the elicitation prompts. Each
// accepts surrounding whitespace and blank lines and rejects anything it
// cannot map without guessing (kParse, or kRange for negative costs and
// probabilities outside [0, 1]).

// "No: <p>\nYes: <p>", labels in either order. Sums within 0.02 of one are
// renormalized; the Yes probability is returned.
Belief parse_probability_response(std::string_view text);

struct DecisionResponse {
  // Defer when the agent says it cannot decide.
  Action action = Action::kDefer;
  // The answer to "if you had to decide", always yes or no.
  Action forced_choice = Action::kDiagnosePositive;
};

// "Can decide: Yes|No\nDecision: Yes|No".
DecisionResponse parse_decision_response_detail(std::string_view text);
Action parse_decision_response(std::string_view text);

// "False Positive: <x>\nFalse Negative: <x>\nDeferral: <x>", any order.
CostVector parse_self_report(std::string_view text);

}  // namespace revpref
